#include <doctest.h>

#include "anharmonic/spectrum.hpp"
#include "reference_data.hpp"
#include "table_support.hpp"

using namespace anharmonic;

namespace {

void check_table(const reference::OrderTable& table, std::size_t level) {
  const auto bad = tables::compare(table, level);
  for (const auto& m : bad) {
    INFO(m.where);
    CHECK(m.got == m.expected);
  }
  CHECK(bad.empty());
}

void check_converged(const reference::OrderTable& table) {
  for (std::size_t col = 0; col < table.couplings.size(); ++col)
    CHECK(table.values.back()[col] == table.converged[col]);
}

std::string twenty_digits(const reference::PrecisionRow& row, std::size_t order) {
  return tables::energies(row.coupling, row.omega0, {order}, 0, 20)[0];
}

}  // namespace

TEST_CASE("weak coupling ground state, unit basis frequency") {
  check_table(reference::weak_ground, 0);
  check_converged(reference::weak_ground);
}

TEST_CASE("intermediate coupling ground state, unit basis frequency") {
  check_table(reference::intermediate_ground, 0);
  check_converged(reference::intermediate_ground);
}

TEST_CASE("superstrong coupling ground state, unit basis frequency") {
  check_table(reference::superstrong_ground, 0);
  check_converged(reference::superstrong_ground);
}

TEST_CASE("weak coupling first excited state, unit basis frequency") {
  check_table(reference::weak_first_excited, 1);
  check_converged(reference::weak_first_excited);
}

TEST_CASE("intermediate coupling ground state, shifted basis frequency") {
  check_table(reference::optimized_intermediate_ground, 0);
}

TEST_CASE("superstrong coupling ground state, shifted basis frequency") {
  check_table(reference::optimized_superstrong_ground, 0);
}

TEST_CASE("converged excited levels") {
  for (const auto& row : reference::excited_levels) {
    SolveRequest r{ModelParams(Decimal::parse(row.coupling))};
    r.levels = {1, 2, 3, 4, 5, 6};
    const auto result = solve_levels(r);
    for (std::size_t i = 0; i < 6; ++i) {
      INFO("lambda=", row.coupling, " level=", i + 1);
      CHECK(result.pairs[i].value.to_fixed(8) == row.energies[i]);
    }
  }
}

TEST_CASE("per-level basis frequencies at unit coupling") {
  for (const auto& m : tables::compare("1", reference::level_optima_unit_coupling)) {
    INFO(m.where);
    CHECK(m.got == m.expected);
  }
}

TEST_CASE("per-level basis frequencies at strong coupling") {
  for (const auto& m : tables::compare("1000", reference::level_optima_strong_coupling)) {
    INFO(m.where);
    CHECK(m.got == m.expected);
  }
}

TEST_CASE("twenty decimals at the listed orders") {
  for (const auto* rows : {&reference::twenty_digit_unit_frequency, &reference::twenty_digit_optimized})
    for (const auto& row : *rows) {
      INFO("lambda=", row.coupling, " omega0=", row.omega0, " N=", row.order);
      CHECK(twenty_digits(row, row.order) == row.energy);
    }
}

TEST_CASE("twenty-decimal orders are minimal") {
  for (const auto* rows : {&reference::twenty_digit_unit_frequency, &reference::twenty_digit_optimized})
    for (const auto& row : *rows) {
      INFO("lambda=", row.coupling, " omega0=", row.omega0, " N=", row.order);
      CHECK(twenty_digits(row, row.order - 1) != row.energy);
    }
}

TEST_CASE("correct digits grow with the order") {
  const auto ctx = make_context(260);
  const PrecisionScope scope(ctx.working_bits());
  const Real exact(reference::benchmark_quarter, ctx.working_bits());
  std::vector<std::size_t> orders;
  for (const auto& d : reference::digits_by_order) orders.push_back(d.order);
  const auto rows = convergence_table(ModelParams(Decimal::parse("0.25")), Decimal::parse("3.7"), orders, 0, 260);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const unsigned digits = reference::digits_by_order[i].digits;
    INFO("N=", orders[i], " digits=", digits);
    // correct decimals: rounding to that many places matches the benchmark
    CHECK(rows[i].energies[0].to_fixed(digits) == tables::round_decimals(reference::benchmark_quarter, digits));
  }
}

TEST_CASE("ground-state coefficients, unit basis frequency") {
  const auto ctx = make_context(30);
  for (const auto& [lambda, expected] :
       {std::pair{"1", &reference::coefficients_unit_frequency_coupling_1},
        std::pair{"10", &reference::coefficients_unit_frequency_coupling_10}}) {
    const auto c = tables::ground_coefficients(lambda, "1", 89, ctx);
    REQUIRE(c.size() == expected->size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double printed = std::stod((*expected)[j]);
      INFO("lambda=", lambda, " j=", j);
      // the printed values carry eight significant digits down to about 1e-16
      if (std::abs(printed) > 1e-15) CHECK(tables::sci8(c[j].to_double()) == tables::sci8(printed));
      else CHECK(std::abs(c[j].to_double() - printed) <= 1e-16);
    }
  }
}

TEST_CASE("ground-state coefficients, shifted basis frequency") {
  const auto ctx = make_context(30);
  for (const auto& column : reference::coefficients_optimized) {
    const auto c = tables::ground_coefficients(column.coupling, column.omega0, column.values.size() - 1, ctx);
    for (std::size_t j = 0; j < c.size(); ++j) {
      INFO("lambda=", column.coupling, " j=", j);
      CHECK(tables::sci8(c[j].to_double()) == tables::sci8(std::stod(column.values[j])));
    }
  }
}
