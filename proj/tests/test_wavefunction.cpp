#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "anharmonic/wavefunction.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

using namespace anharmonic;

namespace {

const PrecisionContext ctx8 = make_context(8);

Real real(const char* text) { return Decimal::parse(text).to_real(ctx8.working_bits()); }

WaveFunction from_strings(const std::vector<std::string>& values, const char* omega0) {
  WaveFunction wf{BasisSpec(Decimal::parse(omega0), Parity::even, values.size() - 1), {}, Real(0), 0};
  for (const auto& v : values) wf.coefficients.push_back(Decimal::parse(v).to_real(ctx8.working_bits()));
  return wf;
}

WaveFunction ground_state(const char* lambda, Omega0Policy policy = Omega0Policy::formula()) {
  SolveRequest r{ModelParams(Decimal::parse(lambda))};
  r.omega0_policy = policy;
  return make_wavefunction(solve_levels(r), 0);
}

WaveFunction single_term(const char* omega0, Parity parity, std::size_t order) {
  WaveFunction wf{BasisSpec(Decimal::parse(omega0), parity, order), {}, Real(0), parity == Parity::odd ? 1u : 0u};
  wf.coefficients.assign(order + 1, Real::zero(ctx8.working_bits()));
  wf.coefficients[0] = Real(1);
  return wf;
}

}  // namespace

TEST_CASE("basis_function examples") {
  const PrecisionScope scope(ctx8.working_bits());
  CHECK(std::abs(basis_function(0, Real(1), Real(0), ctx8).to_double() - 0.751125544464942) <= 1e-14);
  CHECK(basis_function(1, Real(1), Real(0), ctx8).is_zero());
  CHECK(basis_function(1, real("4.5"), Real(0), ctx8).is_zero());
  CHECK(std::abs(basis_function(0, Real(16), Real(0), ctx8).to_double() - 1.50225108892988) <= 1e-13);
  const auto all = basis_functions(5, Real(2), real("0.3"), ctx8);
  REQUIRE(all.size() == 6);
  CHECK(all[5] == basis_function(5, Real(2), real("0.3"), ctx8));
}

TEST_CASE("recurrence matches Hermite polynomials for small n") {
  const PrecisionScope scope(ctx8.working_bits());
  for (unsigned n = 0; n <= 10; ++n)
    for (int k = -30; k <= 30; ++k) {
      const long double x = k / 10.0L;
      const double got = basis_function(n, Real(1), Real(static_cast<double>(x)), ctx8).to_double();
      CHECK(std::abs(got - static_cast<double>(oracle::hermite_function(n, x))) <= 1e-12);
    }
}

TEST_CASE("basis functions scale with the frequency") {
  const PrecisionScope scope(ctx8.working_bits());
  for (const char* w : {"0.5", "4.5", "16"}) {
    const Real omega0 = real(w);
    for (std::size_t n : {0u, 3u, 8u, 20u})
      for (const char* x : {"-1.2", "0", "0.7", "2.5"}) {
        const Real lhs = basis_function(n, omega0, real(x), ctx8);
        const Real rhs = sqrt(sqrt(omega0)) * basis_function(n, Real(1), sqrt(omega0) * real(x), ctx8);
        CHECK(abs(lhs - rhs) <= pow(Real(10), Real(-15)));
      }
  }
}

TEST_CASE("basis functions are orthonormal under the quadrature") {
  const auto ctx = ctx8;
  const PrecisionScope scope(ctx.working_bits());
  for (const char* w : {"1", "4.5", "16"}) {
    const Real omega0 = real(w);
    const Real half = Real(12) / sqrt(omega0);
    for (std::size_t m = 0; m <= 12; ++m)
      for (std::size_t n = m; n <= 12; n += 2) {
        const Real overlap = integrate(
            [&](const Real& x) {
              const auto phi = basis_functions(n, omega0, x, ctx);
              return phi[m] * phi[n];
            },
            -half, half, ctx);
        CHECK(abs(overlap - Real(m == n ? 1 : 0)) <= pow(Real(10), Real(2 - static_cast<int>(ctx.target_digits()))));
      }
    // odd products vanish by symmetry, check one anyway
    const Real odd = integrate([&](const Real& x) { return basis_function(0, omega0, x, ctx) * basis_function(3, omega0, x, ctx); },
                               -half, half, ctx);
    CHECK(abs(odd) <= Real(1e-6));
  }
}

TEST_CASE("reconstructions in different bases agree") {
  const auto unit = from_strings(reference::coefficients_unit_frequency_coupling_1, "1");
  const auto& column = reference::coefficients_optimized.front();
  REQUIRE(column.coupling == "1");
  const auto shifted = from_strings(column.values, column.omega0.c_str());
  const PrecisionScope scope(ctx8.working_bits());
  for (const char* x : {"0", "0.5", "1", "2"}) {
    const Real a = evaluate(unit, real(x), ctx8);
    const Real b = evaluate(shifted, real(x), ctx8);
    CHECK(abs(a - b) <= Real(1e-7));
  }
  CHECK(abs(evaluate(unit, Real(6), ctx8)) < Real(1e-6));
  CHECK(abs(evaluate(ground_state("1"), Real(6), ctx8)) < Real(1e-6));
}

TEST_CASE("single-term expansion is the basis function") {
  const auto wf = single_term("4.5", Parity::odd, 6);
  const PrecisionScope scope(ctx8.working_bits());
  for (const char* x : {"-2", "0", "0.3", "1.7"})
    CHECK(evaluate(wf, real(x), ctx8) == basis_function(1, real("4.5"), real(x), ctx8));
}

TEST_CASE("sample") {
  const auto wf = single_term("1", Parity::even, 3);
  const auto one = sample(wf, Grid(0, 0, 0), ctx8);
  REQUIRE(one.size() == 1);
  CHECK(one[0].first.is_zero());

  const auto psi = ground_state("10");
  const auto points = sample(psi, Grid::parse("-3:3:0.25"), ctx8);
  REQUIRE(points.size() == 25);
  const PrecisionScope scope(ctx8.working_bits());
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(points[i].first == -points[points.size() - 1 - i].first);
    CHECK(abs(points[i].second - points[points.size() - 1 - i].second) <= pow(Real(10), Real(-15)));
  }
  const auto excited = make_wavefunction(
      [] {
        SolveRequest r{ModelParams(10)};
        r.levels = {1};
        return solve_levels(r);
      }(),
      0);
  for (const auto& [x, y] : sample(excited, Grid::parse("0.5:2:0.5"), ctx8))
    CHECK(abs(y + evaluate(excited, -x, ctx8)) <= pow(Real(10), Real(-15)));
}

TEST_CASE("strong-coupling ground state is closer to the narrow oscillator") {
  const auto psi = ground_state("100");
  const PrecisionScope scope(ctx8.working_bits());
  Real narrow(0), wide(0);
  for (const auto& [x, y] : sample(psi, Grid::parse("-1:1:0.05"), ctx8)) {
    narrow = max(narrow, abs(y - basis_function(0, Real(16), x, ctx8)));
    wide = max(wide, abs(y - basis_function(0, Real(1), x, ctx8)));
  }
  CHECK(narrow < wide);
}

TEST_CASE("ground state decays monotonically") {
  // energy convergence alone does not pin the far tail; the optimized basis
  // frequency represents it well
  const auto psi = ground_state("1", Omega0Policy::optimize());
  const auto points = sample(psi, Grid::parse("3:6:0.1"), ctx8);
  const PrecisionScope scope(ctx8.working_bits());
  for (std::size_t i = 1; i < points.size(); ++i) CHECK(abs(points[i].second) < abs(points[i - 1].second));
}

TEST_CASE("norm_check") {
  const PrecisionScope scope(ctx8.working_bits());
  const Real tol = pow(Real(10), Real(2 - static_cast<int>(ctx8.target_digits())));
  for (const char* lam : {"0.1", "1", "100", "20000"}) {
    const auto psi = ground_state(lam);
    CHECK(abs(norm_check(psi, ctx8, Decimal::parse(lam)) - Real(1)) <= tol);
  }
  CHECK(abs(norm_check(single_term("16", Parity::even, 4), ctx8) - Real(1)) <= tol);
  auto doubled = ground_state("1");
  for (Real& c : doubled.coefficients) c *= Real(2);
  CHECK(abs(norm_check(doubled, ctx8, 1) - Real(4)) <= tol);
}

TEST_CASE("potential samples") {
  const auto p = sample_potential(ModelParams(100), 16, Grid(-1, 1, 1));
  REQUIRE(p.x.size() == 3);
  CHECK(p.perturbation[2] == Real(100));
  CHECK(p.harmonic[2] == Real(128));
  CHECK(p.harmonic[1].is_zero());
  CHECK(p.perturbation[1].is_zero());
  CHECK(p.perturbation[0] == Real(100));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Grid(0, 1, -1), std::invalid_argument);
  CHECK_THROWS_AS(Grid::parse("0:1"), std::invalid_argument);
  CHECK_THROWS_AS(Grid::parse("a:1:0.1"), std::invalid_argument);
  CHECK(Grid::parse("-5:5:0.01").points(64).size() == 1001);
  CHECK_THROWS_AS(sample_potential(ModelParams(1), 1, Grid::parse("2:1:0.1")), std::invalid_argument);
}
