#pragma once

// Convergence-controlled level solving, basis-frequency selection and
// convergence tables.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "anharmonic/eigensolve.hpp"
#include "anharmonic/numerics.hpp"
#include "anharmonic/operator.hpp"

namespace anharmonic {

/// omega0 = a + b mu + c mu^alpha with mu = ln(lambda).
struct Omega0Model {
  double a = 3.47542;
  double b = 1.92476;
  double c = 2.25163e-7;
  double alpha = 8.48258;
};

/// For mu >= 0 the model value; for mu < 0, max(1, a + b mu).
/// Throws std::domain_error for lambda <= 0.
double predict_omega0(double lambda, const Omega0Model& model = {});

/// Basis frequency predicted for a general problem via the scaling
/// omega0 = omega * predict(lambda / omega^3); omega itself when lambda = 0.
double predict_omega0(const ModelParams& params, const Omega0Model& model = {});

/// Golden-section minimization of the level's truncated eigenvalue over
/// omega0 in [max(omega, 0.5), 3 * predicted + 10], bracket tolerance 0.05.
/// Returns the best evaluated point.
double optimize_omega0(const ModelParams& params, std::size_t order, std::size_t level,
                       const PrecisionContext& ctx);

/// Least-squares fit of the model to (lambda, omega0) points: exhaustive
/// alpha grid on [1, 12] with step 0.005, linear least squares for (a, b, c).
/// Needs at least 5 points, all with lambda >= 1.
Omega0Model fit_omega0_model(const std::vector<std::pair<double, double>>& points);

/// Sum of squared residuals of the model over the points.
double omega0_model_sse(const Omega0Model& model,
                        const std::vector<std::pair<double, double>>& points);

class Omega0Policy {
 public:
  enum class Kind { fixed, formula, optimize };

  static Omega0Policy fixed(Decimal omega0) { return {Kind::fixed, std::move(omega0)}; }
  static Omega0Policy formula() { return {Kind::formula, Decimal()}; }
  static Omega0Policy optimize() { return {Kind::optimize, Decimal()}; }

  Kind kind() const { return kind_; }
  /// Only meaningful for Kind::fixed.
  const Decimal& value() const { return value_; }

 private:
  Omega0Policy(Kind kind, Decimal value) : kind_(kind), value_(std::move(value)) {}
  Kind kind_;
  Decimal value_;
};

struct ConvergenceRow {
  std::size_t order = 0;
  std::vector<Real> energies;
};

struct SolveRequest {
  ModelParams params;
  /// Global level indices; level n lives in parity sector n mod 2.
  std::vector<std::size_t> levels{0};
  unsigned target_digits = 8;
  Omega0Policy omega0_policy = Omega0Policy::formula();
  std::size_t n_start = 8;
  std::size_t n_max = 2000;
};

struct SolveResult {
  /// One pair per requested level, in request order; `level` is the global
  /// index and `vector` holds the sector coefficients.
  std::vector<EigenPair> pairs;
  std::size_t final_order = 0;
  Decimal omega0_used;
  std::vector<ConvergenceRow> history;

  BasisSpec basis_for(std::size_t level) const {
    return BasisSpec(omega0_used, parity_of_level(level), final_order);
  }
};

/// Raised when the requested digits are not stable by n_max.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<ConvergenceRow> last_rows)
      : std::runtime_error(what), rows_(std::move(last_rows)) {}
  const std::vector<ConvergenceRow>& last_rows() const { return rows_; }

 private:
  std::vector<ConvergenceRow> rows_;
};

/// Orders tested by solve_levels, starting at n_start: N -> max(N + 1,
/// ceil(1.25 N)), with n_max tested last when the schedule would skip it.
std::vector<std::size_t> order_schedule(std::size_t n_start, std::size_t n_max);

/// The basis frequency a request resolves to.
Decimal resolve_omega0(const SolveRequest& request);

/// Solves until three consecutive scheduled orders print identically with
/// target_digits decimals for every level. The result is taken at the first
/// order of that triple.
SolveResult solve_levels(const SolveRequest& request);

/// Energy of `level` at each of the given orders (ascending) with a fixed
/// basis frequency. Orders are evaluated concurrently; rows keep the
/// requested order.
std::vector<ConvergenceRow> convergence_table(const ModelParams& params, const Decimal& omega0,
                                              const std::vector<std::size_t>& orders,
                                              std::size_t level, unsigned target_digits = 8);

/// Worker threads for concurrent table rows: ANHARM_THREADS if set and
/// positive, otherwise the hardware concurrency.
unsigned worker_count();

}  // namespace anharmonic
