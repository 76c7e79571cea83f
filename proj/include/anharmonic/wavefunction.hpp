#pragma once

// Coordinate-space basis functions and reconstructed eigenfunctions.

#include <cstddef>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "anharmonic/numerics.hpp"
#include "anharmonic/operator.hpp"
#include "anharmonic/spectrum.hpp"

namespace anharmonic {

/// Inclusive grid x_min, x_min + step, ... up to x_max.
class Grid {
 public:
  /// Throws std::invalid_argument unless x_min <= x_max and step > 0
  /// (the step is irrelevant, and may be zero, when x_min == x_max).
  Grid(Decimal x_min, Decimal x_max, Decimal step);
  /// Parses "min:max:step".
  static Grid parse(std::string_view text);

  const Decimal& x_min() const { return x_min_; }
  const Decimal& x_max() const { return x_max_; }
  const Decimal& step() const { return step_; }

  std::vector<Real> points(PrecisionBits bits) const;

 private:
  Decimal x_min_, x_max_, step_;
};

struct WaveFunction {
  BasisSpec basis;
  std::vector<Real> coefficients;
  Real energy;
  std::size_t level = 0;
};

/// The wavefunction of result.pairs[slot].
WaveFunction make_wavefunction(const SolveResult& result, std::size_t slot);

/// Oscillator eigenfunction phi_n(omega0; x) by the normalized three-term
/// recurrence, at ctx working precision.
Real basis_function(std::size_t n, const Real& omega0, const Real& x, const PrecisionContext& ctx);

/// phi_0 .. phi_n_max at one point.
std::vector<Real> basis_functions(std::size_t n_max, const Real& omega0, const Real& x,
                                  const PrecisionContext& ctx);

Real evaluate(const WaveFunction& wf, const Real& x, const PrecisionContext& ctx);

std::vector<std::pair<Real, Real>> sample(const WaveFunction& wf, const Grid& grid,
                                          const PrecisionContext& ctx);

/// Composite trapezoid rule on [a, b], halving the step (from (b - a) / 64)
/// until two successive estimates agree to ctx.target_digits().
Real integrate(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
               const PrecisionContext& ctx);

/// Half-width of the norm_check interval for this wavefunction: starts at
/// max(8, 12 (lambda + 1)^(-1/6)) / sqrt(omega0) and doubles until
/// |psi(+-L)| < 10^(-target_digits).
Real quadrature_half_width(const WaveFunction& wf, const PrecisionContext& ctx,
                           const Decimal& lambda = Decimal(0));

/// Integral of psi^2 over [-L, L].
Real norm_check(const WaveFunction& wf, const PrecisionContext& ctx,
                const Decimal& lambda = Decimal(0));

struct PotentialSeries {
  std::vector<Real> x;
  std::vector<Real> harmonic;      // omega0^2 x^2 / 2
  std::vector<Real> perturbation;  // lambda x^4
};

PotentialSeries sample_potential(const ModelParams& params, const Decimal& omega0,
                                 const Grid& grid, const PrecisionContext& ctx = make_context(8));

}  // namespace anharmonic
