#include "anharmonic/wavefunction.hpp"

#include <stdexcept>
#include <string>

namespace anharmonic {

namespace {

Real pow10(int exponent, PrecisionBits bits) {
  Real out = Real::zero(bits);
  mpfr_set_si(out.raw(), 10, MPFR_RNDN);
  mpfr_pow_si(out.raw(), out.raw(), exponent, MPFR_RNDN);
  return out;
}

}  // namespace

Grid::Grid(Decimal x_min, Decimal x_max, Decimal step)
    : x_min_(std::move(x_min)), x_max_(std::move(x_max)), step_(std::move(step)) {
  const Real lo = x_min_.to_real(128);
  const Real hi = x_max_.to_real(128);
  if (hi < lo) throw std::invalid_argument("grid needs x_min <= x_max");
  if (lo < hi && step_.sign() <= 0) throw std::invalid_argument("grid step must be positive");
  if (step_.sign() < 0) throw std::invalid_argument("grid step must be positive");
}

Grid Grid::parse(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
    throw std::invalid_argument("grid must look like min:max:step, got '" + std::string(text) + "'");
  }
  return Grid(Decimal::parse(text.substr(0, first)),
              Decimal::parse(text.substr(first + 1, second - first - 1)),
              Decimal::parse(text.substr(second + 1)));
}

std::vector<Real> Grid::points(PrecisionBits bits) const {
  const PrecisionScope scope(bits);
  const Real lo = x_min_.to_real(bits);
  const Real hi = x_max_.to_real(bits);
  if (lo == hi) return {lo};
  const Real step = step_.to_real(bits);
  // slack absorbs representation error of a step that divides the range
  const Real ratio = floor((hi - lo) / step + pow10(-9, bits));
  const auto count = static_cast<std::size_t>(ratio.to_double()) + 1;
  std::vector<Real> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(lo + Real(k) * step);
  return out;
}

WaveFunction make_wavefunction(const SolveResult& result, std::size_t slot) {
  const EigenPair& pair = result.pairs.at(slot);
  return WaveFunction{result.basis_for(pair.level), pair.vector, pair.value, pair.level};
}

std::vector<Real> basis_functions(std::size_t n_max, const Real& omega0, const Real& x,
                                  const PrecisionContext& ctx) {
  const PrecisionBits bits = ctx.working_bits();
  const PrecisionScope scope(bits);
  const Real w = omega0.with_precision(bits);
  const Real xi = sqrt(w) * x.with_precision(bits);
  std::vector<Real> phi;
  phi.reserve(n_max + 1);
  phi.push_back(sqrt(sqrt(w / pi(bits))) * exp(-(xi * xi) / Real(2)));
  if (n_max >= 1) phi.push_back(sqrt(Real(2)) * xi * phi[0]);
  for (std::size_t k = 1; k < n_max; ++k) {
    const Real kk(k);
    phi.push_back(sqrt(Real(2) / (kk + Real(1))) * xi * phi[k] -
                  sqrt(kk / (kk + Real(1))) * phi[k - 1]);
  }
  return phi;
}

Real basis_function(std::size_t n, const Real& omega0, const Real& x, const PrecisionContext& ctx) {
  return basis_functions(n, omega0, x, ctx).back();
}

Real evaluate(const WaveFunction& wf, const Real& x, const PrecisionContext& ctx) {
  if (wf.coefficients.size() != wf.basis.dimension()) {
    throw std::invalid_argument("coefficient count does not match the basis");
  }
  const PrecisionBits bits = ctx.working_bits();
  const PrecisionScope scope(bits);
  const Real omega0 = wf.basis.omega0().to_real(bits);
  const std::vector<Real> phi =
      basis_functions(wf.basis.full_index(wf.basis.order()), omega0, x, ctx);
  Real sum = Real::zero(bits);
  for (std::size_t j = 0; j < wf.coefficients.size(); ++j) {
    sum += wf.coefficients[j] * phi[wf.basis.full_index(j)];
  }
  return sum;
}

std::vector<std::pair<Real, Real>> sample(const WaveFunction& wf, const Grid& grid,
                                          const PrecisionContext& ctx) {
  std::vector<std::pair<Real, Real>> out;
  for (Real& x : grid.points(ctx.working_bits())) {
    Real y = evaluate(wf, x, ctx);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

Real integrate(const std::function<Real(const Real&)>& f, const Real& a, const Real& b,
               const PrecisionContext& ctx) {
  const PrecisionBits bits = ctx.working_bits();
  const PrecisionScope scope(bits);
  const Real lo = a.with_precision(bits);
  const Real hi = b.with_precision(bits);
  std::size_t panels = 64;
  Real h = (hi - lo) / Real(panels);
  Real edge_sum = (f(lo) + f(hi)) / Real(2);
  Real inner_sum = Real::zero(bits);
  for (std::size_t k = 1; k < panels; ++k) inner_sum += f(lo + Real(k) * h);
  Real estimate = h * (edge_sum + inner_sum);
  const Real tol = pow10(-static_cast<int>(ctx.target_digits()), bits);
  for (int round = 0; round < 24; ++round) {
    // midpoints of the current panels
    Real mids = Real::zero(bits);
    for (std::size_t k = 0; k < panels; ++k) {
      mids += f(lo + (Real(2 * k + 1) * h) / Real(2));
    }
    inner_sum += mids;
    panels *= 2;
    h /= Real(2);
    Real refined = h * (edge_sum + inner_sum);
    const Real scale = max(Real(1), abs(refined));
    const bool done = abs(refined - estimate) <= tol * scale;
    estimate = std::move(refined);
    if (done) break;
  }
  return estimate;
}

Real quadrature_half_width(const WaveFunction& wf, const PrecisionContext& ctx,
                           const Decimal& lambda) {
  const PrecisionBits bits = ctx.working_bits();
  const PrecisionScope scope(bits);
  const Real lam = lambda.to_real(bits);
  const Real base = max(Real(8), Real(12) * pow(lam + Real(1), Real(-1) / Real(6)));
  Real half_width = base / sqrt(wf.basis.omega0().to_real(bits));
  const Real tol = pow10(-static_cast<int>(ctx.target_digits()), bits);
  for (int round = 0; round < 16; ++round) {
    const Real edge = max(abs(evaluate(wf, half_width, ctx)), abs(evaluate(wf, -half_width, ctx)));
    if (edge < tol) break;
    half_width *= Real(2);
  }
  return half_width;
}

Real norm_check(const WaveFunction& wf, const PrecisionContext& ctx, const Decimal& lambda) {
  const PrecisionScope scope(ctx.working_bits());
  const Real half_width = quadrature_half_width(wf, ctx, lambda);
  return integrate(
      [&](const Real& x) {
        const Real psi = evaluate(wf, x, ctx);
        return psi * psi;
      },
      -half_width, half_width, ctx);
}

PotentialSeries sample_potential(const ModelParams& params, const Decimal& omega0,
                                 const Grid& grid, const PrecisionContext& ctx) {
  if (omega0.sign() <= 0) throw std::domain_error("basis frequency omega0 must be positive");
  const PrecisionBits bits = ctx.working_bits();
  const PrecisionScope scope(bits);
  const Real w = omega0.to_real(bits);
  const Real lam = params.lambda().to_real(bits);
  PotentialSeries out;
  for (Real& x : grid.points(bits)) {
    const Real x2 = x * x;
    out.harmonic.push_back(w * w * x2 / Real(2));
    out.perturbation.push_back(lam * x2 * x2);
    out.x.push_back(std::move(x));
  }
  return out;
}

}  // namespace anharmonic
