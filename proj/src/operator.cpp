#include "anharmonic/operator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anharmonic {

ModelParams::ModelParams(Decimal lambda, Decimal omega)
    : lambda_(std::move(lambda)), omega_(std::move(omega)) {
  if (lambda_.sign() < 0) {
    throw std::domain_error(
        "negative coupling lambda: the x^4 well turns over and the spectrum "
        "becomes continuous (no bound states)");
  }
  if (omega_.sign() <= 0) {
    throw std::domain_error("oscillator frequency omega must be positive");
  }
}

Parity parity_of_level(std::size_t level) {
  return level % 2 == 0 ? Parity::even : Parity::odd;
}

const char* to_string(Parity parity) { return parity == Parity::even ? "even" : "odd"; }

BasisSpec::BasisSpec(Decimal omega0, Parity parity, std::size_t order)
    : omega0_(std::move(omega0)), parity_(parity), order_(order) {
  if (omega0_.sign() <= 0) {
    throw std::domain_error("basis frequency omega0 must be positive");
  }
}

// ---------------------------------------------------------------------------

BandedMatrix::BandedMatrix(std::size_t dim, std::size_t half_bandwidth, PrecisionBits bits)
    : dim_(dim), bits_(bits) {
  if (dim == 0) throw std::invalid_argument("matrix dimension must be positive");
  bands_.reserve(half_bandwidth + 1);
  for (std::size_t k = 0; k <= half_bandwidth; ++k) {
    bands_.emplace_back(k < dim ? dim - k : 0, Real::zero(bits));
  }
}

Real BandedMatrix::entry(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= dim_) throw std::out_of_range("matrix index out of range");
  const std::size_t lo = std::min(i, j);
  const std::size_t k = std::max(i, j) - lo;
  if (k > half_bandwidth()) return Real::zero(bits_);
  return bands_[k][lo];
}

Real& BandedMatrix::at(std::size_t i, std::size_t j) {
  const std::size_t lo = std::min(i, j);
  const std::size_t k = std::max(i, j) - lo;
  if (k > half_bandwidth() || std::max(i, j) >= dim_) {
    throw std::out_of_range("entry outside the stored band");
  }
  return bands_[k][lo];
}

const Real& BandedMatrix::at(std::size_t i, std::size_t j) const {
  return const_cast<BandedMatrix&>(*this).at(i, j);
}

std::vector<Real> BandedMatrix::multiply(const std::vector<Real>& x) const {
  if (x.size() != dim_) throw std::invalid_argument("vector length does not match matrix");
  std::vector<Real> y(dim_, Real::zero(bits_));
  for (std::size_t i = 0; i < dim_; ++i) {
    y[i] += bands_[0][i] * x[i];
    for (std::size_t k = 1; k < bands_.size() && i + k < dim_; ++k) {
      y[i] += bands_[k][i] * x[i + k];
      y[i + k] += bands_[k][i] * x[i];
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Matrix elements. Integer factors are exact in the working precision, so the
// square roots are correctly rounded.

Real xi2_element(std::size_t m, std::size_t n) {
  if (m == n) return Real(2 * n + 1) / Real(2);
  if (m + 2 == n) return sqrt(Real(n) * Real(n - 1)) / Real(2);
  if (m == n + 2) return sqrt(Real(n + 1) * Real(n + 2)) / Real(2);
  return Real(0);
}

Real xi4_element(std::size_t m, std::size_t n) {
  if (m == n) {
    return Real(3) * (Real(2) * Real(n) * Real(n) + Real(2 * n + 1)) / Real(4);
  }
  if (m + 2 == n) return Real(2 * n - 1) * sqrt(Real(n) * Real(n - 1)) / Real(2);
  if (m == n + 2) return Real(2 * n + 3) * sqrt(Real(n + 1) * Real(n + 2)) / Real(2);
  if (m + 4 == n) {
    return sqrt(Real(n) * Real(n - 1) * Real(n - 2) * Real(n - 3)) / Real(4);
  }
  if (m == n + 4) {
    return sqrt(Real(n + 1) * Real(n + 2) * Real(n + 3) * Real(n + 4)) / Real(4);
  }
  return Real(0);
}

// ---------------------------------------------------------------------------

double hamiltonian_norm_bound(const ModelParams& params, const BasisSpec& basis) {
  const double omega = params.omega().to_double();
  const double lambda = params.lambda().to_double();
  const double omega0 = basis.omega0().to_double();
  const double k2 = std::abs(omega * omega - omega0 * omega0) / (2 * omega0);
  const double k4 = lambda / (omega0 * omega0);
  // Row sums of |xi^2| and |xi^4| grow like 2n and 6n^2 at the largest
  // index n; evaluate at the top of the sector with slack.
  const double n = static_cast<double>(basis.full_index(basis.order())) + 4.0;
  return omega0 * (n + 0.5) + k2 * (2 * n + 2) + k4 * (6 * n * n + 12 * n + 8);
}

unsigned norm_headroom_digits(const ModelParams& params, const BasisSpec& basis) {
  const double bound = hamiltonian_norm_bound(params, basis);
  return bound > 1.0 ? static_cast<unsigned>(std::ceil(std::log10(bound))) : 0u;
}

BandedMatrix assemble_hamiltonian(const ModelParams& params, const BasisSpec& basis,
                                  const PrecisionContext& ctx) {
  const PrecisionBits bits = ctx.widened(norm_headroom_digits(params, basis)).working_bits();
  const PrecisionScope scope(bits);

  const Real omega = params.omega().to_real(bits);
  const Real lambda = params.lambda().to_real(bits);
  const Real omega0 = basis.omega0().to_real(bits);
  const bool harmonic_basis = params.omega() == basis.omega0();
  const Real k2 = (omega * omega - omega0 * omega0) / (Real(2) * omega0);
  const Real k4 = lambda / (omega0 * omega0);

  const std::size_t dim = basis.dimension();
  BandedMatrix h(dim, 2, bits);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::size_t m = basis.full_index(i);
    for (std::size_t j = i; j < std::min(dim, i + 3); ++j) {
      const std::size_t n = basis.full_index(j);
      Real value = Real::zero(bits);
      if (i == j) value = omega0 * Real(2 * n + 1) / Real(2);
      if (!harmonic_basis) value += k2 * xi2_element(m, n);
      if (!lambda.is_zero()) value += k4 * xi4_element(m, n);
      h.at(i, j) = value;
    }
  }
  return h;
}

}  // namespace anharmonic
