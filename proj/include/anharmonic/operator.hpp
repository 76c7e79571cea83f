#pragma once

// Matrix elements of the coordinate powers in the oscillator basis and the
// parity-reduced Hamiltonian
//
//   H = (p^2 + omega^2 x^2) / 2 + lambda x^4
//
// expanded in eigenfunctions of an oscillator with basis frequency omega0.

#include <cstddef>
#include <vector>

#include "anharmonic/numerics.hpp"

namespace anharmonic {

/// Physical problem: oscillator frequency omega > 0, coupling lambda >= 0.
class ModelParams {
 public:
  /// Throws std::domain_error for omega <= 0 or lambda < 0.
  ModelParams(Decimal lambda, Decimal omega = Decimal(1));

  const Decimal& lambda() const { return lambda_; }
  const Decimal& omega() const { return omega_; }

 private:
  Decimal lambda_;
  Decimal omega_;
};

enum class Parity { even, odd };

Parity parity_of_level(std::size_t level);
const char* to_string(Parity parity);

/// Expansion basis: frequency omega0, parity sector and reduced truncation
/// order N (the sector holds N + 1 functions with full-basis indices
/// 2j or 2j + 1, j = 0..N).
class BasisSpec {
 public:
  /// Throws std::domain_error for omega0 <= 0.
  BasisSpec(Decimal omega0, Parity parity, std::size_t order);

  const Decimal& omega0() const { return omega0_; }
  Parity parity() const { return parity_; }
  std::size_t order() const { return order_; }
  std::size_t dimension() const { return order_ + 1; }
  /// Full-basis index of sector position j.
  std::size_t full_index(std::size_t j) const {
    return 2 * j + (parity_ == Parity::odd ? 1 : 0);
  }

 private:
  Decimal omega0_;
  Parity parity_;
  std::size_t order_;
};

/// Symmetric band matrix; stores the diagonal and `half_bandwidth`
/// superdiagonals.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t dim, std::size_t half_bandwidth, PrecisionBits bits);

  std::size_t dim() const { return dim_; }
  std::size_t half_bandwidth() const { return bands_.size() - 1; }
  PrecisionBits precision() const { return bits_; }

  /// Entry (i, j); zero outside the band.
  Real entry(std::size_t i, std::size_t j) const;
  /// Reference to stored entry (i, j) with |i - j| <= half_bandwidth.
  Real& at(std::size_t i, std::size_t j);
  const Real& at(std::size_t i, std::size_t j) const;

  /// Band k (0 = diagonal), length dim - k.
  const std::vector<Real>& band(std::size_t k) const { return bands_[k]; }

  /// y = A x.
  std::vector<Real> multiply(const std::vector<Real>& x) const;

 private:
  std::size_t dim_;
  PrecisionBits bits_;
  std::vector<std::vector<Real>> bands_;
};

/// <phi_m | xi^2 | phi_n> in the dimensionless oscillator basis, at the
/// calling thread's default precision.
Real xi2_element(std::size_t m, std::size_t n);

/// <phi_m | xi^4 | phi_n>; nonzero only for |m - n| in {0, 2, 4}.
Real xi4_element(std::size_t m, std::size_t n);

/// Upper bound on the spectral radius of the sector Hamiltonian (Gershgorin
/// row sums evaluated in double precision).
double hamiltonian_norm_bound(const ModelParams& params, const BasisSpec& basis);

/// Parity-reduced Hamiltonian with entries
///   omega0 (n + 1/2) delta_mn + (omega^2 - omega0^2) / (2 omega0) <xi^2>_mn
///     + lambda / omega0^2 <xi^4>_mn
/// for full-basis indices m, n of the sector. Entries are computed with
/// ctx.working_digits() digits plus enough headroom to cover the matrix
/// norm, so the absolute error of any eigenvalue stays below
/// 10^(-working_digits).
BandedMatrix assemble_hamiltonian(const ModelParams& params, const BasisSpec& basis,
                                  const PrecisionContext& ctx);

/// Headroom digits added by assemble_hamiltonian for this problem.
unsigned norm_headroom_digits(const ModelParams& params, const BasisSpec& basis);

}  // namespace anharmonic
