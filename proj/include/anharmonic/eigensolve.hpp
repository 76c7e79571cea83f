#pragma once

// Lowest eigenpairs of a symmetric band matrix at arbitrary precision:
// band -> tridiagonal by plane rotations, Sturm-count bisection for the
// eigenvalues, inverse iteration on the tridiagonal form for the vectors.

#include <cstddef>
#include <vector>

#include "anharmonic/numerics.hpp"
#include "anharmonic/operator.hpp"

namespace anharmonic {

struct EigenPair {
  std::size_t level = 0;
  Real value;
  std::vector<Real> vector;
};

/// Sequence of plane rotations G_1, ..., G_m with T = G_m ... G_1 A G_1^T ... G_m^T.
/// Rotation (p, c, s) acts on coordinates p and p + 1.
class RotationLog {
 public:
  struct Rotation {
    std::size_t plane;
    Real c;
    Real s;
  };

  void push(std::size_t plane, Real c, Real s) {
    rotations_.push_back({plane, std::move(c), std::move(s)});
  }
  std::size_t size() const { return rotations_.size(); }
  bool empty() const { return rotations_.empty(); }
  const std::vector<Rotation>& rotations() const { return rotations_; }

  /// Maps an eigenvector of T to the matching eigenvector of A in place.
  void back_transform(std::vector<Real>& v) const;

 private:
  std::vector<Rotation> rotations_;
};

struct Tridiagonalization {
  BandedMatrix tridiagonal;  // half-bandwidth 1
  RotationLog transform;
};

/// Orthogonal reduction to tridiagonal form. Works at the larger of the
/// matrix precision and ctx.working_bits().
Tridiagonalization band_to_tridiagonal(const BandedMatrix& matrix, const PrecisionContext& ctx);

/// Number of eigenvalues of the tridiagonal matrix strictly below `shift`.
std::size_t sturm_count(const BandedMatrix& tridiagonal, const Real& shift);

/// Caches the tridiagonal reduction of one matrix so that several
/// eigenvalues and eigenvectors can be extracted from it.
class BandedEigenSolver {
 public:
  BandedEigenSolver(const BandedMatrix& matrix, const PrecisionContext& ctx);

  std::size_t dim() const { return tri_.tridiagonal.dim(); }
  PrecisionBits precision() const { return bits_; }
  const BandedMatrix& tridiagonal() const { return tri_.tridiagonal; }

  /// The k smallest eigenvalues in ascending order.
  std::vector<Real> lowest(std::size_t k) const;
  /// The `index`-th smallest eigenvalue (0-based).
  Real eigenvalue(std::size_t index) const;
  /// Unit eigenvector for `value`; orthogonalized against `previous` when
  /// `value` lies within the cluster spacing of their eigenvalues.
  std::vector<Real> eigenvector(const Real& value,
                                const std::vector<EigenPair>& previous = {}) const;
  /// Eigenpairs for indices 0..k-1.
  std::vector<EigenPair> lowest_pairs(std::size_t k) const;

 private:
  std::vector<Real> tridiagonal_vector(const Real& value,
                                       const std::vector<std::vector<Real>>& against) const;

  PrecisionContext ctx_;
  PrecisionBits bits_;
  Tridiagonalization tri_;
  Real norm_bound_;
  Real lower_;
  Real upper_;
};

std::vector<Real> eigenvalues_lowest(const BandedMatrix& matrix, std::size_t k,
                                     const PrecisionContext& ctx);

std::vector<Real> eigenvector(const BandedMatrix& matrix, const Real& value,
                              const PrecisionContext& ctx);

/// ||H v - E v||_inf.
Real residual_norm(const BandedMatrix& matrix, const EigenPair& pair);

}  // namespace anharmonic
