#include "anharmonic/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace anharmonic {

namespace {

// Lower band storage for the reduction: (i, j) with 0 <= i - j <= width.
class WorkBand {
 public:
  WorkBand(const BandedMatrix& a, std::size_t width, PrecisionBits bits)
      : n_(a.dim()), width_(width), data_((width + 1) * a.dim(), Real::zero(bits)) {
    for (std::size_t k = 0; k <= std::min(a.half_bandwidth(), width); ++k) {
      const auto& band = a.band(k);
      for (std::size_t j = 0; j < band.size(); ++j) data_[k * n_ + j] = band[j].with_precision(bits);
    }
  }

  std::size_t dim() const { return n_; }
  std::size_t width() const { return width_; }

  // Entry (i, j) for i >= j, or nullptr outside the stored band.
  Real* find(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    if (i - j > width_ || i >= n_) return nullptr;
    return &data_[(i - j) * n_ + j];
  }
  Real& at(std::size_t i, std::size_t j) { return *find(i, j); }

 private:
  std::size_t n_;
  std::size_t width_;
  std::vector<Real> data_;
};

struct RotationScratch {
  explicit RotationScratch(PrecisionBits bits)
      : t1(Real::zero(bits)), t2(Real::zero(bits)), s1(Real::zero(bits)), ms(Real::zero(bits)) {}
  Real t1, t2, s1, ms;
};

// A <- G A G^T with G = [[c, s], [-s, c]] acting on coordinates (p, p + 1).
void rotate(WorkBand& w, std::size_t p, const Real& c, const Real& s, RotationScratch& r) {
  const std::size_t q = p + 1;
  const std::size_t n = w.dim();
  const std::size_t lo = p >= w.width() ? p - w.width() : 0;
  const std::size_t hi = std::min(n - 1, q + w.width());
  r.ms = -s;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (k == p || k == q) continue;
    Real* apk = w.find(p, k);
    Real* aqk = w.find(q, k);
    if (apk && aqk) {
      r.t1.assign_dot2(c, *apk, s, *aqk, r.s1);
      r.t2.assign_dot2(c, *aqk, r.ms, *apk, r.s1);
      std::swap(*apk, r.t1);
      std::swap(*aqk, r.t2);
    } else if (apk) {
      *apk *= c;
    } else if (aqk) {
      *aqk *= c;
    }
  }
  Real& app = w.at(p, p);
  Real& aqq = w.at(q, q);
  Real& apq = w.at(q, p);
  const Real cc = c * c;
  const Real ss = s * s;
  const Real cs = c * s;
  const Real two_cs_apq = Real(2) * cs * apq;
  Real new_pp = cc * app + ss * aqq + two_cs_apq;
  Real new_qq = ss * app + cc * aqq - two_cs_apq;
  Real new_pq = cs * (aqq - app) + (cc - ss) * apq;
  app = std::move(new_pp);
  aqq = std::move(new_qq);
  apq = std::move(new_pq);
}

// Zeroes entry (q, col) against (q - 1, col) by a rotation in plane (q - 1, q).
void annihilate(WorkBand& w, std::size_t q, std::size_t col, RotationLog& log,
                RotationScratch& scratch) {
  Real* target = w.find(q, col);
  if (target == nullptr || target->is_zero()) return;
  const std::size_t p = q - 1;
  const Real x = w.at(p, col);
  const Real y = *target;
  const Real r = hypot(x, y);
  Real c = x / r;
  Real s = y / r;
  rotate(w, p, c, s, scratch);
  w.at(p, col) = r;
  w.at(q, col) = Real::zero(r.precision());
  log.push(p, std::move(c), std::move(s));
}

Real pow10(int exponent, PrecisionBits bits) {
  Real out = Real::zero(bits);
  mpfr_set_si(out.raw(), 10, MPFR_RNDN);
  mpfr_pow_si(out.raw(), out.raw(), exponent, MPFR_RNDN);
  return out;
}

Real max_one_abs(const Real& x) {
  Real a = abs(x);
  return a < Real(1) ? Real(1).with_precision(x.precision()) : a;
}

}  // namespace

void RotationLog::back_transform(std::vector<Real>& v) const {
  Real t1, t2, scratch, ms;
  for (auto it = rotations_.rbegin(); it != rotations_.rend(); ++it) {
    Real& vp = v.at(it->plane);
    Real& vq = v.at(it->plane + 1);
    ms = -it->s;
    t1.assign_dot2(it->c, vp, ms, vq, scratch);
    t2.assign_dot2(it->s, vp, it->c, vq, scratch);
    std::swap(vp, t1);
    std::swap(vq, t2);
  }
}

Tridiagonalization band_to_tridiagonal(const BandedMatrix& matrix, const PrecisionContext& ctx) {
  const PrecisionBits bits = std::max(matrix.precision(), ctx.working_bits());
  const PrecisionScope scope(bits);
  const std::size_t n = matrix.dim();
  const std::size_t b = matrix.half_bandwidth();

  RotationLog log;
  if (b > 1) {
    WorkBand w(matrix, b + 1, bits);
    RotationScratch scratch(bits);
    for (std::size_t j = 0; j + 2 < n; ++j) {
      for (std::size_t k = std::min(b, n - 1 - j); k >= 2; --k) {
        const std::size_t r = j + k;
        const bool had_entry = w.find(r, j) && !w.at(r, j).is_zero();
        annihilate(w, r, j, log, scratch);
        if (!had_entry) continue;
        // chase the bulge created at (r + b, r - 1) down the band
        for (std::size_t q = r + b; q < n; q += b) {
          if (w.find(q, q - b - 1)->is_zero()) break;
          annihilate(w, q, q - b - 1, log, scratch);
        }
      }
    }
    BandedMatrix tri(n, 1, bits);
    for (std::size_t i = 0; i < n; ++i) {
      tri.at(i, i) = w.at(i, i);
      if (i + 1 < n) tri.at(i, i + 1) = w.at(i + 1, i);
    }
    return {std::move(tri), std::move(log)};
  }

  BandedMatrix tri(n, 1, bits);
  for (std::size_t i = 0; i < n; ++i) {
    tri.at(i, i) = matrix.entry(i, i).with_precision(bits);
    if (i + 1 < n) tri.at(i, i + 1) = matrix.entry(i, i + 1).with_precision(bits);
  }
  return {std::move(tri), std::move(log)};
}


namespace {

// Negative pivots of the LDL^T factorization of T - shift, with squared
// off-diagonal `e2`.
std::size_t count_below(const std::vector<Real>& d, const std::vector<Real>& e2, const Real& shift,
                        const Real& tiny, Real& q, Real& t) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    mpfr_sub(t.raw(), d[i].raw(), shift.raw(), MPFR_RNDN);
    if (i > 0) {
      mpfr_div(q.raw(), e2[i - 1].raw(), q.raw(), MPFR_RNDN);
      mpfr_sub(q.raw(), t.raw(), q.raw(), MPFR_RNDN);
    } else {
      mpfr_set(q.raw(), t.raw(), MPFR_RNDN);
    }
    if (mpfr_zero_p(q.raw())) mpfr_neg(q.raw(), tiny.raw(), MPFR_RNDN);
    if (mpfr_sgn(q.raw()) < 0) ++count;
  }
  return count;
}

std::vector<Real> squared(const std::vector<Real>& e) {
  std::vector<Real> out;
  out.reserve(e.size());
  for (const Real& x : e) out.push_back(x * x);
  return out;
}

Real epsilon(PrecisionBits bits) {
  Real out = Real::zero(bits);
  mpfr_set_ui_2exp(out.raw(), 1, -static_cast<mpfr_exp_t>(bits), MPFR_RNDN);
  return out;
}

Real norm2(const std::vector<Real>& v) {
  Real sum = Real::zero(v.empty() ? mpfr_get_default_prec() : v.front().precision());
  for (const Real& x : v) sum += x * x;
  return sqrt(sum);
}

void scale(std::vector<Real>& v, const Real& factor) {
  for (Real& x : v) x *= factor;
}

Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real sum = Real::zero(a.front().precision());
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

void orthogonalize(std::vector<Real>& v, const std::vector<std::vector<Real>>& against) {
  for (const auto& u : against) {
    const Real proj = dot(v, u);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * u[i];
  }
}

// LU factorization with partial pivoting of a shifted tridiagonal matrix.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const BandedMatrix& t, const Real& shift, const Real& tiny)
      : d_(t.band(0)), du_(t.band(1)), dl_(t.band(1)), du2_(t.dim(), Real::zero(t.precision())),
        swapped_(t.dim(), false) {
    const std::size_t n = d_.size();
    for (Real& x : d_) x -= shift;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (abs(d_[i]) >= abs(dl_[i])) {
        if (!d_[i].is_zero()) {
          const Real fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const Real fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const Real temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    for (Real& x : d_) {
      if (abs(x) < tiny) x = x.sign() < 0 ? -tiny : tiny;
    }
  }

  void solve(std::vector<Real>& b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        std::swap(b[i], b[i + 1]);
        b[i + 1] -= dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) {
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
  }

 private:
  std::vector<Real> d_, du_, dl_, du2_;
  std::vector<bool> swapped_;
};

Real tridiagonal_residual(const BandedMatrix& t, const std::vector<Real>& v, const Real& value) {
  const std::size_t n = t.dim();
  Real worst = Real::zero(value.precision());
  for (std::size_t i = 0; i < n; ++i) {
    Real r = (t.band(0)[i] - value) * v[i];
    if (i > 0) r += t.band(1)[i - 1] * v[i - 1];
    if (i + 1 < n) r += t.band(1)[i] * v[i + 1];
    worst = max(worst, abs(r));
  }
  return worst;
}

void fix_sign(std::vector<Real>& v, const Real& threshold) {
  for (const Real& x : v) {
    if (abs(x) > threshold) {
      if (x.sign() < 0) {
        for (Real& y : v) y = -y;
      }
      return;
    }
  }
}

void forward_transform(const RotationLog& log, std::vector<Real>& v) {
  Real t1, t2, scratch, ms;
  for (const auto& rot : log.rotations()) {
    Real& vp = v.at(rot.plane);
    Real& vq = v.at(rot.plane + 1);
    ms = -rot.s;
    t1.assign_dot2(rot.c, vp, rot.s, vq, scratch);
    t2.assign_dot2(ms, vp, rot.c, vq, scratch);
    std::swap(vp, t1);
    std::swap(vq, t2);
  }
}

}  // namespace

std::size_t sturm_count(const BandedMatrix& tridiagonal, const Real& shift) {
  if (tridiagonal.half_bandwidth() != 1) {
    throw std::invalid_argument("Sturm count needs a tridiagonal matrix");
  }
  const PrecisionBits bits = std::max(tridiagonal.precision(), shift.precision());
  const PrecisionScope scope(bits);
  Real q = Real::zero(bits);
  Real t = Real::zero(bits);
  Real tiny = epsilon(bits + 64);
  return count_below(tridiagonal.band(0), squared(tridiagonal.band(1)), shift, tiny, q, t);
}

// ---------------------------------------------------------------------------

BandedEigenSolver::BandedEigenSolver(const BandedMatrix& matrix, const PrecisionContext& ctx)
    : ctx_(ctx),
      bits_(std::max(matrix.precision(), ctx.working_bits())),
      tri_(band_to_tridiagonal(matrix, ctx)) {
  const PrecisionScope scope(bits_);
  const BandedMatrix& t = tri_.tridiagonal;
  const std::size_t n = t.dim();
  norm_bound_ = Real::zero(bits_);
  for (std::size_t i = 0; i < n; ++i) {
    Real radius = Real::zero(bits_);
    if (i > 0) radius += abs(t.band(1)[i - 1]);
    if (i + 1 < n) radius += abs(t.band(1)[i]);
    const Real lo = t.band(0)[i] - radius;
    const Real hi = t.band(0)[i] + radius;
    if (i == 0 || lo < lower_) lower_ = lo;
    if (i == 0 || hi > upper_) upper_ = hi;
    norm_bound_ = max(norm_bound_, max(abs(lo), abs(hi)));
  }
  // strict brackets
  const Real pad = max_one_abs(norm_bound_) * pow10(-static_cast<int>(ctx_.working_digits()), bits_);
  lower_ -= pad;
  upper_ += pad;
}

Real BandedEigenSolver::eigenvalue(std::size_t index) const {
  if (index >= dim()) throw std::invalid_argument("eigenvalue index out of range");
  const PrecisionScope scope(bits_);
  const std::vector<Real> e2 = squared(tri_.tridiagonal.band(1));
  const Real tiny = epsilon(bits_) * max_one_abs(norm_bound_);
  const Real rel = pow10(2 - static_cast<int>(ctx_.working_digits()), bits_);
  Real q = Real::zero(bits_);
  Real t = Real::zero(bits_);
  Real lo = lower_;
  Real hi = upper_;
  Real mid = Real::zero(bits_);
  // each halving gains a bit; cap well above what the precision can resolve
  const std::size_t cap = static_cast<std::size_t>(bits_) + 4096;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    mpfr_add(mid.raw(), lo.raw(), hi.raw(), MPFR_RNDN);
    mpfr_div_2ui(mid.raw(), mid.raw(), 1, MPFR_RNDN);
    if (hi - lo <= rel * max_one_abs(mid)) break;
    if (mid <= lo || mid >= hi) break;  // no representable midpoint left
    if (count_below(tri_.tridiagonal.band(0), e2, mid, tiny, q, t) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return mid;
}

std::vector<Real> BandedEigenSolver::lowest(std::size_t k) const {
  if (k == 0 || k > dim()) throw std::invalid_argument("requested eigenvalue count out of range");
  std::vector<Real> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(eigenvalue(i));
  return out;
}

std::vector<Real> BandedEigenSolver::tridiagonal_vector(
    const Real& value, const std::vector<std::vector<Real>>& against) const {
  const PrecisionScope scope(bits_);
  const std::size_t n = dim();
  const BandedMatrix& t = tri_.tridiagonal;
  const Real mu = value.with_precision(bits_);
  const Real tiny = epsilon(bits_) * max_one_abs(norm_bound_);
  const ShiftedTridiagonalLU lu(t, mu, tiny);

  // deterministic start; inside a cluster fall back to unit vectors until one
  // survives orthogonalization
  std::vector<Real> v(n, sqrt(Real(1) / Real(n)));
  if (!against.empty()) {
    orthogonalize(v, against);
    for (std::size_t j = 0; norm2(v) < Real(0.5) / Real(n) && j < n; ++j) {
      v.assign(n, Real::zero(bits_));
      v[j] = Real(1);
      orthogonalize(v, against);
    }
  }
  scale(v, Real(1) / norm2(v));

  const Real scale_mu = max_one_abs(mu);
  const Real goal = pow10(4 - static_cast<int>(ctx_.working_digits()), bits_) * scale_mu;
  for (int iter = 0; iter < 8; ++iter) {
    lu.solve(v);
    orthogonalize(v, against);
    scale(v, Real(1) / norm2(v));
    if (iter >= 1 && tridiagonal_residual(t, v, mu) <= goal) break;
  }
  const Real contract = pow10(1 - static_cast<int>(ctx_.target_digits()), bits_) * scale_mu;
  if (!(tridiagonal_residual(t, v, mu) <= contract)) {
    throw std::domain_error("inverse iteration did not converge; eigenvalue estimate is inaccurate");
  }
  return v;
}

std::vector<Real> BandedEigenSolver::eigenvector(const Real& value,
                                                 const std::vector<EigenPair>& previous) const {
  const PrecisionScope scope(bits_);
  const Real spacing =
      pow10(-static_cast<int>((ctx_.target_digits() + 1) / 2), bits_) * max_one_abs(value);
  std::vector<std::vector<Real>> against;
  for (const EigenPair& pair : previous) {
    if (pair.vector.size() != dim()) throw std::invalid_argument("eigenvector dimension mismatch");
    if (abs(pair.value - value) < spacing) {
      std::vector<Real> u = pair.vector;
      for (Real& x : u) x = x.with_precision(bits_);
      forward_transform(tri_.transform, u);
      against.push_back(std::move(u));
    }
  }
  std::vector<Real> v = tridiagonal_vector(value, against);
  tri_.transform.back_transform(v);
  fix_sign(v, sqrt(pow10(-static_cast<int>(ctx_.working_digits()), bits_)));
  return v;
}

std::vector<EigenPair> BandedEigenSolver::lowest_pairs(std::size_t k) const {
  const std::vector<Real> values = lowest(k);
  std::vector<EigenPair> pairs;
  pairs.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    pairs.push_back({i, values[i], eigenvector(values[i], pairs)});
  }
  return pairs;
}

std::vector<Real> eigenvalues_lowest(const BandedMatrix& matrix, std::size_t k,
                                     const PrecisionContext& ctx) {
  if (k == 0 || k > matrix.dim()) {
    throw std::invalid_argument("requested eigenvalue count out of range");
  }
  return BandedEigenSolver(matrix, ctx).lowest(k);
}

std::vector<Real> eigenvector(const BandedMatrix& matrix, const Real& value,
                              const PrecisionContext& ctx) {
  return BandedEigenSolver(matrix, ctx).eigenvector(value);
}

Real residual_norm(const BandedMatrix& matrix, const EigenPair& pair) {
  if (pair.vector.size() != matrix.dim()) {
    throw std::invalid_argument("eigenvector dimension does not match matrix");
  }
  const PrecisionBits bits = std::max(matrix.precision(), pair.value.precision());
  const PrecisionScope scope(bits);
  const std::vector<Real> hv = matrix.multiply(pair.vector);
  Real worst = Real::zero(bits);
  for (std::size_t i = 0; i < hv.size(); ++i) worst = max(worst, abs(hv[i] - pair.value * pair.vector[i]));
  return worst;
}

}  // namespace anharmonic
