#include "anharmonic/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>

namespace anharmonic {

namespace {

constexpr double kLog2Of10 = 3.321928094887362;

PrecisionBits max_prec(const Real& a, const Real& b) {
  return std::max(a.precision(), b.precision());
}

std::string mpfr_format(const char* format, int digits, mpfr_srcptr value) {
  char* buffer = nullptr;
  const int length = mpfr_asprintf(&buffer, format, digits, value);
  if (length < 0 || buffer == nullptr) {
    throw std::runtime_error("mpfr_asprintf failed");
  }
  std::string out(buffer, static_cast<std::size_t>(length));
  mpfr_free_str(buffer);
  return out;
}

}  // namespace

PrecisionBits digits_to_bits(unsigned digits) {
  return static_cast<PrecisionBits>(std::ceil(digits * kLog2Of10)) + 4;
}

unsigned bits_to_digits(PrecisionBits bits) {
  return static_cast<unsigned>(std::floor(static_cast<double>(bits - 1) / kLog2Of10));
}

// ---------------------------------------------------------------------------
// Real

Real::Real() { mpfr_init_set_si(value_, 0, MPFR_RNDN); }
Real::Real(int value) { mpfr_init_set_si(value_, value, MPFR_RNDN); }
Real::Real(long value) { mpfr_init_set_si(value_, value, MPFR_RNDN); }
Real::Real(long long value) {
  mpfr_init(value_);
  mpfr_set_sj(value_, static_cast<intmax_t>(value), MPFR_RNDN);
}
Real::Real(unsigned value) { mpfr_init_set_ui(value_, value, MPFR_RNDN); }
Real::Real(unsigned long value) { mpfr_init_set_ui(value_, value, MPFR_RNDN); }
Real::Real(unsigned long long value) {
  mpfr_init(value_);
  mpfr_set_uj(value_, static_cast<uintmax_t>(value), MPFR_RNDN);
}
Real::Real(double value) { mpfr_init_set_d(value_, value, MPFR_RNDN); }

Real::Real(std::string_view text, PrecisionBits bits) {
  mpfr_init2(value_, bits);
  const std::string copy(text);
  char* end = nullptr;
  if (!copy.empty()) mpfr_strtofr(value_, copy.c_str(), &end, 10, MPFR_RNDN);
  if (copy.empty() || end == copy.c_str() || *end != '\0' || !mpfr_number_p(value_)) {
    mpfr_clear(value_);
    throw std::invalid_argument("not a finite decimal number: '" + copy + "'");
  }
}

Real::Real(Uninitialized, PrecisionBits bits) { mpfr_init2(value_, bits); }

Real Real::zero(PrecisionBits bits) {
  Real out(Uninitialized{}, bits);
  mpfr_set_zero(out.value_, 1);
  return out;
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  // Leave `other` as a valid minimal-precision zero.
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (precision() != other.precision()) {
      mpfr_set_prec(value_, other.precision());
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::with_precision(PrecisionBits bits) const {
  Real out(Uninitialized{}, bits);
  mpfr_set(out.value_, value_, MPFR_RNDN);
  return out;
}

double Real::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string Real::to_fixed(unsigned decimals) const {
  std::string out = mpfr_format("%.*RNf", static_cast<int>(decimals), value_);
  // Normalize "-0.000" to "0.000".
  if (!out.empty() && out.front() == '-' &&
      out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

std::string Real::to_scientific(unsigned significant) const {
  const int after_point = significant == 0 ? 0 : static_cast<int>(significant) - 1;
  return mpfr_format("%.*RNe", after_point, value_);
}

Real& Real::operator+=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(value_, rhs.precision(), MPFR_RNDN);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real out(Uninitialized{}, precision());
  mpfr_neg(out.value_, value_, MPFR_RNDN);
  return out;
}

Real operator+(const Real& a, const Real& b) {
  Real out(Real::Uninitialized{}, max_prec(a, b));
  mpfr_add(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

Real operator-(const Real& a, const Real& b) {
  Real out(Real::Uninitialized{}, max_prec(a, b));
  mpfr_sub(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

Real operator*(const Real& a, const Real& b) {
  Real out(Real::Uninitialized{}, max_prec(a, b));
  mpfr_mul(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

Real operator/(const Real& a, const Real& b) {
  Real out(Real::Uninitialized{}, max_prec(a, b));
  mpfr_div(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

bool operator==(const Real& a, const Real& b) {
  return mpfr_equal_p(a.value_, b.value_) != 0;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

Real abs(const Real& x) {
  Real out(Real::Uninitialized{}, x.precision());
  mpfr_abs(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real sqrt(const Real& x) {
  Real out(Real::Uninitialized{}, x.precision());
  mpfr_sqrt(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real exp(const Real& x) {
  Real out(Real::Uninitialized{}, x.precision());
  mpfr_exp(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real log(const Real& x) {
  Real out(Real::Uninitialized{}, x.precision());
  mpfr_log(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real log10(const Real& x) {
  Real out(Real::Uninitialized{}, x.precision());
  mpfr_log10(out.value_, x.value_, MPFR_RNDN);
  return out;
}

Real pow(const Real& base, const Real& exponent) {
  Real out(Real::Uninitialized{}, max_prec(base, exponent));
  mpfr_pow(out.value_, base.value_, exponent.value_, MPFR_RNDN);
  return out;
}

Real hypot(const Real& a, const Real& b) {
  Real out(Real::Uninitialized{}, max_prec(a, b));
  mpfr_hypot(out.value_, a.value_, b.value_, MPFR_RNDN);
  return out;
}

Real floor(const Real& x) {
  Real out(Real::Uninitialized{}, x.precision());
  mpfr_floor(out.value_, x.value_);
  return out;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

void Real::assign_dot2(const Real& a, const Real& b, const Real& c, const Real& d,
                       Real& scratch) {
  const PrecisionBits bits =
      std::max({precision(), a.precision(), b.precision(), c.precision(), d.precision()});
  if (scratch.precision() < bits) mpfr_set_prec(scratch.value_, bits);
  if (precision() < bits) mpfr_set_prec(value_, bits);
  mpfr_mul(scratch.value_, c.value_, d.value_, MPFR_RNDN);
  mpfr_fma(value_, a.value_, b.value_, scratch.value_, MPFR_RNDN);
}

Real pi(PrecisionBits bits) {
  Real out = Real::zero(bits);
  mpfr_const_pi(out.raw(), MPFR_RNDN);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  return os << x.to_scientific(std::max(1u, bits_to_digits(x.precision())));
}

// ---------------------------------------------------------------------------
// PrecisionScope

PrecisionScope::PrecisionScope(PrecisionBits bits) : saved_(mpfr_get_default_prec()) {
  mpfr_set_default_prec(bits);
}

PrecisionScope::~PrecisionScope() { mpfr_set_default_prec(saved_); }

// ---------------------------------------------------------------------------
// Decimal

Decimal::Decimal(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("decimal value must be finite");
  }
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (result.ec != std::errc{}) {
    throw std::invalid_argument("cannot format decimal value");
  }
  text_.assign(buffer, result.ptr);
}

Decimal Decimal::parse(std::string_view text) {
  std::string trimmed(text);
  const auto first = trimmed.find_first_not_of(" \t");
  const auto last = trimmed.find_last_not_of(" \t");
  trimmed = first == std::string::npos ? std::string{} : trimmed.substr(first, last - first + 1);
  if (trimmed.empty() || trimmed.find_first_not_of("+-.0123456789eE") != std::string::npos) {
    throw std::invalid_argument("not a finite decimal number: '" + std::string(text) + "'");
  }
  // Validates the syntax.
  (void)Real(trimmed, 64);
  if (trimmed.front() == '+') trimmed.erase(0, 1);
  return Decimal(std::move(trimmed));
}

double Decimal::to_double() const { return std::strtod(text_.c_str(), nullptr); }

Real Decimal::to_real(PrecisionBits bits) const { return Real(text_, bits); }

int Decimal::sign() const { return to_real(64).sign(); }

// ---------------------------------------------------------------------------
// PrecisionContext

PrecisionContext make_context(unsigned target_digits) {
  if (target_digits == 0) {
    throw std::invalid_argument("target_digits must be at least 1");
  }
  const unsigned guard = std::max(10u, (target_digits + 4) / 5);
  return PrecisionContext(target_digits, guard);
}

PrecisionContext PrecisionContext::widened(unsigned extra) const {
  return PrecisionContext(target_digits_, guard_digits_ + extra);
}

Real PrecisionContext::tolerance(int digits) const {
  Real ten = Real(10).with_precision(working_bits());
  return pow(ten, Real(-digits));
}

// ---------------------------------------------------------------------------
// Digit agreement

namespace {

// Decimal digits of |x| aligned so that position 0 holds the digit of weight
// 10^exponent; `count` digits, truncated.
std::string aligned_digits(const Real& x, long exponent, unsigned count) {
  mpfr_exp_t digit_exp = 0;
  // round to two spare digits so representation noise below them can't
  // ripple into the compared ones
  char* raw = mpfr_get_str(nullptr, &digit_exp, 10, count + 2, x.raw(), MPFR_RNDN);
  if (raw == nullptr) throw std::runtime_error("mpfr_get_str failed");
  std::string digits(raw);
  mpfr_free_str(raw);
  if (!digits.empty() && digits.front() == '-') digits.erase(0, 1);
  // x = 0.d1d2... * 10^digit_exp, so d1 has weight 10^(digit_exp-1).
  const long leading_zeros = exponent - (static_cast<long>(digit_exp) - 1);
  std::string out;
  if (leading_zeros > 0) out.assign(static_cast<std::size_t>(std::min<long>(leading_zeros, count)), '0');
  out += digits;
  out.resize(count, '0');
  return out;
}

}  // namespace

namespace {

unsigned digits_agree_capped(const Real& a, const Real& b, unsigned cap) {
  if (a.is_zero() && b.is_zero()) return cap;
  if (a.sign() != b.sign()) return 0;
  const Real& larger = abs(a) < abs(b) ? b : a;
  mpfr_exp_t larger_exp = 0;
  char* raw = mpfr_get_str(nullptr, &larger_exp, 10, cap + 2, larger.raw(), MPFR_RNDN);
  mpfr_free_str(raw);
  const long exponent = static_cast<long>(larger_exp) - 1;
  const std::string da = aligned_digits(a, exponent, cap);
  const std::string db = aligned_digits(b, exponent, cap);
  unsigned agree = 0;
  while (agree < cap && da[agree] == db[agree]) ++agree;
  return agree;
}

}  // namespace

unsigned digits_agree(const Real& a, const Real& b) {
  return digits_agree_capped(a, b, bits_to_digits(std::min(a.precision(), b.precision())));
}

unsigned digits_agree(double a, double b) {
  // doubles are compared through their shortest decimal form
  const PrecisionBits bits = digits_to_bits(40);
  return digits_agree_capped(Decimal(a).to_real(bits), Decimal(b).to_real(bits), 17);
}

bool agree_to_decimals(const Real& a, const Real& b, unsigned decimals) {
  return a.to_fixed(decimals) == b.to_fixed(decimals);
}

}  // namespace anharmonic
