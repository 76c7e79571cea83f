#pragma once

// Configurable-precision real arithmetic.
//
// `Real` is a value type over an MPFR number. Every value carries its own
// binary precision; the result of a binary operation has the larger of the
// two operand precisions. Values created from integers, doubles or strings
// take the calling thread's default precision, which `PrecisionScope` sets
// for the lifetime of a scope. MPFR keeps that default per thread, so
// independent computations on different threads may use different
// precisions.

#include <cstdint>  // before mpfr.h, enables the intmax_t interface
#include <mpfr.h>

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

namespace anharmonic {

using PrecisionBits = mpfr_prec_t;

/// Number of bits needed to hold `digits` significant decimal digits.
PrecisionBits digits_to_bits(unsigned digits);
/// Number of whole decimal digits representable in `bits` bits.
unsigned bits_to_digits(PrecisionBits bits);

class Real {
 public:
  Real();
  Real(int value);            // NOLINT(google-explicit-constructor)
  Real(long value);           // NOLINT(google-explicit-constructor)
  Real(long long value);      // NOLINT(google-explicit-constructor)
  Real(unsigned value);       // NOLINT(google-explicit-constructor)
  Real(unsigned long value);  // NOLINT(google-explicit-constructor)
  Real(unsigned long long value);  // NOLINT(google-explicit-constructor)
  Real(double value);         // NOLINT(google-explicit-constructor)

  /// Parses a decimal literal ("0.25", "-1e-3"); throws std::invalid_argument.
  Real(std::string_view text, PrecisionBits bits);
  /// Zero with an explicit precision.
  static Real zero(PrecisionBits bits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  PrecisionBits precision() const { return mpfr_get_prec(value_); }
  /// Returns a copy rounded (or widened) to `bits`.
  Real with_precision(PrecisionBits bits) const;

  double to_double() const;
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  /// Fixed notation with exactly `decimals` digits after the point,
  /// rounded to nearest.
  std::string to_fixed(unsigned decimals) const;
  /// Scientific notation with `significant` digits, rounded to nearest.
  std::string to_scientific(unsigned significant) const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real operator-() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  friend Real abs(const Real& x);
  friend Real sqrt(const Real& x);
  friend Real exp(const Real& x);
  friend Real log(const Real& x);
  friend Real log10(const Real& x);
  friend Real pow(const Real& base, const Real& exponent);
  friend Real hypot(const Real& a, const Real& b);
  friend Real floor(const Real& x);
  friend Real max(const Real& a, const Real& b);
  friend Real min(const Real& a, const Real& b);

  /// Computes `this = a * b + c * d` in place without allocating
  /// temporaries; used in the rotation kernels.
  void assign_dot2(const Real& a, const Real& b, const Real& c, const Real& d,
                   Real& scratch);

  mpfr_srcptr raw() const { return value_; }
  mpfr_ptr raw() { return value_; }

 private:
  struct Uninitialized {};
  Real(Uninitialized, PrecisionBits bits);

  mpfr_t value_;
};

/// pi at the given precision.
Real pi(PrecisionBits bits);

std::ostream& operator<<(std::ostream& os, const Real& x);

/// Sets the calling thread's default precision until destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(PrecisionBits bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  PrecisionBits saved_;
};

/// An exact decimal input value (a coupling constant, a frequency) that is
/// materialized as a `Real` at whatever precision a computation needs.
class Decimal {
 public:
  Decimal() : text_("0") {}
  /// Shortest round-trip decimal representation of `value`.
  Decimal(double value);  // NOLINT(google-explicit-constructor)
  Decimal(int value) : Decimal(static_cast<double>(value)) {}  // NOLINT
  /// Throws std::invalid_argument if `text` is not a finite decimal number.
  static Decimal parse(std::string_view text);

  const std::string& text() const { return text_; }
  double to_double() const;
  Real to_real(PrecisionBits bits) const;
  int sign() const;

  friend bool operator==(const Decimal& a, const Decimal& b) {
    return a.text_ == b.text_;
  }

 private:
  explicit Decimal(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

/// Precision requested for a computation: `target_digits` significant
/// digits are reported, `guard_digits` extra digits are carried.
class PrecisionContext {
 public:
  unsigned target_digits() const { return target_digits_; }
  unsigned guard_digits() const { return guard_digits_; }
  unsigned working_digits() const { return target_digits_ + guard_digits_; }
  PrecisionBits working_bits() const { return digits_to_bits(working_digits()); }

  /// The same target with `extra` more guard digits.
  PrecisionContext widened(unsigned extra) const;

  /// 10^(-digits) at working precision.
  Real tolerance(int digits) const;

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  friend PrecisionContext make_context(unsigned target_digits);
  PrecisionContext(unsigned target, unsigned guard)
      : target_digits_(target), guard_digits_(guard) {}

  unsigned target_digits_;
  unsigned guard_digits_;
};

/// guard_digits = max(10, ceil(target_digits / 5)). Throws
/// std::invalid_argument for target_digits == 0.
PrecisionContext make_context(unsigned target_digits);

/// Leading significant decimal digits shared by `a` and `b` after both are
/// aligned to the decimal exponent of the larger magnitude. Identical
/// values report the number of digits their precision can represent.
unsigned digits_agree(const Real& a, const Real& b);
unsigned digits_agree(double a, double b);

/// True when `a` and `b` print identically with `decimals` digits after the
/// decimal point.
bool agree_to_decimals(const Real& a, const Real& b, unsigned decimals);

}  // namespace anharmonic
