#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "alphacodec/big_uint.hpp"

namespace alphacodec {

/// Fixed-point real in [0, 1) with an explicit number of binary digits.
///
/// The value is mantissa / 2^precision, i.e. the bit string b1 b2 ... bp
/// (most significant first) carries weight 2^-i on bit i. Precision is part
/// of the value: "1" and "10" are equal numbers but different UnitReals.
class UnitReal {
 public:
  UnitReal() = default;
  /// Throws DomainError unless mantissa < 2^precision.
  UnitReal(BigUInt mantissa, std::size_t precision);

  static UnitReal zero(std::size_t precision);
  /// The largest representable value, 1 - 2^-precision.
  static UnitReal all_ones(std::size_t precision);
  /// mantissa clamped to the all-ones word when it reaches 2^precision.
  static UnitReal saturating(BigUInt mantissa, std::size_t precision);

  std::size_t precision() const noexcept { return precision_; }
  const BigUInt& mantissa() const noexcept { return mantissa_; }
  bool is_zero() const noexcept { return mantissa_.is_zero(); }

  /// Bit i, 1-based from the binary point.
  bool bit(std::size_t i) const noexcept;

  /// Appends zero bits; the value is unchanged.
  UnitReal extended(std::size_t precision) const;
  /// Drops trailing bits (floor).
  UnitReal truncated(std::size_t precision) const;
  /// extended() or truncated() as needed.
  UnitReal resized(std::size_t precision) const;

  double to_double() const noexcept;
  /// log2 of the value; -infinity for zero.
  double log2() const noexcept;

  friend bool operator==(const UnitReal&, const UnitReal&) = default;

 private:
  BigUInt mantissa_;
  std::size_t precision_ = 0;
};

/// Unsigned fixed-point number with an integer part: mantissa / 2^frac_bits.
/// Used for constants such as pi that leave the unit interval.
struct FixedPoint {
  BigUInt mantissa;
  std::size_t frac_bits = 0;

  double to_double() const noexcept;
  /// Integer part, '.', then `digits` truncated fractional digits.
  std::string to_decimal_string(std::size_t digits) const;
};

// --- conversions ----------------------------------------------------------

UnitReal from_binary_string(std::string_view bits);
std::string to_binary_string(const UnitReal& x);

/// Truncated binary expansion of x in [0, 1] to `bits` digits, produced by
/// the doubling fold: emit '1' iff the running value is >= 1/2, then double
/// mod 1. x == 1 maps to the all-ones word. Throws DomainError outside [0,1]
/// or on NaN.
UnitReal from_decimal_fraction(double x, std::size_t bits);
/// As above for decimal text: "0.ddd", ".ddd", "0", "1", "1.000".
/// Digits are consumed exactly regardless of length.
UnitReal from_decimal_fraction(std::string_view decimal, std::size_t bits);

enum class DecimalRounding {
  toward_zero,  ///< truncate
  upward,       ///< smallest decimal >= x, saturating at 0.99...9
};

/// "0." followed by exactly `digits` fractional digits.
std::string to_decimal_string(const UnitReal& x, std::size_t digits,
                              DecimalRounding rounding = DecimalRounding::toward_zero);

/// The dyadic map applied m times: 2^m * x mod 1, computed by discarding the
/// first m bits. Precision drops to precision - m. Throws PrecisionExhausted
/// when m > 0 and m >= precision.
UnitReal shift_mod1(const UnitReal& x, std::size_t m);

/// Concatenates bit strings in order.
UnitReal concat(std::span<const UnitReal> parts);

// --- ring operations ------------------------------------------------------

enum class Overflow { reject, wrap };

UnitReal add(const UnitReal& x, const UnitReal& y, Overflow mode = Overflow::reject);
UnitReal sub(const UnitReal& x, const UnitReal& y, Overflow mode = Overflow::reject);
UnitReal mul(const UnitReal& x, const UnitReal& y);
UnitReal mul_small(const UnitReal& x, std::uint64_t k, Overflow mode = Overflow::reject);
UnitReal div_small(const UnitReal& x, std::uint64_t k);
/// |x - y| at the shared precision.
UnitReal abs_diff(const UnitReal& x, const UnitReal& y);
/// Compares represented values; precisions may differ.
std::strong_ordering compare(const UnitReal& x, const UnitReal& y) noexcept;

// --- precision budget -----------------------------------------------------

inline constexpr std::size_t kDefaultGuardBits = 32;

struct PrecisionBudget {
  std::size_t n = 0;      ///< sample count
  std::size_t tau = 0;    ///< bits per sample
  std::size_t guard = 0;  ///< extra bits past the payload
  std::size_t p_bin = 0;  ///< (n + 1) * tau + guard
  std::size_t p_dec = 0;  ///< ceil(p_bin * log10 2)
};

PrecisionBudget required_precision(std::size_t n, std::size_t tau,
                                   std::size_t guard = kDefaultGuardBits);

/// ceil(bits * log10 2): decimal digits that resolve `bits` binary digits.
std::size_t decimal_digits_for(std::size_t bits) noexcept;

}  // namespace alphacodec
