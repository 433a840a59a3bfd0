#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace alphacodec {

/// Unsigned arbitrary-length integer, little-endian 64-bit limbs.
///
/// The limb vector never carries leading zero limbs, so zero is the empty
/// vector and equality is limb-wise.
class BigUInt {
 public:
  using Limb = std::uint64_t;
  static constexpr std::size_t kLimbBits = 64;

  BigUInt() = default;
  explicit BigUInt(Limb value);

  static BigUInt from_limbs(std::vector<Limb> limbs);
  static BigUInt power_of_two(std::size_t exponent);
  /// 2^bits - 1.
  static BigUInt all_ones(std::size_t bits);

  bool is_zero() const noexcept { return limbs_.empty(); }
  std::size_t bit_length() const noexcept;
  bool bit(std::size_t index) const noexcept;
  std::span<const Limb> limbs() const noexcept { return limbs_; }
  Limb low_limb() const noexcept { return limbs_.empty() ? 0 : limbs_.front(); }

  /// this mod 2^bits.
  BigUInt low_bits(std::size_t bits) const;
  /// Nearest double; large values lose low bits.
  double to_double() const noexcept;
  std::string to_decimal_string() const;

  BigUInt& operator+=(const BigUInt& rhs);
  /// Requires rhs <= *this; throws std::logic_error otherwise.
  BigUInt& operator-=(const BigUInt& rhs);
  BigUInt& operator*=(Limb factor);
  BigUInt& operator<<=(std::size_t bits);
  BigUInt& operator>>=(std::size_t bits);

  /// Divides in place by a nonzero single limb; returns the remainder.
  Limb divmod_small(Limb divisor);

  friend BigUInt operator+(BigUInt lhs, const BigUInt& rhs) { return lhs += rhs; }
  friend BigUInt operator-(BigUInt lhs, const BigUInt& rhs) { return lhs -= rhs; }
  friend BigUInt operator*(const BigUInt& lhs, const BigUInt& rhs);
  friend BigUInt operator*(BigUInt lhs, Limb rhs) { return lhs *= rhs; }
  friend BigUInt operator<<(BigUInt lhs, std::size_t bits) { return lhs <<= bits; }
  friend BigUInt operator>>(BigUInt lhs, std::size_t bits) { return lhs >>= bits; }

  friend bool operator==(const BigUInt&, const BigUInt&) = default;
  friend std::strong_ordering operator<=>(const BigUInt& lhs, const BigUInt& rhs) noexcept;

  /// Floor quotient and remainder. Throws std::domain_error on a zero divisor.
  static std::pair<BigUInt, BigUInt> divmod(const BigUInt& dividend, const BigUInt& divisor);
  /// Floor square root.
  BigUInt isqrt() const;

 private:
  void trim() noexcept;

  std::vector<Limb> limbs_;
};

inline BigUInt operator/(const BigUInt& lhs, const BigUInt& rhs) {
  return BigUInt::divmod(lhs, rhs).first;
}

}  // namespace alphacodec
