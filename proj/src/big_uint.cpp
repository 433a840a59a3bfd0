#include "alphacodec/big_uint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace alphacodec {

namespace {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

}  // namespace

BigUInt::BigUInt(Limb value) {
  if (value != 0) {
    limbs_.push_back(value);
  }
}

BigUInt BigUInt::from_limbs(std::vector<Limb> limbs) {
  BigUInt out;
  out.limbs_ = std::move(limbs);
  out.trim();
  return out;
}

BigUInt BigUInt::power_of_two(std::size_t exponent) {
  BigUInt out;
  out.limbs_.assign(exponent / kLimbBits + 1, 0);
  out.limbs_.back() = Limb{1} << (exponent % kLimbBits);
  return out;
}

BigUInt BigUInt::all_ones(std::size_t bits) {
  BigUInt out;
  if (bits == 0) {
    return out;
  }
  out.limbs_.assign((bits + kLimbBits - 1) / kLimbBits, ~Limb{0});
  const std::size_t top = bits % kLimbBits;
  if (top != 0) {
    out.limbs_.back() = (Limb{1} << top) - 1;
  }
  return out;
}

void BigUInt::trim() noexcept {
  while (!limbs_.empty() && limbs_.back() == 0) {
    limbs_.pop_back();
  }
}

std::size_t BigUInt::bit_length() const noexcept {
  if (limbs_.empty()) {
    return 0;
  }
  return limbs_.size() * kLimbBits - static_cast<std::size_t>(std::countl_zero(limbs_.back()));
}

bool BigUInt::bit(std::size_t index) const noexcept {
  const std::size_t limb = index / kLimbBits;
  if (limb >= limbs_.size()) {
    return false;
  }
  return ((limbs_[limb] >> (index % kLimbBits)) & 1U) != 0;
}

BigUInt BigUInt::low_bits(std::size_t bits) const {
  const std::size_t whole = bits / kLimbBits;
  if (whole >= limbs_.size()) {
    return *this;
  }
  std::vector<Limb> out(limbs_.begin(), limbs_.begin() + static_cast<std::ptrdiff_t>(whole));
  const std::size_t rest = bits % kLimbBits;
  if (rest != 0) {
    out.push_back(limbs_[whole] & ((Limb{1} << rest) - 1));
  }
  return from_limbs(std::move(out));
}

double BigUInt::to_double() const noexcept {
  const std::size_t len = bit_length();
  if (len <= kLimbBits) {
    return static_cast<double>(low_limb());
  }
  // Top 64 bits plus a sticky bit keep the final rounding honest.
  const std::size_t drop = len - kLimbBits;
  const BigUInt top = *this >> drop;
  Limb head = top.low_limb();
  if (!low_bits(drop).is_zero()) {
    head |= 1U;
  }
  return std::ldexp(static_cast<double>(head), static_cast<int>(drop));
}

std::string BigUInt::to_decimal_string() const {
  if (is_zero()) {
    return "0";
  }
  constexpr Limb kChunk = 10'000'000'000'000'000'000ULL;  // 10^19
  std::vector<Limb> chunks;
  BigUInt rest = *this;
  while (!rest.is_zero()) {
    chunks.push_back(rest.divmod_small(kChunk));
  }
  std::string out = std::to_string(chunks.back());
  for (auto it = chunks.rbegin() + 1; it != chunks.rend(); ++it) {
    const std::string part = std::to_string(*it);
    out.append(19 - part.size(), '0');
    out += part;
  }
  return out;
}

BigUInt& BigUInt::operator+=(const BigUInt& rhs) {
  if (rhs.limbs_.size() > limbs_.size()) {
    limbs_.resize(rhs.limbs_.size(), 0);
  }
  Limb carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const Limb addend = i < rhs.limbs_.size() ? rhs.limbs_[i] : 0;
    if (addend == 0 && carry == 0 && i >= rhs.limbs_.size()) {
      break;
    }
    const u128 sum = static_cast<u128>(limbs_[i]) + addend + carry;
    limbs_[i] = static_cast<Limb>(sum);
    carry = static_cast<Limb>(sum >> kLimbBits);
  }
  if (carry != 0) {
    limbs_.push_back(carry);
  }
  return *this;
}

BigUInt& BigUInt::operator-=(const BigUInt& rhs) {
  if (*this < rhs) {
    throw std::logic_error("BigUInt subtraction underflow");
  }
  Limb borrow = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const Limb sub = i < rhs.limbs_.size() ? rhs.limbs_[i] : 0;
    if (sub == 0 && borrow == 0 && i >= rhs.limbs_.size()) {
      break;
    }
    const Limb cur = limbs_[i];
    const Limb diff = cur - sub - borrow;
    borrow = (cur < sub || (cur - sub) < borrow) ? 1 : 0;
    limbs_[i] = diff;
  }
  trim();
  return *this;
}

BigUInt& BigUInt::operator*=(Limb factor) {
  if (factor == 0) {
    limbs_.clear();
    return *this;
  }
  Limb carry = 0;
  for (Limb& limb : limbs_) {
    const u128 prod = static_cast<u128>(limb) * factor + carry;
    limb = static_cast<Limb>(prod);
    carry = static_cast<Limb>(prod >> kLimbBits);
  }
  if (carry != 0) {
    limbs_.push_back(carry);
  }
  return *this;
}

BigUInt operator*(const BigUInt& lhs, const BigUInt& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) {
    return {};
  }
  const auto& a = lhs.limbs_;
  const auto& b = rhs.limbs_;
  std::vector<BigUInt::Limb> out(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    BigUInt::Limb carry = 0;
    const u128 ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      const u128 cur = ai * b[j] + out[i + j] + carry;
      out[i + j] = static_cast<BigUInt::Limb>(cur);
      carry = static_cast<BigUInt::Limb>(cur >> BigUInt::kLimbBits);
    }
    out[i + b.size()] = carry;
  }
  return BigUInt::from_limbs(std::move(out));
}

BigUInt& BigUInt::operator<<=(std::size_t bits) {
  if (is_zero() || bits == 0) {
    return *this;
  }
  const std::size_t whole = bits / kLimbBits;
  const std::size_t rest = bits % kLimbBits;
  if (rest != 0) {
    Limb carry = 0;
    for (Limb& limb : limbs_) {
      const Limb next = limb >> (kLimbBits - rest);
      limb = (limb << rest) | carry;
      carry = next;
    }
    if (carry != 0) {
      limbs_.push_back(carry);
    }
  }
  limbs_.insert(limbs_.begin(), whole, 0);
  return *this;
}

BigUInt& BigUInt::operator>>=(std::size_t bits) {
  const std::size_t whole = bits / kLimbBits;
  if (whole >= limbs_.size()) {
    limbs_.clear();
    return *this;
  }
  limbs_.erase(limbs_.begin(), limbs_.begin() + static_cast<std::ptrdiff_t>(whole));
  const std::size_t rest = bits % kLimbBits;
  if (rest != 0) {
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      const Limb hi = i + 1 < limbs_.size() ? limbs_[i + 1] << (kLimbBits - rest) : 0;
      limbs_[i] = (limbs_[i] >> rest) | hi;
    }
  }
  trim();
  return *this;
}

BigUInt::Limb BigUInt::divmod_small(Limb divisor) {
  if (divisor == 0) {
    throw std::domain_error("BigUInt division by zero");
  }
  u128 rem = 0;
  for (auto it = limbs_.rbegin(); it != limbs_.rend(); ++it) {
    const u128 cur = (rem << kLimbBits) | *it;
    *it = static_cast<Limb>(cur / divisor);
    rem = cur % divisor;
  }
  trim();
  return static_cast<Limb>(rem);
}

std::strong_ordering operator<=>(const BigUInt& lhs, const BigUInt& rhs) noexcept {
  if (lhs.limbs_.size() != rhs.limbs_.size()) {
    return lhs.limbs_.size() <=> rhs.limbs_.size();
  }
  for (std::size_t i = lhs.limbs_.size(); i-- > 0;) {
    if (lhs.limbs_[i] != rhs.limbs_[i]) {
      return lhs.limbs_[i] <=> rhs.limbs_[i];
    }
  }
  return std::strong_ordering::equal;
}

// Knuth, TAOCP vol. 2, 4.3.1 Algorithm D with 64-bit digits.
std::pair<BigUInt, BigUInt> BigUInt::divmod(const BigUInt& dividend, const BigUInt& divisor) {
  if (divisor.is_zero()) {
    throw std::domain_error("BigUInt division by zero");
  }
  if (dividend < divisor) {
    return {BigUInt{}, dividend};
  }
  if (divisor.limbs_.size() == 1) {
    BigUInt quotient = dividend;
    const Limb rem = quotient.divmod_small(divisor.limbs_.front());
    return {std::move(quotient), BigUInt{rem}};
  }

  const auto shift = static_cast<std::size_t>(std::countl_zero(divisor.limbs_.back()));
  const std::vector<Limb> vn = (divisor << shift).limbs_;
  std::vector<Limb> un = (dividend << shift).limbs_;
  if (un.size() == dividend.limbs_.size()) {
    un.push_back(0);
  }
  const std::size_t n = vn.size();
  const std::size_t m = un.size() - n;
  std::vector<Limb> q(m, 0);
  const Limb vtop = vn[n - 1];
  const Limb vnext = vn[n - 2];

  for (std::size_t j = m; j-- > 0;) {
    const u128 num = (static_cast<u128>(un[j + n]) << kLimbBits) | un[j + n - 1];
    u128 qhat = num / vtop;
    u128 rhat = num % vtop;
    while (qhat >> kLimbBits != 0 ||
           qhat * vnext > ((rhat << kLimbBits) | un[j + n - 2])) {
      --qhat;
      rhat += vtop;
      if (rhat >> kLimbBits != 0) {
        break;
      }
    }

    u128 k = 0;
    i128 t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const u128 p = qhat * vn[i];
      t = static_cast<i128>(un[i + j]) - static_cast<i128>(k) -
          static_cast<i128>(static_cast<Limb>(p));
      un[i + j] = static_cast<Limb>(t);
      k = (p >> kLimbBits) - static_cast<u128>(t >> kLimbBits);
    }
    t = static_cast<i128>(un[j + n]) - static_cast<i128>(k);
    un[j + n] = static_cast<Limb>(t);

    q[j] = static_cast<Limb>(qhat);
    if (t < 0) {
      --q[j];
      Limb carry = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const u128 s = static_cast<u128>(un[i + j]) + vn[i] + carry;
        un[i + j] = static_cast<Limb>(s);
        carry = static_cast<Limb>(s >> kLimbBits);
      }
      un[j + n] += carry;
    }
  }

  un.resize(n);
  BigUInt rem = from_limbs(std::move(un));
  rem >>= shift;
  return {from_limbs(std::move(q)), std::move(rem)};
}

BigUInt BigUInt::isqrt() const {
  if (is_zero()) {
    return {};
  }
  // Start at or above the root, from a double estimate of the leading bits.
  const std::size_t len = bit_length();
  BigUInt x;
  if (len <= 104) {
    x = power_of_two((len + 1) / 2);
  } else {
    const std::size_t drop = (len - 100) & ~std::size_t{1};
    const double head = (*this >> drop).to_double();
    const auto root = static_cast<Limb>(std::sqrt(head)) + 2;
    x = BigUInt{root} << (drop / 2);
    x += BigUInt{1} << (drop / 2);
  }
  for (;;) {
    BigUInt y = x + divmod(*this, x).first;
    y >>= 1;
    if (y >= x) {
      return x;
    }
    x = std::move(y);
  }
}

}  // namespace alphacodec
