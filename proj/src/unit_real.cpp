#include "alphacodec/unit_real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "alphacodec/errors.hpp"

namespace alphacodec {

namespace {

using Limb = BigUInt::Limb;

constexpr Limb kDecChunk = 1'000'000'000'000'000'000ULL;  // 10^18
constexpr std::size_t kDecChunkDigits = 18;

constexpr Limb kPow10[] = {
    1ULL,
    10ULL,
    100ULL,
    1'000ULL,
    10'000ULL,
    100'000ULL,
    1'000'000ULL,
    10'000'000ULL,
    100'000'000ULL,
    1'000'000'000ULL,
    10'000'000'000ULL,
    100'000'000'000ULL,
    1'000'000'000'000ULL,
    10'000'000'000'000ULL,
    100'000'000'000'000ULL,
    1'000'000'000'000'000ULL,
    10'000'000'000'000'000ULL,
    100'000'000'000'000'000ULL,
    1'000'000'000'000'000'000ULL,
    10'000'000'000'000'000'000ULL,
};

/// Collects bits MSB-first into a mantissa of fixed width.
class BitWriter {
 public:
  explicit BitWriter(std::size_t width)
      : width_(width), limbs_((width + BigUInt::kLimbBits - 1) / BigUInt::kLimbBits, 0) {}

  void set(std::size_t one_based) {
    const std::size_t pos = width_ - one_based;
    limbs_[pos / BigUInt::kLimbBits] |= Limb{1} << (pos % BigUInt::kLimbBits);
  }

  UnitReal finish() && { return UnitReal(BigUInt::from_limbs(std::move(limbs_)), width_); }

 private:
  std::size_t width_;
  std::vector<Limb> limbs_;
};

double scaled_to_double(const BigUInt& mantissa, std::size_t frac_bits) noexcept {
  const std::size_t len = mantissa.bit_length();
  if (len == 0) {
    return 0.0;
  }
  std::size_t drop = 0;
  Limb head = mantissa.low_limb();
  if (len > BigUInt::kLimbBits) {
    drop = len - BigUInt::kLimbBits;
    head = (mantissa >> drop).low_limb();
    if (!mantissa.low_bits(drop).is_zero()) {
      head |= 1U;
    }
  }
  const long long exponent = static_cast<long long>(drop) - static_cast<long long>(frac_bits);
  const long long clamped = std::clamp<long long>(exponent, -100000, 100000);
  return std::ldexp(static_cast<double>(head), static_cast<int>(clamped));
}

void require_same_precision(const UnitReal& x, const UnitReal& y, const char* op) {
  if (x.precision() != y.precision()) {
    throw PrecisionMismatch(std::string(op) + ": operand precisions differ (" +
                            std::to_string(x.precision()) + " vs " +
                            std::to_string(y.precision()) + ")");
  }
}

}  // namespace

// --- UnitReal ---------------------------------------------------------------

UnitReal::UnitReal(BigUInt mantissa, std::size_t precision)
    : mantissa_(std::move(mantissa)), precision_(precision) {
  if (mantissa_.bit_length() > precision_) {
    throw DomainError("UnitReal mantissa does not fit in " + std::to_string(precision_) +
                      " bits");
  }
}

UnitReal UnitReal::zero(std::size_t precision) { return UnitReal(BigUInt{}, precision); }

UnitReal UnitReal::all_ones(std::size_t precision) {
  return UnitReal(BigUInt::all_ones(precision), precision);
}

UnitReal UnitReal::saturating(BigUInt mantissa, std::size_t precision) {
  if (mantissa.bit_length() > precision) {
    return all_ones(precision);
  }
  return UnitReal(std::move(mantissa), precision);
}

bool UnitReal::bit(std::size_t i) const noexcept {
  if (i == 0 || i > precision_) {
    return false;
  }
  return mantissa_.bit(precision_ - i);
}

UnitReal UnitReal::extended(std::size_t precision) const {
  if (precision < precision_) {
    throw DomainError("extended(): target precision is below the current one");
  }
  return UnitReal(mantissa_ << (precision - precision_), precision);
}

UnitReal UnitReal::truncated(std::size_t precision) const {
  if (precision > precision_) {
    throw DomainError("truncated(): target precision is above the current one");
  }
  return UnitReal(mantissa_ >> (precision_ - precision), precision);
}

UnitReal UnitReal::resized(std::size_t precision) const {
  return precision >= precision_ ? extended(precision) : truncated(precision);
}

double UnitReal::to_double() const noexcept { return scaled_to_double(mantissa_, precision_); }

double UnitReal::log2() const noexcept {
  if (mantissa_.is_zero()) {
    return -std::numeric_limits<double>::infinity();
  }
  const std::size_t len = mantissa_.bit_length();
  const std::size_t drop = len > 60 ? len - 60 : 0;
  const double head = static_cast<double>((mantissa_ >> drop).low_limb());
  return std::log2(head) + static_cast<double>(drop) - static_cast<double>(precision_);
}

// --- FixedPoint -------------------------------------------------------------

double FixedPoint::to_double() const noexcept { return scaled_to_double(mantissa, frac_bits); }

std::string FixedPoint::to_decimal_string(std::size_t digits) const {
  const std::string whole = (mantissa >> frac_bits).to_decimal_string();
  const UnitReal frac(mantissa.low_bits(frac_bits), frac_bits);
  const std::string fraction = alphacodec::to_decimal_string(frac, digits);
  // fraction is "0.ddd"
  return whole + fraction.substr(1);
}

// --- conversions ------------------------------------------------------------

UnitReal from_binary_string(std::string_view bits) {
  BitWriter writer(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const char c = bits[i];
    if (c == '1') {
      writer.set(i + 1);
    } else if (c != '0') {
      throw ParseError("binary string: invalid character at offset " + std::to_string(i));
    }
  }
  return std::move(writer).finish();
}

std::string to_binary_string(const UnitReal& x) {
  std::string out(x.precision(), '0');
  for (std::size_t i = 1; i <= x.precision(); ++i) {
    if (x.bit(i)) {
      out[i - 1] = '1';
    }
  }
  return out;
}

UnitReal from_decimal_fraction(double x, std::size_t bits) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("from_decimal_fraction: value outside [0, 1]");
  }
  if (x == 1.0) {
    return UnitReal::all_ones(bits);
  }
  // Doubling and subtracting one are exact on binary64, so this fold is the
  // exact truncated expansion of the stored double.
  BitWriter writer(bits);
  double acc = x;
  for (std::size_t i = 1; i <= bits && acc != 0.0; ++i) {
    if (acc >= 0.5) {
      writer.set(i);
    }
    acc = 2.0 * acc;
    if (acc >= 1.0) {
      acc -= 1.0;
    }
  }
  return std::move(writer).finish();
}

UnitReal from_decimal_fraction(std::string_view decimal, std::size_t bits) {
  std::string_view text = decimal;
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const std::size_t dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) {
    throw ParseError("decimal string: no digits in \"" + std::string(decimal) + "\"");
  }
  const auto check_digits = [&](std::string_view part, std::size_t base_offset) {
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') {
        throw ParseError("decimal string: invalid character at offset " +
                         std::to_string(base_offset + i + (negative ? 1 : 0)));
      }
    }
  };
  check_digits(whole, 0);
  check_digits(frac, whole.size() + 1);

  const auto first_nonzero = whole.find_first_not_of('0');
  const std::string_view whole_sig =
      first_nonzero == std::string_view::npos ? std::string_view{} : whole.substr(first_nonzero);
  const bool frac_zero = frac.find_first_not_of('0') == std::string_view::npos;

  if (negative && !(whole_sig.empty() && frac_zero)) {
    throw DomainError("decimal string: negative value \"" + std::string(decimal) + "\"");
  }
  if (!whole_sig.empty()) {
    if (whole_sig == "1" && frac_zero) {
      return UnitReal::all_ones(bits);
    }
    throw DomainError("decimal string: value above 1 \"" + std::string(decimal) + "\"");
  }

  // Fractional digits packed in base 10^18, most significant chunk first.
  std::vector<Limb> chunks((frac.size() + kDecChunkDigits - 1) / kDecChunkDigits, 0);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    Limb v = 0;
    for (std::size_t d = 0; d < kDecChunkDigits; ++d) {
      const std::size_t idx = c * kDecChunkDigits + d;
      v = v * 10 + (idx < frac.size() ? static_cast<Limb>(frac[idx] - '0') : 0);
    }
    chunks[c] = v;
  }
  while (!chunks.empty() && chunks.back() == 0) {
    chunks.pop_back();
  }

  BitWriter writer(bits);
  for (std::size_t i = 1; i <= bits && !chunks.empty(); ++i) {
    // acc >= 1/2 exactly when doubling carries past the decimal point.
    Limb carry = 0;
    for (std::size_t c = chunks.size(); c-- > 0;) {
      Limb v = chunks[c] * 2 + carry;
      carry = v >= kDecChunk ? 1 : 0;
      chunks[c] = v - carry * kDecChunk;
    }
    if (carry != 0) {
      writer.set(i);
    }
    while (!chunks.empty() && chunks.back() == 0) {
      chunks.pop_back();
    }
  }
  return std::move(writer).finish();
}

std::string to_decimal_string(const UnitReal& x, std::size_t digits, DecimalRounding rounding) {
  if (digits == 0) {
    return "0";
  }
  std::string out = "0.";
  out.reserve(digits + 2);
  const std::size_t p = x.precision();
  BigUInt frac = x.mantissa();
  std::size_t remaining = digits;
  while (remaining > 0) {
    const std::size_t step = std::min<std::size_t>(remaining, 19);
    if (frac.is_zero()) {
      out.append(remaining, '0');
      break;
    }
    frac *= kPow10[step];
    const Limb chunk = (frac >> p).low_limb();
    frac = frac.low_bits(p);
    const std::string part = std::to_string(chunk);
    out.append(step - part.size(), '0');
    out += part;
    remaining -= step;
  }
  if (rounding == DecimalRounding::upward && !frac.is_zero()) {
    std::size_t i = out.size();
    while (i > 2 && out[i - 1] == '9') {
      --i;
    }
    if (i > 2) {
      ++out[i - 1];
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(i), out.end(), '0');
    }
    // All nines: saturate rather than emit 1.
  }
  return out;
}

UnitReal shift_mod1(const UnitReal& x, std::size_t m) {
  if (m == 0) {
    return x;
  }
  if (m >= x.precision()) {
    const std::size_t max_valid = x.precision() == 0 ? 0 : x.precision() - 1;
    throw PrecisionExhausted("shift_mod1: shift of " + std::to_string(m) +
                                 " bits exhausts a " + std::to_string(x.precision()) +
                                 "-bit value",
                             max_valid);
  }
  const std::size_t rest = x.precision() - m;
  return UnitReal(x.mantissa().low_bits(rest), rest);
}

UnitReal concat(std::span<const UnitReal> parts) {
  BigUInt acc;
  std::size_t total = 0;
  for (const UnitReal& part : parts) {
    acc <<= part.precision();
    acc += part.mantissa();
    total += part.precision();
  }
  return UnitReal(std::move(acc), total);
}

// --- ring operations ----------------------------------------------------------

UnitReal add(const UnitReal& x, const UnitReal& y, Overflow mode) {
  require_same_precision(x, y, "add");
  BigUInt sum = x.mantissa() + y.mantissa();
  if (sum.bit_length() > x.precision()) {
    if (mode == Overflow::reject) {
      throw OverflowError("add: result leaves [0, 1)");
    }
    sum = sum.low_bits(x.precision());
  }
  return UnitReal(std::move(sum), x.precision());
}

UnitReal sub(const UnitReal& x, const UnitReal& y, Overflow mode) {
  require_same_precision(x, y, "sub");
  if (x.mantissa() >= y.mantissa()) {
    return UnitReal(x.mantissa() - y.mantissa(), x.precision());
  }
  if (mode == Overflow::reject) {
    throw OverflowError("sub: result is negative");
  }
  BigUInt wrapped = BigUInt::power_of_two(x.precision()) + x.mantissa();
  wrapped -= y.mantissa();
  return UnitReal(std::move(wrapped), x.precision());
}

UnitReal mul(const UnitReal& x, const UnitReal& y) {
  require_same_precision(x, y, "mul");
  return UnitReal((x.mantissa() * y.mantissa()) >> x.precision(), x.precision());
}

UnitReal mul_small(const UnitReal& x, std::uint64_t k, Overflow mode) {
  BigUInt prod = x.mantissa() * k;
  if (prod.bit_length() > x.precision()) {
    if (mode == Overflow::reject) {
      throw OverflowError("mul_small: result leaves [0, 1)");
    }
    prod = prod.low_bits(x.precision());
  }
  return UnitReal(std::move(prod), x.precision());
}

UnitReal div_small(const UnitReal& x, std::uint64_t k) {
  if (k == 0) {
    throw DomainError("div_small: division by zero");
  }
  BigUInt q = x.mantissa();
  q.divmod_small(k);
  return UnitReal(std::move(q), x.precision());
}

UnitReal abs_diff(const UnitReal& x, const UnitReal& y) {
  require_same_precision(x, y, "abs_diff");
  if (x.mantissa() >= y.mantissa()) {
    return UnitReal(x.mantissa() - y.mantissa(), x.precision());
  }
  return UnitReal(y.mantissa() - x.mantissa(), x.precision());
}

std::strong_ordering compare(const UnitReal& x, const UnitReal& y) noexcept {
  if (x.precision() == y.precision()) {
    return x.mantissa() <=> y.mantissa();
  }
  if (x.precision() < y.precision()) {
    return (x.mantissa() << (y.precision() - x.precision())) <=> y.mantissa();
  }
  return x.mantissa() <=> (y.mantissa() << (x.precision() - y.precision()));
}

// --- precision budget -------------------------------------------------------------

std::size_t decimal_digits_for(std::size_t bits) noexcept {
  constexpr long double kLog10Of2 = 0.301029995663981195213738894724493026768L;
  return static_cast<std::size_t>(std::ceil(static_cast<long double>(bits) * kLog10Of2));
}

PrecisionBudget required_precision(std::size_t n, std::size_t tau, std::size_t guard) {
  if (n == 0 || tau == 0) {
    throw DomainError("required_precision: n and tau must be at least 1");
  }
  PrecisionBudget budget;
  budget.n = n;
  budget.tau = tau;
  budget.guard = guard;
  budget.p_bin = (n + 1) * tau + guard;
  budget.p_dec = decimal_digits_for(budget.p_bin);
  return budget;
}

}  // namespace alphacodec
