#include "alphacodec/conjugacy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <optional>
#include <shared_mutex>

#include "alphacodec/errors.hpp"

namespace alphacodec::conjugacy {

namespace {

// All internal quantities are BigUInt mantissas scaled by 2^W for a working
// precision W chosen per call.

std::size_t extra_bits(std::size_t bits) noexcept { return 32 + std::bit_width(bits); }

/// arctan(1/m) * 2^W; error below (2 * terms + 1) ulps.
BigUInt arctan_inverse(BigUInt::Limb m, std::size_t w, std::size_t& terms) {
  BigUInt power = BigUInt::power_of_two(w);
  power.divmod_small(m);
  BigUInt positive = power;
  BigUInt negative;
  const BigUInt::Limb m2 = m * m;
  terms = 1;
  for (BigUInt::Limb k = 1;; ++k) {
    power.divmod_small(m2);
    if (power.is_zero()) {
      break;
    }
    BigUInt term = power;
    term.divmod_small(2 * k + 1);
    (k % 2 == 1 ? negative : positive) += term;
    ++terms;
  }
  return positive - negative;
}

struct PiApprox {
  BigUInt mantissa;       // scaled by 2^bits
  std::size_t bits = 0;
  std::size_t error_log2 = 0;  // |mantissa - pi 2^bits| < 2^error_log2
};

PiApprox machin_pi(std::size_t w) {
  std::size_t t5 = 0;
  std::size_t t239 = 0;
  BigUInt a = arctan_inverse(5, w, t5);
  BigUInt b = arctan_inverse(239, w, t239);
  a *= 16;
  b *= 4;
  const std::size_t error_ulps = 16 * (2 * t5 + 1) + 4 * (2 * t239 + 1) + 2;
  return {a - b, w, static_cast<std::size_t>(std::bit_width(error_ulps))};
}

class PiCache {
 public:
  BigUInt truncated(std::size_t bits) {
    {
      std::shared_lock lock(mutex_);
      if (auto out = derive(bits)) {
        return *out;
      }
    }
    std::unique_lock lock(mutex_);
    std::size_t target = std::max(bits + 64 + extra_bits(bits), 2 * master_.bits);
    for (;;) {
      if (auto out = derive(bits)) {
        return *out;
      }
      master_ = machin_pi(target);
      target *= 2;
    }
  }

 private:
  // floor(pi 2^bits) from the master approximation when the dropped bits
  // leave no doubt about the floor.
  std::optional<BigUInt> derive(std::size_t bits) const {
    if (master_.bits < bits + master_.error_log2 + 2) {
      return std::nullopt;
    }
    const std::size_t drop = master_.bits - bits;
    const BigUInt dropped = master_.mantissa.low_bits(drop);
    const BigUInt err = BigUInt::power_of_two(master_.error_log2);
    if (dropped < err || dropped + err >= BigUInt::power_of_two(drop)) {
      return std::nullopt;
    }
    return master_.mantissa >> drop;
  }

  std::shared_mutex mutex_;
  PiApprox master_;
};

PiCache& pi_cache() {
  static PiCache cache;
  return cache;
}

BigUInt two_pi_scaled(std::size_t w) { return pi_cache().truncated(w + 1); }

/// sin(x) * 2^W for 0 <= x <= pi/4 given as x * 2^W.
BigUInt sin_series(const BigUInt& x, std::size_t w) {
  const BigUInt x2 = (x * x) >> w;
  BigUInt term = x;
  BigUInt positive = x;
  BigUInt negative;
  for (BigUInt::Limb k = 1;; ++k) {
    term = (term * x2) >> w;
    term.divmod_small((2 * k) * (2 * k + 1));
    if (term.is_zero()) {
      break;
    }
    (k % 2 == 1 ? negative : positive) += term;
  }
  return positive - negative;
}

/// arcsin(y) * 2^W given y^2 * 2^W (y^2 <= 1/2) and y * 2^W.
BigUInt arcsin_series(const BigUInt& y, const BigUInt& y2, std::size_t w) {
  BigUInt term = y;
  BigUInt sum = y;
  for (BigUInt::Limb k = 0;; ++k) {
    term = (term * y2) >> w;
    term *= (2 * k + 1) * (2 * k + 1);
    term.divmod_small((2 * k + 2) * (2 * k + 3));
    if (term.is_zero()) {
      break;
    }
    sum += term;
  }
  return sum;
}

/// phi_inv of the exact dyadic z = num / 2^scale (num <= 2^scale).
UnitReal phi_inv_exact(const BigUInt& num, std::size_t scale, std::size_t precision) {
  if (num.is_zero()) {
    return UnitReal::zero(precision);
  }
  const BigUInt one_scaled = BigUInt::power_of_two(scale);
  const bool complement = (num << 1) > one_scaled;
  const BigUInt u_exact = complement ? one_scaled - num : num;
  if (complement && u_exact.is_zero()) {
    // z == 1: arcsin(1) / 2 pi = 1/4 exactly.
    if (precision < 2) {
      return UnitReal::all_ones(precision);
    }
    return UnitReal(BigUInt::power_of_two(precision - 2), precision);
  }

  const std::size_t leading_zeros = scale - u_exact.bit_length();
  const std::size_t base = std::max(scale, precision) + extra_bits(precision);
  const std::size_t halvings =
      std::min<std::size_t>(64, BigUInt(base / 40).isqrt().low_limb() + 1);
  const std::size_t r = halvings > leading_zeros / 2 ? halvings - leading_zeros / 2 : 0;
  const std::size_t w = base + 2 * r + leading_zeros / 2 + 8;

  BigUInt u = u_exact << (w - scale);
  const BigUInt one = BigUInt::power_of_two(w);
  // Half-angle step: sin^2(t/2) = u / (2 (1 + sqrt(1 - u))).
  for (std::size_t j = 0; j < r; ++j) {
    const BigUInt cos_t = ((one - u) << w).isqrt();
    u = BigUInt::divmod(u << w, (one + cos_t) << 1).first;
  }
  const BigUInt y = (u << w).isqrt();
  BigUInt angle = arcsin_series(y, u, w) << r;

  BigUInt turns = BigUInt::divmod(angle << w, two_pi_scaled(w)).first;
  if (complement) {
    const BigUInt quarter = BigUInt::power_of_two(w - 2);
    turns = turns >= quarter ? BigUInt{} : quarter - turns;
  }
  BigUInt out = turns >> (w - precision);
  if (precision >= 2) {
    out = std::min(out, BigUInt::power_of_two(precision - 2));
  }
  return UnitReal::saturating(std::move(out), precision);
}

}  // namespace

FixedPoint pi_to_precision(std::size_t bits) {
  if (bits < 8) {
    throw DomainError("pi_to_precision: precision must be at least 8 bits");
  }
  return FixedPoint{pi_cache().truncated(bits), bits};
}

UnitReal phi(const UnitReal& alpha) { return phi(alpha, alpha.precision()); }

UnitReal phi(const UnitReal& alpha, std::size_t precision) {
  if (alpha.is_zero()) {
    return UnitReal::zero(precision);
  }
  // Reduce with the symmetries of sin^2(2 pi a): period 1/2, mirror about
  // 1/4, and sin^2 = 1 - cos^2 about 1/8. Everything here is exact.
  const std::size_t p = std::max<std::size_t>(alpha.precision(), 3);
  BigUInt a = alpha.mantissa() << (p - alpha.precision());
  a = a.low_bits(p - 1);                      // a mod 1/2
  if (a > BigUInt::power_of_two(p - 2)) {      // a > 1/4
    a = BigUInt::power_of_two(p - 1) - a;      // 1/2 - a
  }
  const bool complement = a > BigUInt::power_of_two(p - 3);  // a > 1/8
  if (complement) {
    a = BigUInt::power_of_two(p - 2) - a;      // 1/4 - a
  }

  const std::size_t w = precision + extra_bits(std::max(precision, p));
  const BigUInt x = (two_pi_scaled(w) * a) >> p;
  const BigUInt s = sin_series(x, w);
  BigUInt s2 = (s * s) >> w;
  const BigUInt one = BigUInt::power_of_two(w);
  if (complement) {
    s2 = s2 >= one ? BigUInt{} : one - s2;
  }
  return UnitReal::saturating(s2 >> (w - precision), precision);
}

UnitReal phi_inv(const UnitReal& z) { return phi_inv(z, z.precision()); }

UnitReal phi_inv(const UnitReal& z, std::size_t precision) {
  return phi_inv_exact(z.mantissa(), z.precision(), precision);
}

UnitReal phi_inv(double z, std::size_t precision) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw DomainError("phi_inv: argument outside [0, 1]");
  }
  if (z == 0.0) {
    return UnitReal::zero(precision);
  }
  int exponent = 0;
  const double frac = std::frexp(z, &exponent);  // z = frac * 2^exponent
  const auto mant = static_cast<BigUInt::Limb>(std::ldexp(frac, 53));
  // z = mant * 2^(exponent - 53), exponent <= 1.
  const std::size_t scale = static_cast<std::size_t>(53 - exponent);
  return phi_inv_exact(BigUInt{mant}, scale, precision);
}

UnitReal logistic_step(const UnitReal& z) {
  const std::size_t p = z.precision();
  const BigUInt& n = z.mantissa();
  const BigUInt complement = BigUInt::power_of_two(p) - n;
  BigUInt prod = (n * complement) << 2;
  prod >>= p;
  return UnitReal::saturating(std::move(prod), p);
}

double ConjugacyCheck::contract_log2(std::size_t k) const noexcept {
  return -(static_cast<double>(precision) - static_cast<double>(k) - 16.0);
}

bool ConjugacyCheck::within_contract() const noexcept {
  for (std::size_t k = 0; k < discrepancy.size(); ++k) {
    if (!discrepancy[k].is_zero() && discrepancy[k].log2() >= contract_log2(k)) {
      return false;
    }
  }
  return true;
}

UnitReal ConjugacyCheck::rounded_discrepancy(std::size_t k) const {
  const std::size_t slack = k + 16;
  if (precision <= slack) {
    return UnitReal::zero(0);
  }
  const std::size_t q = precision - slack;
  const auto round = [&](const UnitReal& v) {
    BigUInt m = v.mantissa() + BigUInt::power_of_two(slack - 1);
    return UnitReal::saturating(m >> slack, q);
  };
  return abs_diff(round(logistic_orbit.at(k)), round(conjugate_orbit.at(k)));
}

ConjugacyCheck conjugacy_check(const UnitReal& alpha, std::size_t steps) {
  const std::size_t p = alpha.precision();
  if (steps > 0 && steps >= p) {
    throw PrecisionExhausted("conjugacy_check: " + std::to_string(steps) +
                                 " steps exhaust a " + std::to_string(p) + "-bit seed",
                             p == 0 ? 0 : p - 1);
  }
  ConjugacyCheck out;
  out.precision = p;
  out.max_discrepancy = UnitReal::zero(p);
  UnitReal z = phi(alpha);
  for (std::size_t k = 0; k <= steps; ++k) {
    if (k > 0) {
      z = logistic_step(z);
    }
    UnitReal conj = phi(shift_mod1(alpha, k).extended(p));
    UnitReal diff = abs_diff(z, conj);
    if (compare(diff, out.max_discrepancy) > 0) {
      out.max_discrepancy = diff;
      out.worst_step = k;
    }
    out.logistic_orbit.push_back(z);
    out.conjugate_orbit.push_back(std::move(conj));
    out.discrepancy.push_back(std::move(diff));
  }
  return out;
}

}  // namespace alphacodec::conjugacy
