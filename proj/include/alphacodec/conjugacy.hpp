#pragma once

#include <cstddef>
#include <vector>

#include "alphacodec/unit_real.hpp"

// Arbitrary-precision evaluation of the homeomorphism
//   phi(a)     = sin^2(2 pi a)          (dyadic space -> data space)
//   phi_inv(z) = arcsin(sqrt z) / 2 pi  (data space -> [0, 1/4])
// and of the r = 4 logistic map L(z) = 4 z (1 - z), which satisfies
// L o phi = phi o D for the dyadic map D.
namespace alphacodec::conjugacy {

inline constexpr unsigned kLogisticRate = 4;

/// floor(pi * 2^bits) / 2^bits, so |result - pi| < 2^-bits and lower
/// precisions are bit prefixes of higher ones. Results are cached; safe to
/// call concurrently. Throws DomainError for bits < 8.
FixedPoint pi_to_precision(std::size_t bits);

/// sin^2(2 pi alpha) at alpha's precision. A value of exactly 1 saturates to
/// the all-ones word. Absolute error < 2^-(p - 8).
UnitReal phi(const UnitReal& alpha);
/// As above, evaluated to `precision` output bits.
UnitReal phi(const UnitReal& alpha, std::size_t precision);

/// arcsin(sqrt z) / 2 pi in [0, 1/4], at z's precision. Above z = 1/2 the
/// complementary angle is used so series arguments stay below 1/sqrt 2.
UnitReal phi_inv(const UnitReal& z);
UnitReal phi_inv(const UnitReal& z, std::size_t precision);
/// Exact-double input; accepts z == 1. Throws DomainError outside [0, 1].
UnitReal phi_inv(double z, std::size_t precision);

/// 4 z (1 - z), truncated; 1 saturates to the all-ones word.
UnitReal logistic_step(const UnitReal& z);

struct ConjugacyCheck {
  std::size_t precision = 0;
  /// Per step k = 0..steps: L^k(phi(alpha)) and phi(D^k(alpha)).
  std::vector<UnitReal> logistic_orbit;
  std::vector<UnitReal> conjugate_orbit;
  std::vector<UnitReal> discrepancy;
  UnitReal max_discrepancy;
  std::size_t worst_step = 0;

  /// Allowed discrepancy at step k: 2^-(p - k - 16).
  double contract_log2(std::size_t k) const noexcept;
  bool within_contract() const noexcept;
  /// |round(lhs) - round(rhs)| after rounding both orbits to the contract
  /// precision p - k - 16 bits; zero when the orbits coincide there.
  UnitReal rounded_discrepancy(std::size_t k) const;
};

/// Compares the two sides of L^k o phi = phi o D^k for k = 0..steps.
/// Throws PrecisionExhausted when steps >= alpha.precision().
ConjugacyCheck conjugacy_check(const UnitReal& alpha, std::size_t steps);

}  // namespace alphacodec::conjugacy
