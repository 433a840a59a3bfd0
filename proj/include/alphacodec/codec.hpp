#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphacodec/unit_real.hpp"

namespace alphacodec {

enum class Scheme { dyadic, logistic };

std::string_view to_string(Scheme scheme) noexcept;
/// "dyadic" or "logistic"; throws ParseError otherwise.
Scheme parse_scheme(std::string_view text);

/// Per-sample recovery bound: 2^-tau (dyadic) or pi * 2^(1 - tau) (logistic).
double error_bound(Scheme scheme, std::size_t tau) noexcept;

struct EncodeOptions {
  std::size_t guard = kDefaultGuardBits;
  /// Encodes needing more than this many bits raise CapacityError.
  std::size_t max_precision_bits = std::size_t{1} << 26;
};

/// A dataset encoded into a single real number.
///
/// `word` is the dyadic-space initial condition: the concatenated tau-bit
/// truncations of the samples (dyadic) or of phi_inv of the samples
/// (logistic), followed by tau + guard zero bits. For the logistic scheme
/// `z0` holds phi(word) at twice the word's precision, so re-inverting it
/// stays accurate even where arcsin is ill-conditioned.
struct Alpha {
  Scheme scheme = Scheme::dyadic;
  std::size_t tau = 8;
  std::size_t n = 0;
  std::size_t guard = kDefaultGuardBits;
  UnitReal word;
  std::optional<UnitReal> z0;
  /// The word was recovered from a bare z0 through phi_inv rather than
  /// produced by the encoder.
  bool reconstructed = false;

  PrecisionBudget budget() const { return required_precision(n, tau, guard); }
  /// Decodes are valid for k < decode_limit(): n samples plus
  /// floor(guard / tau) extrapolation steps.
  std::size_t decode_limit() const noexcept { return n + guard / tau; }
};

struct DecodedSample {
  std::size_t k = 0;
  double value = 0.0;
  double bound = 0.0;
  bool extrapolated = false;
};

Alpha encode_dyadic(std::span<const double> samples, std::size_t tau,
                    const EncodeOptions& options = {});
Alpha encode_logistic(std::span<const double> samples, std::size_t tau,
                      const EncodeOptions& options = {});
Alpha encode(Scheme scheme, std::span<const double> samples, std::size_t tau,
             const EncodeOptions& options = {});

/// Builds a logistic Alpha from an externally supplied z0 alone. The word is
/// recovered through phi_inv and flagged `reconstructed`.
Alpha alpha_from_z0(const UnitReal& z0, std::size_t tau, std::size_t n,
                    std::size_t guard = kDefaultGuardBits);

/// Precision used for z0 of a logistic Alpha with the given word precision.
std::size_t z0_precision(std::size_t word_precision) noexcept;

/// 2^(k tau) alpha mod 1, read off by a single shift.
DecodedSample decode_dyadic(const Alpha& alpha, std::size_t k);

enum class LogisticPath {
  conjugate,  ///< phi(shift(word, k tau))
  direct,     ///< sin^2(2^(k tau) arcsin sqrt z0), with the angle kept in turns
};

/// sin^2(2^(k tau) arcsin sqrt z0). Each direct-path call re-inverts z0; use
/// DirectDecoder to amortise that over many k.
DecodedSample decode_logistic(const Alpha& alpha, std::size_t k,
                              LogisticPath path = LogisticPath::conjugate);

/// Direct-path logistic decoder holding arcsin(sqrt z0) / 2 pi.
class DirectDecoder {
 public:
  explicit DirectDecoder(const Alpha& alpha);

  DecodedSample decode(std::size_t k) const;
  const UnitReal& turns() const noexcept { return turns_; }

 private:
  const Alpha* alpha_;
  UnitReal turns_;
};

/// decode at k = 0..count-1 with the scheme's decoder.
std::vector<DecodedSample> decode_all(const Alpha& alpha, std::size_t count,
                                      LogisticPath path = LogisticPath::conjugate);

// --- alpha file -------------------------------------------------------------

/// Alpha plus the optional metadata the CLI needs to restore raw data.
struct AlphaFile {
  Alpha alpha;
  std::optional<std::pair<double, double>> norm;  ///< (min, max)
  std::string modality;                           ///< empty means series
};

/// Text format:
///   scheme=<dyadic|logistic>
///   tau=<int>
///   n=<int>
///   alpha_bits=<binary string>
///   z0_decimal=0.<digits>            (logistic only)
///   norm_min=<float> / norm_max=<float> / modality=<text>   (optional)
/// Every line ends in '\n'.
std::string format_alpha_file(const AlphaFile& file);
/// Inverse of format_alpha_file. A logistic file may leave alpha_bits empty;
/// the word is then recovered from z0_decimal (guard defaults to 32).
AlphaFile parse_alpha_file(std::string_view text);

}  // namespace alphacodec
