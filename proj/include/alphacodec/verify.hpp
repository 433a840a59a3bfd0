#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphacodec/codec.hpp"
#include "alphacodec/unit_real.hpp"

namespace alphacodec::verify {

struct ErrorRow {
  std::size_t k = 0;
  double original = 0.0;
  double decoded = 0.0;
  double abs_error = 0.0;
  double normalized_error = 0.0;  ///< abs_error / bound
  bool extrapolated = false;
};

struct ErrorReport {
  Scheme scheme = Scheme::dyadic;
  std::size_t tau = 0;
  std::size_t n = 0;
  double bound = 0.0;
  std::vector<ErrorRow> rows;
  double max_normalized_error = 0.0;
  std::size_t worst_k = 0;

  bool valid() const noexcept { return max_normalized_error < 1.0; }
};

/// Decodes every training sample and compares it with `original`.
/// Throws ShapeError when the lengths differ.
ErrorReport error_report(std::span<const double> original, const Alpha& alpha,
                         LogisticPath path = LogisticPath::conjugate);

/// "# scheme=..,tau=..,n=..,bound=.." then the header
/// "k,original,decoded,abs_error,normalized_error,extrapolated" and one row per
/// sample. Doubles use the shortest round-trip form.
std::string format_error_report_csv(const ErrorReport& report);
ErrorReport parse_error_report_csv(std::string_view text);
/// One line: scheme, tau, n, bound, max normalized error, worst k, verdict.
std::string format_error_summary(const ErrorReport& report);

struct GeneralizationReport {
  Scheme scheme = Scheme::dyadic;
  std::size_t tau = 0;
  std::size_t n_train = 0;
  std::size_t n_extra = 0;
  /// Decimal digits of the published parameter the extrapolations come from.
  std::size_t published_digits = 0;
  std::optional<double> in_train_max_normalized_error;
  std::vector<double> extrapolated;  ///< k = n_train .. n_train + n_extra - 1
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;

  bool in_range() const noexcept;
};

struct ProbeOptions {
  /// Work beyond this many bits raises CapacityError.
  std::size_t max_precision_bits = std::size_t{1} << 26;
};

/// Samples f_alpha past the training payload. The encoded parameter is
/// published the way a learned real would be, as its first
/// ceil((n + 1) tau log10 2) significant decimal digits (z0 for the logistic
/// scheme), and then decoded at a precision wide enough for n + n_extra
/// samples. Everything past the payload is truncation residue, so the
/// extrapolations carry no information about the data.
GeneralizationReport generalization_probe(const Alpha& alpha, std::size_t n_extra,
                                          std::optional<std::span<const double>> original = {},
                                          const ProbeOptions& options = {});

/// "k,extrapolated_value" rows after a "# n_train=..,n_extra=..,min=..,max=..,mean=.." line.
std::string format_generalization_csv(const GeneralizationReport& report);

struct ConjugacyRow {
  std::size_t seed_index = 0;
  std::size_t precision = 0;
  std::size_t steps = 0;
  /// log2 of the largest discrepancy; -infinity when all are zero.
  double max_discrepancy_log2 = 0.0;
  std::size_t worst_step = 0;
  /// Largest log2(discrepancy) - contract_log2(k) over the steps; < 0 passes.
  double worst_margin_log2 = 0.0;
  bool within_contract = false;
};

struct ConjugacyReport {
  std::vector<ConjugacyRow> rows;
  bool all_within_contract() const noexcept;
};

/// Uniform words of the given precision from a fixed-seed generator.
std::vector<UnitReal> random_seeds(std::size_t count, std::size_t precision,
                                   std::uint64_t rng_seed = 0);

ConjugacyReport conjugacy_report(std::span<const UnitReal> seeds, std::size_t steps);
/// `seeds` random words at `precision` bits.
ConjugacyReport conjugacy_report(std::size_t seeds, std::size_t steps,
                                 std::size_t precision = 512, std::uint64_t rng_seed = 0);

/// Aligned text table, one row per seed.
std::string format_conjugacy_table(const ConjugacyReport& report);

}  // namespace alphacodec::verify
