#include "alphacodec/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "alphacodec/conjugacy.hpp"
#include "alphacodec/errors.hpp"

namespace alphacodec::verify {

namespace {

constexpr std::string_view kReportHeader =
    "k,original,decoded,abs_error,normalized_error,extrapolated";

// Shifted words are cut to this many bits before phi, as in the decoder.
constexpr std::size_t kEvalBits = 128;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError("report line " + std::to_string(line) + ": bad number \"" +
                     std::string(text) + "\"");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const std::size_t at = text.find(sep);
    out.push_back(text.substr(0, at));
    if (at == std::string_view::npos) {
      return out;
    }
    text = text.substr(at + 1);
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  return lines;
}

}  // namespace

// --- error report -------------------------------------------------------------

ErrorReport error_report(std::span<const double> original, const Alpha& alpha,
                         LogisticPath path) {
  if (original.size() != alpha.n) {
    throw ShapeError("error_report: " + std::to_string(original.size()) +
                     " samples but alpha encodes " + std::to_string(alpha.n));
  }
  ErrorReport report;
  report.scheme = alpha.scheme;
  report.tau = alpha.tau;
  report.n = alpha.n;
  report.bound = error_bound(alpha.scheme, alpha.tau);
  const std::vector<DecodedSample> decoded = decode_all(alpha, alpha.n, path);
  report.rows.reserve(alpha.n);
  for (std::size_t k = 0; k < alpha.n; ++k) {
    ErrorRow row;
    row.k = k;
    row.original = original[k];
    row.decoded = decoded[k].value;
    row.abs_error = std::abs(row.decoded - row.original);
    row.normalized_error = row.abs_error / report.bound;
    row.extrapolated = decoded[k].extrapolated;
    if (k == 0 || row.normalized_error > report.max_normalized_error) {
      report.max_normalized_error = row.normalized_error;
      report.worst_k = k;
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string format_error_report_csv(const ErrorReport& report) {
  std::string out = "# scheme=" + std::string(to_string(report.scheme)) +
                    ",tau=" + std::to_string(report.tau) + ",n=" + std::to_string(report.n) +
                    ",bound=" + format_double(report.bound) + "\n";
  out += kReportHeader;
  out += '\n';
  for (const ErrorRow& row : report.rows) {
    out += std::to_string(row.k) + "," + format_double(row.original) + "," +
           format_double(row.decoded) + "," + format_double(row.abs_error) + "," +
           format_double(row.normalized_error) + "," + (row.extrapolated ? "1" : "0") + "\n";
  }
  return out;
}

ErrorReport parse_error_report_csv(std::string_view text) {
  const std::vector<std::string_view> lines = lines_of(text);
  if (lines.size() < 2 || !lines[0].starts_with("# ") || lines[1] != kReportHeader) {
    throw ParseError("report: missing metadata or header line");
  }
  ErrorReport report;
  const std::vector<std::string_view> meta = split(lines[0].substr(2), ',');
  const char* keys[] = {"scheme=", "tau=", "n=", "bound="};
  if (meta.size() != 4) {
    throw ParseError("report line 1: expected scheme, tau, n and bound");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (!meta[i].starts_with(keys[i])) {
      throw ParseError("report line 1: expected " + std::string(keys[i]));
    }
  }
  report.scheme = parse_scheme(meta[0].substr(7));
  report.tau = parse_number<std::size_t>(meta[1].substr(4), 1);
  report.n = parse_number<std::size_t>(meta[2].substr(2), 1);
  report.bound = parse_number<double>(meta[3].substr(6), 1);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::size_t line = i + 1;
    const std::vector<std::string_view> f = split(lines[i], ',');
    if (f.size() != 6 || (f[5] != "0" && f[5] != "1")) {
      throw ParseError("report line " + std::to_string(line) + ": expected 6 fields");
    }
    ErrorRow row;
    row.k = parse_number<std::size_t>(f[0], line);
    row.original = parse_number<double>(f[1], line);
    row.decoded = parse_number<double>(f[2], line);
    row.abs_error = parse_number<double>(f[3], line);
    row.normalized_error = parse_number<double>(f[4], line);
    row.extrapolated = f[5] == "1";
    if (report.rows.empty() || row.normalized_error > report.max_normalized_error) {
      report.max_normalized_error = row.normalized_error;
      report.worst_k = row.k;
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string format_error_summary(const ErrorReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "scheme=%s tau=%zu n=%zu bound=%.17g max_normalized_error=%.17g worst_k=%zu %s\n",
                std::string(to_string(report.scheme)).c_str(), report.tau, report.n,
                report.bound, report.max_normalized_error, report.worst_k,
                report.valid() ? "PASS" : "FAIL");
  return buf;
}

// --- generalization probe -------------------------------------------------------

bool GeneralizationReport::in_range() const noexcept {
  return std::all_of(extrapolated.begin(), extrapolated.end(),
                     [](double v) { return v >= 0.0 && v <= 1.0; });
}

GeneralizationReport generalization_probe(const Alpha& alpha, std::size_t n_extra,
                                          std::optional<std::span<const double>> original,
                                          const ProbeOptions& options) {
  GeneralizationReport report;
  report.scheme = alpha.scheme;
  report.tau = alpha.tau;
  report.n_train = alpha.n;
  report.n_extra = n_extra;
  if (original) {
    report.in_train_max_normalized_error = error_report(*original, alpha).max_normalized_error;
  }

  const std::size_t tau = alpha.tau;
  const std::size_t working = (alpha.n + n_extra + 1) * tau + alpha.guard;
  const std::size_t multiplier = alpha.scheme == Scheme::logistic ? 2 : 1;
  if (working * multiplier > options.max_precision_bits) {
    throw CapacityError("probe: " + std::to_string(working * multiplier) +
                        " bits exceed the configured limit of " +
                        std::to_string(options.max_precision_bits));
  }
  report.published_digits = decimal_digits_for((alpha.n + 1) * tau);

  UnitReal turns;
  if (alpha.scheme == Scheme::dyadic) {
    const std::string published = to_decimal_string(alpha.word, report.published_digits);
    turns = from_decimal_fraction(published, working);
  } else {
    if (!alpha.z0) {
      throw DomainError("probe: logistic alpha without z0");
    }
    const std::string published = to_decimal_string(*alpha.z0, report.published_digits);
    turns = conjugacy::phi_inv(from_decimal_fraction(published, 2 * working), working);
  }

  report.extrapolated.reserve(n_extra);
  for (std::size_t k = alpha.n; k < alpha.n + n_extra; ++k) {
    const UnitReal shifted = shift_mod1(turns, k * tau);
    const double v =
        alpha.scheme == Scheme::dyadic
            ? shifted.to_double()
            : conjugacy::phi(shifted.truncated(std::min(shifted.precision(), kEvalBits)))
                  .to_double();
    report.extrapolated.push_back(v);
  }
  if (!report.extrapolated.empty()) {
    const auto [lo, hi] =
        std::minmax_element(report.extrapolated.begin(), report.extrapolated.end());
    report.min = *lo;
    report.max = *hi;
    double sum = 0.0;
    for (const double v : report.extrapolated) {
      sum += v;
    }
    report.mean = sum / static_cast<double>(report.extrapolated.size());
  }
  return report;
}

std::string format_generalization_csv(const GeneralizationReport& report) {
  std::string out = "# scheme=" + std::string(to_string(report.scheme)) +
                    ",tau=" + std::to_string(report.tau) +
                    ",n_train=" + std::to_string(report.n_train) +
                    ",n_extra=" + std::to_string(report.n_extra) +
                    ",published_digits=" + std::to_string(report.published_digits);
  if (report.in_train_max_normalized_error) {
    out += ",in_train_max_normalized_error=" + format_double(*report.in_train_max_normalized_error);
  }
  out += ",min=" + format_double(report.min) + ",max=" + format_double(report.max) +
         ",mean=" + format_double(report.mean) + "\n";
  out += "k,extrapolated_value\n";
  for (std::size_t i = 0; i < report.extrapolated.size(); ++i) {
    out += std::to_string(report.n_train + i) + "," + format_double(report.extrapolated[i]) +
           "\n";
  }
  return out;
}

// --- conjugacy ---------------------------------------------------------------------

bool ConjugacyReport::all_within_contract() const noexcept {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ConjugacyRow& r) { return r.within_contract; });
}

std::vector<UnitReal> random_seeds(std::size_t count, std::size_t precision,
                                   std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  std::vector<UnitReal> seeds;
  seeds.reserve(count);
  const std::size_t limbs = (precision + 63) / 64;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<BigUInt::Limb> words(limbs);
    for (auto& w : words) {
      w = rng();
    }
    BigUInt m = BigUInt::from_limbs(std::move(words));
    m >>= limbs * 64 - precision;
    seeds.emplace_back(std::move(m), precision);
  }
  return seeds;
}

ConjugacyReport conjugacy_report(std::span<const UnitReal> seeds, std::size_t steps) {
  ConjugacyReport report;
  report.rows.resize(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const conjugacy::ConjugacyCheck check = conjugacy::conjugacy_check(seeds[i], steps);
    ConjugacyRow& row = report.rows[i];
    row.seed_index = i;
    row.precision = check.precision;
    row.steps = steps;
    row.max_discrepancy_log2 = check.max_discrepancy.log2();
    row.worst_step = check.worst_step;
    row.worst_margin_log2 = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < check.discrepancy.size(); ++k) {
      row.worst_margin_log2 =
          std::max(row.worst_margin_log2, check.discrepancy[k].log2() - check.contract_log2(k));
    }
    row.within_contract = check.within_contract();
  }
  return report;
}

ConjugacyReport conjugacy_report(std::size_t seeds, std::size_t steps, std::size_t precision,
                                 std::uint64_t rng_seed) {
  const std::vector<UnitReal> words = random_seeds(seeds, precision, rng_seed);
  return conjugacy_report(words, steps);
}

std::string format_conjugacy_table(const ConjugacyReport& report) {
  std::string out = "seed  precision  steps  max_log2_discrepancy  worst_step  margin_log2  ok\n";
  char buf[160];
  for (const ConjugacyRow& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%4zu  %9zu  %5zu  %20.3f  %10zu  %11.3f  %s\n",
                  row.seed_index, row.precision, row.steps, row.max_discrepancy_log2,
                  row.worst_step, row.worst_margin_log2, row.within_contract ? "yes" : "no");
    out += buf;
  }
  return out;
}

}  // namespace alphacodec::verify
