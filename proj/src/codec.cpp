#include "alphacodec/codec.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "alphacodec/conjugacy.hpp"
#include "alphacodec/errors.hpp"

namespace alphacodec {

namespace {

// Shifted words are truncated to this many bits before phi; the decoded value
// is a double, so anything past ~60 bits is noise.
constexpr std::size_t kEvalBits = 128;

void validate_samples(std::span<const double> samples, std::size_t tau) {
  if (samples.empty()) {
    throw DomainError("encode: empty sample list");
  }
  if (tau == 0) {
    throw DomainError("encode: tau must be at least 1");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw DomainError("encode: sample " + std::to_string(i) + " is outside [0, 1]");
    }
  }
}

PrecisionBudget checked_budget(std::size_t n, std::size_t tau, const EncodeOptions& options,
                               std::size_t multiplier) {
  const PrecisionBudget budget = required_precision(n, tau, options.guard);
  if (budget.p_bin * multiplier > options.max_precision_bits) {
    throw CapacityError("encode: " + std::to_string(budget.p_bin * multiplier) +
                        " bits exceed the configured limit of " +
                        std::to_string(options.max_precision_bits));
  }
  return budget;
}

/// Concatenates per-sample words and pads with zeros to p_bin.
UnitReal assemble(std::span<const UnitReal> parts, std::size_t p_bin) {
  return concat(parts).extended(p_bin);
}

std::size_t checked_shift(const Alpha& alpha, std::size_t k) {
  if (k >= alpha.decode_limit()) {
    throw PrecisionExhausted("decode: index " + std::to_string(k) +
                                 " is past the last decodable sample",
                             alpha.decode_limit() == 0 ? 0 : alpha.decode_limit() - 1);
  }
  return k * alpha.tau;
}

DecodedSample evaluate(const Alpha& alpha, std::size_t k, const UnitReal& shifted) {
  DecodedSample out;
  out.k = k;
  out.bound = error_bound(alpha.scheme, alpha.tau);
  out.extrapolated = k >= alpha.n;
  if (alpha.scheme == Scheme::dyadic) {
    out.value = shifted.to_double();
  } else {
    const std::size_t bits = std::min(shifted.precision(), kEvalBits);
    out.value = conjugacy::phi(shifted.truncated(bits)).to_double();
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Scheme scheme) noexcept {
  return scheme == Scheme::dyadic ? "dyadic" : "logistic";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "dyadic") {
    return Scheme::dyadic;
  }
  if (text == "logistic") {
    return Scheme::logistic;
  }
  throw ParseError("unknown scheme \"" + std::string(text) + "\"");
}

double error_bound(Scheme scheme, std::size_t tau) noexcept {
  const double base = std::ldexp(1.0, -static_cast<int>(tau));
  return scheme == Scheme::dyadic ? base : 2.0 * std::numbers::pi * base;
}

std::size_t z0_precision(std::size_t word_precision) noexcept { return 2 * word_precision; }

Alpha encode_dyadic(std::span<const double> samples, std::size_t tau,
                    const EncodeOptions& options) {
  validate_samples(samples, tau);
  const PrecisionBudget budget = checked_budget(samples.size(), tau, options, 1);
  std::vector<UnitReal> parts;
  parts.reserve(samples.size());
  for (const double x : samples) {
    parts.push_back(from_decimal_fraction(x, tau));
  }
  Alpha alpha;
  alpha.scheme = Scheme::dyadic;
  alpha.tau = tau;
  alpha.n = samples.size();
  alpha.guard = options.guard;
  alpha.word = assemble(parts, budget.p_bin);
  return alpha;
}

Alpha encode_logistic(std::span<const double> samples, std::size_t tau,
                      const EncodeOptions& options) {
  validate_samples(samples, tau);
  const PrecisionBudget budget = checked_budget(samples.size(), tau, options, 2);
  std::vector<UnitReal> parts;
  parts.reserve(samples.size());
  for (const double x : samples) {
    parts.push_back(conjugacy::phi_inv(x, tau));
  }
  Alpha alpha;
  alpha.scheme = Scheme::logistic;
  alpha.tau = tau;
  alpha.n = samples.size();
  alpha.guard = options.guard;
  alpha.word = assemble(parts, budget.p_bin);
  alpha.z0 = conjugacy::phi(alpha.word, z0_precision(budget.p_bin));
  return alpha;
}

Alpha encode(Scheme scheme, std::span<const double> samples, std::size_t tau,
             const EncodeOptions& options) {
  return scheme == Scheme::dyadic ? encode_dyadic(samples, tau, options)
                                  : encode_logistic(samples, tau, options);
}

Alpha alpha_from_z0(const UnitReal& z0, std::size_t tau, std::size_t n, std::size_t guard) {
  if (tau == 0 || n == 0) {
    throw DomainError("alpha_from_z0: n and tau must be at least 1");
  }
  const PrecisionBudget budget = required_precision(n, tau, guard);
  Alpha alpha;
  alpha.scheme = Scheme::logistic;
  alpha.tau = tau;
  alpha.n = n;
  alpha.guard = guard;
  alpha.z0 = z0.resized(std::max(z0.precision(), z0_precision(budget.p_bin)));
  // Round to nearest: the guard bits of an encoded word are zero, and a
  // floored inverse would borrow through them.
  constexpr std::size_t kRound = 16;
  const UnitReal fine = conjugacy::phi_inv(*alpha.z0, budget.p_bin + kRound);
  alpha.word = UnitReal::saturating(
      (fine.mantissa() + BigUInt::power_of_two(kRound - 1)) >> kRound, budget.p_bin);
  alpha.reconstructed = true;
  return alpha;
}

DecodedSample decode_dyadic(const Alpha& alpha, std::size_t k) {
  return evaluate(alpha, k, shift_mod1(alpha.word, checked_shift(alpha, k)));
}

DecodedSample decode_logistic(const Alpha& alpha, std::size_t k, LogisticPath path) {
  if (alpha.scheme != Scheme::logistic) {
    throw DomainError("decode_logistic: alpha was not encoded with the logistic scheme");
  }
  if (path == LogisticPath::direct) {
    return DirectDecoder(alpha).decode(k);
  }
  return evaluate(alpha, k, shift_mod1(alpha.word, checked_shift(alpha, k)));
}

DirectDecoder::DirectDecoder(const Alpha& alpha) : alpha_(&alpha) {
  if (alpha.scheme != Scheme::logistic || !alpha.z0) {
    throw DomainError("DirectDecoder: alpha has no z0");
  }
  turns_ = conjugacy::phi_inv(*alpha.z0);
}

DecodedSample DirectDecoder::decode(std::size_t k) const {
  return evaluate(*alpha_, k, shift_mod1(turns_, checked_shift(*alpha_, k)));
}

std::vector<DecodedSample> decode_all(const Alpha& alpha, std::size_t count,
                                      LogisticPath path) {
  std::vector<DecodedSample> out;
  out.reserve(count);
  if (alpha.scheme == Scheme::logistic && path == LogisticPath::direct) {
    const DirectDecoder decoder(alpha);
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back(decoder.decode(k));
    }
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(alpha.scheme == Scheme::dyadic ? decode_dyadic(alpha, k)
                                                 : decode_logistic(alpha, k));
  }
  return out;
}

// --- alpha file ---------------------------------------------------------------

std::string format_alpha_file(const AlphaFile& file) {
  const Alpha& alpha = file.alpha;
  std::string out;
  out += "scheme=";
  out += to_string(alpha.scheme);
  out += "\ntau=" + std::to_string(alpha.tau);
  out += "\nn=" + std::to_string(alpha.n);
  out += "\nalpha_bits=";
  if (!alpha.reconstructed) {
    out += to_binary_string(alpha.word);
  }
  out += '\n';
  if (alpha.scheme == Scheme::logistic) {
    if (!alpha.z0) {
      throw DomainError("format_alpha_file: logistic alpha without z0");
    }
    // Rounded up with one spare digit, so parsing restores z0 bit for bit.
    const std::size_t digits = decimal_digits_for(alpha.z0->precision()) + 1;
    out += "z0_decimal=" + to_decimal_string(*alpha.z0, digits, DecimalRounding::upward) + "\n";
  }
  if (file.norm) {
    out += "norm_min=" + format_double(file.norm->first) + "\n";
    out += "norm_max=" + format_double(file.norm->second) + "\n";
  }
  if (!file.modality.empty()) {
    out += "modality=" + file.modality + "\n";
  }
  return out;
}

namespace {

struct Line {
  std::string_view key;
  std::string_view value;
  std::size_t number;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("alpha file line " + std::to_string(number) + ": expected key=value");
    }
    for (const char c : line) {
      if (c == ' ' || c == '\t' || c == '\r') {
        throw ParseError("alpha file line " + std::to_string(number) +
                         ": unexpected whitespace");
      }
    }
    lines.push_back({line.substr(0, eq), line.substr(eq + 1), number});
  }
  return lines;
}

std::size_t parse_count(const Line& line) {
  std::size_t value = 0;
  const auto* end = line.value.data() + line.value.size();
  const auto res = std::from_chars(line.value.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end || line.value.empty()) {
    throw ParseError("alpha file line " + std::to_string(line.number) + ": bad integer \"" +
                     std::string(line.value) + "\"");
  }
  return value;
}

double parse_real(const Line& line) {
  double value = 0.0;
  const auto* end = line.value.data() + line.value.size();
  const auto res = std::from_chars(line.value.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(value)) {
    throw ParseError("alpha file line " + std::to_string(line.number) + ": bad number \"" +
                     std::string(line.value) + "\"");
  }
  return value;
}

const Line& expect(const std::vector<Line>& lines, std::size_t index, std::string_view key) {
  if (index >= lines.size() || lines[index].key != key) {
    throw ParseError("alpha file: expected \"" + std::string(key) + "=\" on line " +
                     std::to_string(index + 1));
  }
  return lines[index];
}

}  // namespace

AlphaFile parse_alpha_file(std::string_view text) {
  const std::vector<Line> lines = split_lines(text);
  AlphaFile file;
  Alpha& alpha = file.alpha;
  alpha.scheme = parse_scheme(expect(lines, 0, "scheme").value);
  alpha.tau = parse_count(expect(lines, 1, "tau"));
  alpha.n = parse_count(expect(lines, 2, "n"));
  if (alpha.tau == 0 || alpha.n == 0) {
    throw ParseError("alpha file: tau and n must be at least 1");
  }
  const std::string_view bits = expect(lines, 3, "alpha_bits").value;
  std::size_t next = 4;
  const std::size_t payload = (alpha.n + 1) * alpha.tau;

  if (!bits.empty()) {
    if (bits.size() < payload) {
      throw ParseError("alpha file: alpha_bits holds " + std::to_string(bits.size()) +
                       " bits, fewer than the " + std::to_string(payload) +
                       " payload bits for n and tau");
    }
    alpha.word = from_binary_string(bits);
    alpha.guard = bits.size() - payload;
  }

  if (alpha.scheme == Scheme::logistic) {
    const std::string_view z0_text = expect(lines, next++, "z0_decimal").value;
    if (z0_text.substr(0, 2) != "0." && z0_text.substr(0, 1) != ".") {
      throw ParseError("alpha file: z0_decimal must start with \"0.\"");
    }
    if (bits.empty()) {
      const PrecisionBudget budget = required_precision(alpha.n, alpha.tau);
      const UnitReal z0 = from_decimal_fraction(z0_text, z0_precision(budget.p_bin));
      alpha = alpha_from_z0(z0, alpha.tau, alpha.n, budget.guard);
    } else {
      alpha.z0 = from_decimal_fraction(z0_text, z0_precision(alpha.word.precision()));
    }
  } else if (bits.empty()) {
    throw ParseError("alpha file: a dyadic alpha needs alpha_bits");
  }

  std::optional<double> norm_min;
  std::optional<double> norm_max;
  for (; next < lines.size(); ++next) {
    const Line& line = lines[next];
    if (line.key == "norm_min") {
      norm_min = parse_real(line);
    } else if (line.key == "norm_max") {
      norm_max = parse_real(line);
    } else if (line.key == "modality") {
      file.modality = std::string(line.value);
    } else {
      throw ParseError("alpha file line " + std::to_string(line.number) + ": unknown key \"" +
                       std::string(line.key) + "\"");
    }
  }
  if (norm_min.has_value() != norm_max.has_value()) {
    throw ParseError("alpha file: norm_min and norm_max must appear together");
  }
  if (norm_min) {
    file.norm = std::make_pair(*norm_min, *norm_max);
  }
  return file;
}

}  // namespace alphacodec
