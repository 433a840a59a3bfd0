// alphacodec: encode datasets into a single real, decode them back, and check
// the recovery bounds.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "alphacodec/codec.hpp"
#include "alphacodec/conjugacy.hpp"
#include "alphacodec/errors.hpp"
#include "alphacodec/ingest.hpp"
#include "alphacodec/verify.hpp"

namespace fs = std::filesystem;
using namespace alphacodec;

namespace {

enum Exit { kOk = 0, kBoundViolation = 1, kInputError = 2, kPrecisionExhausted = 3 };

enum class FileKind { csv, image, audio };

FileKind kind_of(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
    return FileKind::image;
  }
  if (ext == ".wav" || ext == ".pcm" || ext == ".raw") {
    return FileKind::audio;
  }
  return FileKind::csv;
}

struct InputOptions {
  std::string input;
  std::string norm = "auto";
  std::uint32_t rate = ingest::kDefaultSampleRate;
};

struct Loaded {
  ingest::Dataset dataset;
  bool normalized = false;
};

Loaded load_input(const InputOptions& opt) {
  const fs::path path = opt.input;
  if (!fs::is_regular_file(path)) {
    throw IoError("input \"" + opt.input + "\" is not a readable file");
  }
  if (opt.norm != "auto" && opt.norm != "minmax" && opt.norm != "none") {
    throw ParseError("--norm must be auto, minmax or none");
  }
  Loaded out;
  switch (kind_of(path)) {
    case FileKind::image:
      out.dataset = ingest::load_image(path);
      out.normalized = true;
      return out;
    case FileKind::audio:
      out.dataset = ingest::load_audio_pcm(path, opt.rate);
      out.normalized = true;
      return out;
    case FileKind::csv:
      break;
  }
  const std::vector<double> raw = ingest::read_series_csv(path);
  const bool in_unit = std::all_of(raw.begin(), raw.end(),
                                   [](double v) { return v >= 0.0 && v <= 1.0; });
  if (opt.norm == "none" || (opt.norm == "auto" && in_unit)) {
    out.dataset = ingest::identity_dataset(raw);
  } else {
    out.dataset = ingest::normalize(raw);
    out.normalized = true;
  }
  return out;
}

AlphaFile read_alpha_file(const std::string& path) {
  return parse_alpha_file(ingest::read_file(path));
}

bool looks_like_alpha_file(const fs::path& path) {
  return ingest::read_file(path).starts_with("scheme=");
}

LogisticPath parse_path(const std::string& text) {
  if (text == "conjugate") {
    return LogisticPath::conjugate;
  }
  if (text == "direct") {
    return LogisticPath::direct;
  }
  throw ParseError("--path must be conjugate or direct");
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty()) {
    std::cout << text;
  } else {
    ingest::write_file_atomic(output, text);
  }
}

// --- encode ---------------------------------------------------------------------

struct EncodeArgs {
  InputOptions in;
  std::string scheme = "dyadic";
  std::size_t tau = 8;
  std::size_t guard = kDefaultGuardBits;
  std::string output;
};

int cmd_encode(const EncodeArgs& args) {
  const Scheme scheme = parse_scheme(args.scheme);
  const Loaded loaded = load_input(args.in);
  EncodeOptions options;
  options.guard = args.guard;
  AlphaFile file;
  file.alpha = encode(scheme, loaded.dataset.samples, args.tau, options);
  if (loaded.normalized) {
    file.norm = {loaded.dataset.min, loaded.dataset.max};
  }
  if (!std::holds_alternative<ingest::Series>(loaded.dataset.modality)) {
    file.modality = ingest::to_string(loaded.dataset.modality);
  }
  const std::string text = format_alpha_file(file);

  const Alpha& alpha = file.alpha;
  const PrecisionBudget budget = alpha.budget();
  const std::string prefix = scheme == Scheme::dyadic ? "alpha" : "conjugate";
  std::string summary;
  summary += "scheme=" + std::string(to_string(scheme)) + "\n";
  summary += "n=" + std::to_string(alpha.n) + "\n";
  summary += "tau=" + std::to_string(alpha.tau) + "\n";
  summary += "p_bin=" + std::to_string(budget.p_bin) + "\n";
  summary += "p_dec=" + std::to_string(budget.p_dec) + "\n";
  summary += prefix + "_bits_prefix=" + to_binary_string(alpha.word).substr(0, 32) + "\n";
  summary += prefix + "_decimal_prefix=" + to_decimal_string(alpha.word, 17) + "\n";
  if (alpha.z0) {
    summary += "z0_decimal_prefix=" + to_decimal_string(*alpha.z0, 17) + "\n";
  }
  if (!args.output.empty()) {
    ingest::write_file_atomic(args.output, text);
  }
  std::cout << summary;
  return kOk;
}

// --- decode ---------------------------------------------------------------------

struct DecodeArgs {
  std::string alpha_file;
  std::optional<std::size_t> count;
  std::string output;
  std::string path = "conjugate";
  std::string image;
  std::optional<std::uint32_t> rate;
  bool raw = false;
};

int cmd_decode(const DecodeArgs& args) {
  const AlphaFile file = read_alpha_file(args.alpha_file);
  const Alpha& alpha = file.alpha;
  ingest::Modality modality = ingest::parse_modality(file.modality);
  if (!args.image.empty()) {
    modality = ingest::parse_image_shape(args.image);
  }
  if (args.rate) {
    modality = ingest::Audio{*args.rate};
  }
  const FileKind out_kind = args.output.empty() ? FileKind::csv : kind_of(args.output);
  if (out_kind == FileKind::image && !std::holds_alternative<ingest::ImageShape>(modality)) {
    throw DomainError("image output needs --image WxHxC or an image alpha file");
  }

  std::size_t count = args.count.value_or(alpha.n);
  if (const auto* shape = std::get_if<ingest::ImageShape>(&modality);
      shape && out_kind == FileKind::image && !args.count) {
    count = shape->size();
  }
  const LogisticPath path = parse_path(args.path);
  std::vector<double> values;
  values.reserve(count);
  for (const DecodedSample& s : decode_all(alpha, count, path)) {
    values.push_back(s.value);
  }

  ingest::Dataset norm;
  norm.modality = modality;
  if (file.norm && !args.raw) {
    norm.min = file.norm->first;
    norm.max = file.norm->second;
    norm.constant = norm.min == norm.max;
  }
  if (out_kind == FileKind::image) {
    ingest::save_image(args.output, norm, values, std::get<ingest::ImageShape>(modality));
  } else if (out_kind == FileKind::audio) {
    ingest::save_audio_pcm(args.output, norm, values);
  } else {
    const std::vector<double> restored =
        file.norm && !args.raw ? ingest::denormalize(norm, values) : values;
    emit(args.output, ingest::format_series_csv(restored));
  }
  return kOk;
}

// --- verify ---------------------------------------------------------------------

struct VerifyArgs {
  InputOptions in;
  std::string scheme = "dyadic";
  std::size_t tau = 8;
  std::size_t guard = kDefaultGuardBits;
  std::string path = "conjugate";
  std::string output;
};

int cmd_verify(const VerifyArgs& args) {
  const Scheme scheme = parse_scheme(args.scheme);
  const LogisticPath path = parse_path(args.path);
  const Loaded loaded = load_input(args.in);
  EncodeOptions options;
  options.guard = args.guard;
  const Alpha alpha = encode(scheme, loaded.dataset.samples, args.tau, options);
  const verify::ErrorReport report = verify::error_report(loaded.dataset.samples, alpha, path);
  if (!args.output.empty()) {
    ingest::write_file_atomic(args.output, verify::format_error_report_csv(report));
  }
  std::cout << verify::format_error_summary(report);
  if (!report.valid()) {
    std::cerr << "error: bound violated at k=" << report.worst_k << "\n";
    return kBoundViolation;
  }
  return kOk;
}

// --- probe ------------------------------------------------------------------------

struct ProbeArgs {
  InputOptions in;
  std::string scheme = "logistic";
  std::size_t tau = 8;
  std::size_t guard = kDefaultGuardBits;
  std::size_t n_extra = 20;
  std::string output;
};

int cmd_probe(const ProbeArgs& args) {
  Alpha alpha;
  std::optional<std::vector<double>> original;
  if (fs::is_regular_file(args.in.input) && looks_like_alpha_file(args.in.input)) {
    alpha = read_alpha_file(args.in.input).alpha;
  } else {
    const Loaded loaded = load_input(args.in);
    EncodeOptions options;
    options.guard = args.guard;
    alpha = encode(parse_scheme(args.scheme), loaded.dataset.samples, args.tau, options);
    original = loaded.dataset.samples;
  }
  const verify::GeneralizationReport report =
      original ? verify::generalization_probe(alpha, args.n_extra,
                                              std::span<const double>(*original))
               : verify::generalization_probe(alpha, args.n_extra);
  emit(args.output, verify::format_generalization_csv(report));
  for (std::size_t i = 0; i < report.extrapolated.size(); ++i) {
    const double v = report.extrapolated[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      std::cerr << "error: extrapolation out of range at k=" << report.n_train + i << "\n";
      return kBoundViolation;
    }
  }
  if (report.in_train_max_normalized_error && *report.in_train_max_normalized_error >= 1.0) {
    std::cerr << "error: training samples exceed the recovery bound\n";
    return kBoundViolation;
  }
  return kOk;
}

// --- conjugacy ----------------------------------------------------------------------

struct ConjugacyArgs {
  std::size_t seeds = 10;
  std::size_t steps = 10;
  std::size_t precision = 512;
  std::uint64_t rng_seed = 0;
};

int cmd_conjugacy(const ConjugacyArgs& args) {
  const verify::ConjugacyReport report =
      verify::conjugacy_report(args.seeds, args.steps, args.precision, args.rng_seed);
  std::cout << verify::format_conjugacy_table(report);
  for (const verify::ConjugacyRow& row : report.rows) {
    if (!row.within_contract) {
      std::cerr << "error: seed " << row.seed_index << " breaks the contract at k="
                << row.worst_step << "\n";
      return kBoundViolation;
    }
  }
  return kOk;
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("input", in.input, "CSV series, PGM/PPM image, or WAV/raw PCM audio")
      ->required();
  cmd->add_option("--norm", in.norm, "auto, minmax or none (CSV input)")
      ->capture_default_str();
  cmd->add_option("--rate", in.rate, "sample rate for raw PCM input")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encode datasets into a single real number and decode them back"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode_cmd = app.add_subcommand("encode", "Encode a dataset into an alpha file");
  add_input_options(encode_cmd, enc.in);
  encode_cmd->add_option("--scheme", enc.scheme, "dyadic or logistic")->capture_default_str();
  encode_cmd->add_option("--tau", enc.tau, "bits per sample")->capture_default_str()
      ->check(CLI::PositiveNumber);
  encode_cmd->add_option("--guard", enc.guard, "guard bits")->capture_default_str();
  encode_cmd->add_option("-o,--output", enc.output, "alpha file to write");

  DecodeArgs dec;
  auto* decode_cmd = app.add_subcommand("decode", "Decode samples from an alpha file");
  decode_cmd->add_option("alpha", dec.alpha_file, "alpha file")->required();
  decode_cmd->add_option("--count", dec.count, "samples to decode (default n)");
  decode_cmd->add_option("-o,--output", dec.output, "CSV, PGM/PPM or WAV/PCM output");
  decode_cmd->add_option("--path", dec.path, "logistic decoder: conjugate or direct")
      ->capture_default_str();
  decode_cmd->add_option("--image", dec.image, "fold into a WxHxC image");
  decode_cmd->add_option("--rate", dec.rate, "audio sample rate");
  decode_cmd->add_flag("--raw", dec.raw, "skip denormalization");

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Round-trip a dataset and check the bound");
  add_input_options(verify_cmd, ver.in);
  verify_cmd->add_option("--scheme", ver.scheme, "dyadic or logistic")->capture_default_str();
  verify_cmd->add_option("--tau", ver.tau, "bits per sample")->capture_default_str()
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--guard", ver.guard, "guard bits")->capture_default_str();
  verify_cmd->add_option("--path", ver.path, "logistic decoder: conjugate or direct")
      ->capture_default_str();
  verify_cmd->add_option("-o,--output", ver.output, "error report CSV");

  ProbeArgs prb;
  auto* probe_cmd = app.add_subcommand("probe", "Decode past the training samples");
  add_input_options(probe_cmd, prb.in);
  probe_cmd->add_option("--scheme", prb.scheme, "dyadic or logistic")->capture_default_str();
  probe_cmd->add_option("--tau", prb.tau, "bits per sample")->capture_default_str()
      ->check(CLI::PositiveNumber);
  probe_cmd->add_option("--guard", prb.guard, "guard bits")->capture_default_str();
  probe_cmd->add_option("--n-extra", prb.n_extra, "extrapolated samples")
      ->capture_default_str();
  probe_cmd->add_option("-o,--output", prb.output, "generalization CSV");

  ConjugacyArgs conj;
  auto* conj_cmd = app.add_subcommand("conjugacy", "Check L^k(phi(a)) = phi(D^k(a))");
  conj_cmd->add_option("--seeds", conj.seeds, "random seeds")->capture_default_str();
  conj_cmd->add_option("--steps", conj.steps, "iterations")->capture_default_str();
  conj_cmd->add_option("--precision", conj.precision, "bits per seed")->capture_default_str();
  conj_cmd->add_option("--rng-seed", conj.rng_seed, "generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*encode_cmd) return cmd_encode(enc);
    if (*decode_cmd) return cmd_decode(dec);
    if (*verify_cmd) return cmd_verify(ver);
    if (*probe_cmd) return cmd_probe(prb);
    if (*conj_cmd) return cmd_conjugacy(conj);
  } catch (const PrecisionExhausted& e) {
    std::cerr << "error: " << e.what() << " (largest valid k is " << e.max_valid() << ")\n";
    return kPrecisionExhausted;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecisionExhausted;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
