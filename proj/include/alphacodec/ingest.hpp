#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Turning raw data into normalized sample lists and back. Images are
// flattened row-major with channels last; audio is 16-bit mono PCM.
namespace alphacodec::ingest {

struct Series {};
struct Scatter {};
struct ImageShape {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 1;

  std::size_t size() const noexcept { return width * height * channels; }
  friend bool operator==(const ImageShape&, const ImageShape&) = default;
};
struct Audio {
  std::uint32_t sample_rate = 11025;
  friend bool operator==(const Audio&, const Audio&) = default;
};

using Modality = std::variant<Series, Scatter, ImageShape, Audio>;

/// "series", "scatter", "image:WxHxC", "audio:RATE".
std::string to_string(const Modality& modality);
Modality parse_modality(std::string_view text);
/// "WxHxC" (or "WxH" for one channel).
ImageShape parse_image_shape(std::string_view text);

struct Dataset {
  std::vector<double> samples;  ///< all in [0, 1]
  double min = 0.0;
  double max = 1.0;
  /// max == min; samples are all 0.5 and denormalize returns the constant.
  bool constant = false;
  Modality modality = Series{};
};

/// (raw - min) / (max - min). Rejects empty input and NaN/infinity.
Dataset normalize(std::span<const double> raw, Modality modality = Series{});
/// Wraps samples already in [0, 1] with the identity normalization (0, 1).
Dataset identity_dataset(std::span<const double> samples, Modality modality = Series{});
/// min + v (max - min) with a single rounding; the constant for constant sets.
std::vector<double> denormalize(const Dataset& dataset, std::span<const double> values);

// --- images ---------------------------------------------------------------

struct Image {
  ImageShape shape;
  std::vector<std::uint8_t> pixels;  ///< row-major, channel-last
};

/// Pixels scaled by 1/255, then min-max normalized over the whole image.
Dataset flatten_image(const Image& image);
/// Denormalizes `values` and rounds back to 8-bit pixels.
Image fold_image(const Dataset& dataset, std::span<const double> values, ImageShape shape);
Image fold_image(const Dataset& dataset, ImageShape shape);

/// Binary PGM (P5, one channel) or PPM (P6, three channels), maxval <= 255.
Image read_pnm(const std::filesystem::path& path);
Image parse_pnm(std::string_view bytes);
/// Canonical header "P5\nW H\n255\n" (P6 for three channels).
void write_pnm(const std::filesystem::path& path, const Image& image);
std::string format_pnm(const Image& image);

Dataset load_image(const std::filesystem::path& path);
void save_image(const std::filesystem::path& path, const Dataset& dataset,
                std::span<const double> values, ImageShape shape);

// --- audio ----------------------------------------------------------------

inline constexpr std::uint32_t kDefaultSampleRate = 11025;

/// (s + 32768) / 65535.
double pcm_to_unit(std::int16_t sample) noexcept;
/// Inverse of pcm_to_unit, rounding to the nearest code and clamping.
std::int16_t unit_to_pcm(double value) noexcept;

struct PcmAudio {
  std::uint32_t sample_rate = kDefaultSampleRate;
  std::vector<std::int16_t> samples;
};

/// Mono 16-bit PCM in a RIFF/WAVE container.
PcmAudio parse_wav(std::string_view bytes);
/// 44-byte canonical header followed by the samples.
std::string format_wav(const PcmAudio& audio);
/// Raw little-endian 16-bit samples.
PcmAudio parse_raw_pcm(std::string_view bytes, std::uint32_t sample_rate);
std::string format_raw_pcm(const PcmAudio& audio);

/// .wav is parsed as WAVE, anything else as raw PCM16LE at `sample_rate`.
Dataset load_audio_pcm(const std::filesystem::path& path,
                       std::uint32_t sample_rate = kDefaultSampleRate);
void save_audio_pcm(const std::filesystem::path& path, const Dataset& dataset,
                    std::span<const double> values);

// --- series -----------------------------------------------------------------

/// One value per line. A non-numeric first line is taken as a header; blank
/// lines are skipped. Parse errors name the offending line.
std::vector<double> parse_series_csv(std::string_view text);
std::vector<double> read_series_csv(const std::filesystem::path& path);
/// min-max normalized series.
Dataset load_series_csv(const std::filesystem::path& path);
/// Shortest round-trip representation, one value per line.
std::string format_series_csv(std::span<const double> values);
void save_series_csv(const std::filesystem::path& path, std::span<const double> values);

// --- file helpers -------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary and renames, so a failed write never leaves
/// a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace alphacodec::ingest
