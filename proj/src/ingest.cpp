#include "alphacodec/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "alphacodec/errors.hpp"

namespace alphacodec::ingest {

namespace {

std::size_t parse_dim(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw ParseError("invalid " + std::string(what) + " \"" + std::string(text) + "\"");
  }
  return value;
}

std::string lowercase_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<unsigned char>(bytes[offset + static_cast<std::size_t>(i)]);
  }
  return v;
}

std::uint16_t get_u16(std::string_view bytes, std::size_t offset) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[offset]) |
                                    (static_cast<unsigned char>(bytes[offset + 1]) << 8));
}

std::uint32_t sample_rate_of(const Modality& modality) {
  if (const auto* audio = std::get_if<Audio>(&modality)) {
    return audio->sample_rate;
  }
  return kDefaultSampleRate;
}

}  // namespace

// --- modality -------------------------------------------------------------------

std::string to_string(const Modality& modality) {
  struct Visitor {
    std::string operator()(const Series&) const { return "series"; }
    std::string operator()(const Scatter&) const { return "scatter"; }
    std::string operator()(const ImageShape& s) const {
      return "image:" + std::to_string(s.width) + "x" + std::to_string(s.height) + "x" +
             std::to_string(s.channels);
    }
    std::string operator()(const Audio& a) const {
      return "audio:" + std::to_string(a.sample_rate);
    }
  };
  return std::visit(Visitor{}, modality);
}

ImageShape parse_image_shape(std::string_view text) {
  std::vector<std::size_t> dims;
  std::size_t start = 0;
  for (;;) {
    const std::size_t x = text.find('x', start);
    dims.push_back(parse_dim(text.substr(start, x - start), "image dimension"));
    if (x == std::string_view::npos) {
      break;
    }
    start = x + 1;
  }
  if (dims.size() < 2 || dims.size() > 3) {
    throw ParseError("image shape must be WxH or WxHxC, got \"" + std::string(text) + "\"");
  }
  ImageShape shape{dims[0], dims[1], dims.size() == 3 ? dims[2] : 1};
  if (shape.width == 0 || shape.height == 0 || shape.channels == 0) {
    throw ParseError("image dimensions must be positive");
  }
  return shape;
}

Modality parse_modality(std::string_view text) {
  if (text.empty() || text == "series") {
    return Series{};
  }
  if (text == "scatter") {
    return Scatter{};
  }
  if (text.starts_with("image:")) {
    return parse_image_shape(text.substr(6));
  }
  if (text.starts_with("audio:")) {
    const std::size_t rate = parse_dim(text.substr(6), "sample rate");
    if (rate == 0 || rate > 0xFFFFFFFFu) {
      throw ParseError("sample rate out of range");
    }
    return Audio{static_cast<std::uint32_t>(rate)};
  }
  throw ParseError("unknown modality \"" + std::string(text) + "\"");
}

// --- normalization ----------------------------------------------------------------

Dataset normalize(std::span<const double> raw, Modality modality) {
  if (raw.empty()) {
    throw DomainError("normalize: empty input");
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) {
      throw DomainError("normalize: non-finite value at index " + std::to_string(i));
    }
  }
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  Dataset d;
  d.min = *lo;
  d.max = *hi;
  d.modality = std::move(modality);
  d.samples.resize(raw.size());
  if (d.max == d.min) {
    d.constant = true;
    std::fill(d.samples.begin(), d.samples.end(), 0.5);
    return d;
  }
  const double range = d.max - d.min;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double v = std::isfinite(range) ? (raw[i] - d.min) / range
                                    : (raw[i] / 2 - d.min / 2) / (d.max / 2 - d.min / 2);
    d.samples[i] = std::clamp(v, 0.0, 1.0);
  }
  return d;
}

Dataset identity_dataset(std::span<const double> samples, Modality modality) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] >= 0.0 && samples[i] <= 1.0)) {
      throw DomainError("identity_dataset: sample " + std::to_string(i) + " outside [0, 1]");
    }
  }
  Dataset d;
  d.samples.assign(samples.begin(), samples.end());
  d.modality = std::move(modality);
  return d;
}

std::vector<double> denormalize(const Dataset& dataset, std::span<const double> values) {
  std::vector<double> out(values.size());
  const double range = dataset.max - dataset.min;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (dataset.constant) {
      out[i] = dataset.min;
    } else if (std::isfinite(range)) {
      out[i] = std::fma(values[i], range, dataset.min);
    } else {
      out[i] = 2 * std::fma(values[i], dataset.max / 2 - dataset.min / 2, dataset.min / 2);
    }
  }
  return out;
}

// --- images -------------------------------------------------------------------------

Dataset flatten_image(const Image& image) {
  if (image.shape.size() == 0 || image.pixels.size() != image.shape.size()) {
    throw ShapeError("flatten_image: " + std::to_string(image.pixels.size()) +
                     " pixels do not match shape " + to_string(image.shape));
  }
  std::vector<double> scaled(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), scaled.begin(),
                 [](std::uint8_t p) { return static_cast<double>(p) / 255.0; });
  return normalize(scaled, image.shape);
}

Image fold_image(const Dataset& dataset, std::span<const double> values, ImageShape shape) {
  if (shape.size() == 0 || values.size() != shape.size()) {
    throw ShapeError("fold_image: " + std::to_string(values.size()) +
                     " values do not match shape " + to_string(shape));
  }
  const std::vector<double> scaled = denormalize(dataset, values);
  Image image;
  image.shape = shape;
  image.pixels.resize(scaled.size());
  std::transform(scaled.begin(), scaled.end(), image.pixels.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
  });
  return image;
}

Image fold_image(const Dataset& dataset, ImageShape shape) {
  return fold_image(dataset, dataset.samples, shape);
}

Image parse_pnm(std::string_view bytes) {
  std::size_t pos = 0;
  const auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("PNM: " + what + " at offset " + std::to_string(pos));
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw fail("expected P5 or P6 magic");
  }
  const std::size_t channels = bytes[1] == '5' ? 1 : 3;
  pos = 2;
  const auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') {
          ++pos;
        }
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos])) != 0) {
        ++pos;
      } else {
        break;
      }
    }
  };
  const auto read_number = [&](std::string_view what) {
    skip_space();
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos])) != 0) {
      ++pos;
    }
    if (start == pos) {
      throw fail("expected " + std::string(what));
    }
    return parse_dim(bytes.substr(start, pos - start), what);
  };
  const std::size_t width = read_number("width");
  const std::size_t height = read_number("height");
  const std::size_t maxval = read_number("maxval");
  if (maxval == 0 || maxval > 255) {
    throw fail("unsupported maxval " + std::to_string(maxval));
  }
  if (pos >= bytes.size() || std::isspace(static_cast<unsigned char>(bytes[pos])) == 0) {
    throw fail("expected whitespace after header");
  }
  ++pos;
  Image image;
  image.shape = {width, height, channels};
  if (image.shape.size() == 0) {
    throw fail("empty image");
  }
  if (bytes.size() - pos < image.shape.size()) {
    throw fail("truncated pixel data");
  }
  image.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + image.shape.size()));
  return image;
}

Image read_pnm(const std::filesystem::path& path) { return parse_pnm(read_file(path)); }

std::string format_pnm(const Image& image) {
  if (image.shape.channels != 1 && image.shape.channels != 3) {
    throw ShapeError("PNM supports one (PGM) or three (PPM) channels");
  }
  if (image.pixels.size() != image.shape.size()) {
    throw ShapeError("format_pnm: pixel count does not match shape");
  }
  std::string out = image.shape.channels == 1 ? "P5\n" : "P6\n";
  out += std::to_string(image.shape.width) + " " + std::to_string(image.shape.height) +
         "\n255\n";
  out.append(image.pixels.begin(), image.pixels.end());
  return out;
}

void write_pnm(const std::filesystem::path& path, const Image& image) {
  write_file_atomic(path, format_pnm(image));
}

Dataset load_image(const std::filesystem::path& path) { return flatten_image(read_pnm(path)); }

void save_image(const std::filesystem::path& path, const Dataset& dataset,
                std::span<const double> values, ImageShape shape) {
  write_pnm(path, fold_image(dataset, values, shape));
}

// --- audio ------------------------------------------------------------------------------

double pcm_to_unit(std::int16_t sample) noexcept {
  return (static_cast<double>(sample) + 32768.0) / 65535.0;
}

std::int16_t unit_to_pcm(double value) noexcept {
  const long code = std::clamp(std::lround(value * 65535.0), 0L, 65535L);
  return static_cast<std::int16_t>(code - 32768);
}

PcmAudio parse_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw ParseError("WAV: missing RIFF/WAVE header at offset 0");
  }
  PcmAudio audio;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const std::uint32_t size = get_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (bytes.size() - body < size) {
      throw ParseError("WAV: chunk \"" + std::string(id) + "\" truncated at offset " +
                       std::to_string(pos));
    }
    if (id == "fmt ") {
      if (size < 16) {
        throw ParseError("WAV: fmt chunk too short at offset " + std::to_string(pos));
      }
      const std::uint16_t format = get_u16(bytes, body);
      const std::uint16_t channels = get_u16(bytes, body + 2);
      audio.sample_rate = get_u32(bytes, body + 4);
      const std::uint16_t bits = get_u16(bytes, body + 14);
      if (format != 1 || channels != 1 || bits != 16) {
        throw ParseError("WAV: only 16-bit mono PCM is supported (offset " +
                         std::to_string(body) + ")");
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) {
        throw ParseError("WAV: data chunk before fmt chunk at offset " + std::to_string(pos));
      }
      audio.samples.resize(size / 2);
      for (std::size_t i = 0; i < audio.samples.size(); ++i) {
        audio.samples[i] = static_cast<std::int16_t>(get_u16(bytes, body + 2 * i));
      }
      return audio;
    }
    pos = body + size + (size & 1U);
  }
  throw ParseError("WAV: no data chunk");
}

std::string format_wav(const PcmAudio& audio) {
  const auto data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, audio.sample_rate);
  put_u32(out, audio.sample_rate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (const std::int16_t s : audio.samples) {
    put_u16(out, static_cast<std::uint16_t>(s));
  }
  return out;
}

PcmAudio parse_raw_pcm(std::string_view bytes, std::uint32_t sample_rate) {
  if (bytes.size() % 2 != 0) {
    throw ParseError("raw PCM: odd byte count, trailing byte at offset " +
                     std::to_string(bytes.size() - 1));
  }
  PcmAudio audio;
  audio.sample_rate = sample_rate;
  audio.samples.resize(bytes.size() / 2);
  for (std::size_t i = 0; i < audio.samples.size(); ++i) {
    audio.samples[i] = static_cast<std::int16_t>(get_u16(bytes, 2 * i));
  }
  return audio;
}

std::string format_raw_pcm(const PcmAudio& audio) {
  std::string out;
  out.reserve(audio.samples.size() * 2);
  for (const std::int16_t s : audio.samples) {
    put_u16(out, static_cast<std::uint16_t>(s));
  }
  return out;
}

Dataset load_audio_pcm(const std::filesystem::path& path, std::uint32_t sample_rate) {
  const std::string bytes = read_file(path);
  const PcmAudio audio = lowercase_extension(path) == ".wav" ? parse_wav(bytes)
                                                             : parse_raw_pcm(bytes, sample_rate);
  std::vector<double> unit(audio.samples.size());
  std::transform(audio.samples.begin(), audio.samples.end(), unit.begin(), pcm_to_unit);
  return normalize(unit, Audio{audio.sample_rate});
}

void save_audio_pcm(const std::filesystem::path& path, const Dataset& dataset,
                    std::span<const double> values) {
  PcmAudio audio;
  audio.sample_rate = sample_rate_of(dataset.modality);
  const std::vector<double> unit = denormalize(dataset, values);
  audio.samples.resize(unit.size());
  std::transform(unit.begin(), unit.end(), audio.samples.begin(), unit_to_pcm);
  write_file_atomic(path, lowercase_extension(path) == ".wav" ? format_wav(audio)
                                                              : format_raw_pcm(audio));
}

// --- series -----------------------------------------------------------------------------

std::vector<double> parse_series_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t line_no = 0;
  bool first_content = true;
  while (!text.empty()) {
    ++line_no;
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())) != 0) {
      line.remove_suffix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())) != 0) {
      line.remove_prefix(1);
    }
    if (line.empty()) {
      continue;
    }
    double value = 0.0;
    const char* begin = line.data();
    if (*begin == '+') {
      ++begin;
    }
    const auto res = std::from_chars(begin, line.data() + line.size(), value);
    const bool ok = res.ec == std::errc{} && res.ptr == line.data() + line.size();
    if (!ok) {
      if (first_content) {
        first_content = false;
        continue;  // header
      }
      throw ParseError("CSV line " + std::to_string(line_no) + ": not a number \"" +
                       std::string(line) + "\"");
    }
    first_content = false;
    values.push_back(value);
  }
  if (values.empty()) {
    throw ParseError("CSV: no values");
  }
  return values;
}

std::vector<double> read_series_csv(const std::filesystem::path& path) {
  return parse_series_csv(read_file(path));
}

Dataset load_series_csv(const std::filesystem::path& path) {
  return normalize(read_series_csv(path), Series{});
}

std::string format_series_csv(std::span<const double> values) {
  std::string out;
  char buf[64];
  for (const double v : values) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
    out += '\n';
  }
  return out;
}

void save_series_csv(const std::filesystem::path& path, std::span<const double> values) {
  write_file_atomic(path, format_series_csv(values));
}

// --- files --------------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open \"" + path.string() + "\" for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("error reading \"" + path.string() + "\"");
  }
  return std::move(buffer).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open \"" + tmp.string() + "\" for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("error writing \"" + tmp.string() + "\"");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at \"" + path.string() + "\"");
  }
}

}  // namespace alphacodec::ingest
