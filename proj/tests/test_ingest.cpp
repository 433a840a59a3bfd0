#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "alphacodec/codec.hpp"
#include "alphacodec/errors.hpp"
#include "alphacodec/ingest.hpp"

using namespace alphacodec;
using namespace alphacodec::ingest;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "alphacodec_test_ingest";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Normalize, MinMax) {
  const std::vector<double> raw = {10, 20, 30};
  const Dataset d = normalize(raw);
  EXPECT_EQ(d.samples, (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(d.min, 10);
  EXPECT_EQ(d.max, 30);
  EXPECT_FALSE(d.constant);
  EXPECT_EQ(denormalize(d, std::vector<double>{0.5})[0], 20);
  EXPECT_EQ(denormalize(d, d.samples), raw);
}

TEST(Normalize, Constant) {
  const Dataset d = normalize(std::vector<double>{5, 5, 5});
  EXPECT_TRUE(d.constant);
  EXPECT_EQ(d.samples, (std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_EQ(d.min, 5);
  EXPECT_EQ(d.max, 5);
  EXPECT_EQ(denormalize(d, d.samples), (std::vector<double>{5, 5, 5}));
}

TEST(Normalize, RejectsBadInput) {
  EXPECT_THROW(normalize(std::vector<double>{}), DomainError);
  EXPECT_THROW(normalize(std::vector<double>{1, std::nan("")}), DomainError);
  EXPECT_THROW(normalize(std::vector<double>{1, INFINITY}), DomainError);
  EXPECT_THROW(identity_dataset(std::vector<double>{0.5, 1.5}), DomainError);
}

TEST(Normalize, IdentityNorm) {
  const std::vector<double> v = {0.1, 0.7};
  const Dataset d = identity_dataset(v);
  EXPECT_EQ(denormalize(d, v), v);
}

TEST(Normalize, SamplesInUnitIntervalForExtremeRanges) {
  const std::vector<double> raw = {-1.7e308, 0.0, 1.7e308, 3.0};
  const Dataset d = normalize(raw);
  for (const double s : d.samples) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
  EXPECT_EQ(d.samples.front(), 0.0);
  EXPECT_EQ(d.samples[2], 1.0);
  const auto back = denormalize(d, d.samples);
  EXPECT_TRUE(std::isfinite(back[0]));
  EXPECT_EQ(back[2], 1.7e308);
}

TEST(Normalize, DenormalizeInvertsWithinRounding) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> raw(50);
    for (double& v : raw) v = static_cast<double>(static_cast<int>(rng() % 20001) - 10000);
    const Dataset d = normalize(raw);
    const auto back = denormalize(d, d.samples);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      EXPECT_LE(std::abs(back[i] - raw[i]), (d.max - d.min) * 0x1p-51) << raw[i];
    }
  }
}

TEST(Normalize, PowerOfTwoRangeIsExact) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> raw(50);
    for (double& v : raw) v = static_cast<double>(rng() % 1025) - 512.0;
    raw[0] = -512.0;
    raw[1] = 512.0;
    const Dataset d = normalize(raw);
    EXPECT_EQ(denormalize(d, d.samples), raw);
  }
}

TEST(Normalize, FloatDataRoundTripsToFewUlps) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> raw(50);
    for (double& v : raw) v = u(rng);
    const Dataset d = normalize(raw);
    const auto back = denormalize(d, d.samples);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      EXPECT_LE(std::abs(back[i] - raw[i]), 4 * std::ldexp(1.0, -52) * (d.max - d.min));
    }
  }
}

TEST(Normalize, CodecRoundTripInRawUnits) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(1000, 4000);
  std::vector<double> prices(200);
  for (double& p : prices) p = u(rng);
  const Dataset d = normalize(prices);
  const Alpha a = encode_logistic(d.samples, 8);
  std::vector<double> decoded;
  for (const auto& s : decode_all(a, prices.size())) decoded.push_back(s.value);
  const auto back = denormalize(d, decoded);
  for (std::size_t i = 0; i < prices.size(); ++i) {
    EXPECT_LT(std::abs(back[i] - prices[i]), (d.max - d.min) * error_bound(Scheme::logistic, 8));
  }
}

TEST(Modality, StringsRoundTrip) {
  for (const char* text : {"series", "scatter", "image:32x32x3", "audio:11025"}) {
    EXPECT_EQ(to_string(parse_modality(text)), text);
  }
  EXPECT_EQ(parse_image_shape("4x3"), (ImageShape{4, 3, 1}));
  EXPECT_THROW(parse_image_shape("4x0x3"), ParseError);
  EXPECT_THROW(parse_image_shape("4"), ParseError);
  EXPECT_THROW(parse_image_shape("axb"), ParseError);
  EXPECT_THROW(parse_modality("video"), ParseError);
}

TEST(Image, FlattenFoldInverse) {
  Image img;
  img.shape = {32, 32, 3};
  std::mt19937_64 rng(44);
  img.pixels.resize(img.shape.size());
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng());
  const Dataset d = flatten_image(img);
  EXPECT_EQ(d.samples.size(), 3072u);
  const Image back = fold_image(d, img.shape);
  EXPECT_EQ(back.pixels, img.pixels);
}

TEST(Image, SinglePixelIsConstant) {
  Image img{{1, 1, 1}, {255}};
  const Dataset d = flatten_image(img);
  EXPECT_TRUE(d.constant);
  EXPECT_EQ(d.samples, std::vector<double>{0.5});
  EXPECT_EQ(fold_image(d, img.shape).pixels, img.pixels);
}

TEST(Image, ShapeErrors) {
  Image img{{2, 2, 1}, {1, 2, 3}};
  EXPECT_THROW(flatten_image(img), ShapeError);
  const Dataset d = normalize(std::vector<double>{0, 1, 0.5});
  EXPECT_THROW(fold_image(d, ImageShape{2, 2, 1}), ShapeError);
}

TEST(Image, CanonicalFixturesAreByteIdentical) {
  for (const char* name : {"gradient.pgm", "swatch.ppm"}) {
    const fs::path src = fs::path(ALPHACODEC_TEST_DATA) / name;
    const Dataset d = load_image(src);
    const fs::path out = temp_dir() / name;
    save_image(out, d, d.samples, std::get<ImageShape>(d.modality));
    EXPECT_EQ(read_file(out), read_file(src)) << name;
  }
}

TEST(Image, PnmParsing) {
  const Image img = parse_pnm("P5\n# comment\n2 1\n# another\n255\n\x01\x02");
  EXPECT_EQ(img.shape, (ImageShape{2, 1, 1}));
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{1, 2}));
  EXPECT_THROW(parse_pnm("P3\n1 1\n255\n0"), ParseError);
  EXPECT_THROW(parse_pnm("P5\n2 2\n255\n\x01"), ParseError);
  EXPECT_THROW(parse_pnm("P5\n1 1\n65535\n\x01\x01"), ParseError);
  EXPECT_THROW(parse_pnm("P6\n1 x\n255\n"), ParseError);
  EXPECT_EQ(format_pnm(img), std::string("P5\n2 1\n255\n\x01\x02"));
}

TEST(Audio, PcmEndpointsAndInverse) {
  EXPECT_EQ(pcm_to_unit(-32768), 0.0);
  EXPECT_EQ(pcm_to_unit(32767), 1.0);
  for (int s = -32768; s <= 32767; ++s) {
    ASSERT_EQ(unit_to_pcm(pcm_to_unit(static_cast<std::int16_t>(s))), s);
  }
  EXPECT_EQ(unit_to_pcm(2.0), 32767);
  EXPECT_EQ(unit_to_pcm(-1.0), -32768);
}

TEST(Audio, WavRoundTrip) {
  PcmAudio audio;
  audio.sample_rate = 11025;
  for (int i = 0; i < 300; ++i) {
    audio.samples.push_back(static_cast<std::int16_t>(20000 * std::sin(i * 0.1)));
  }
  const std::string wav = format_wav(audio);
  EXPECT_EQ(wav.size(), 44u + 600u);
  const PcmAudio back = parse_wav(wav);
  EXPECT_EQ(back.samples, audio.samples);
  EXPECT_EQ(back.sample_rate, 11025u);
  EXPECT_EQ(parse_raw_pcm(format_raw_pcm(audio), 8000).samples, audio.samples);
  EXPECT_THROW(parse_raw_pcm("abc", 8000), ParseError);
  EXPECT_THROW(parse_wav("RIFX"), ParseError);
  std::string stereo = wav;
  stereo[22] = 2;
  EXPECT_THROW(parse_wav(stereo), ParseError);
}

TEST(Audio, FileRoundTripThroughDataset) {
  PcmAudio audio;
  audio.sample_rate = 8000;
  audio.samples = {-32768, -100, 0, 5, 32767, 1234};
  for (const char* name : {"clip.wav", "clip.pcm"}) {
    const fs::path path = temp_dir() / name;
    write_file_atomic(path, std::string(name).ends_with(".wav") ? format_wav(audio)
                                                                : format_raw_pcm(audio));
    const Dataset d = load_audio_pcm(path, 8000);
    EXPECT_EQ(d.samples.front(), 0.0);
    EXPECT_EQ(d.samples[4], 1.0);
    EXPECT_EQ(to_string(d.modality), "audio:8000");
    const fs::path out = temp_dir() / (std::string("out_") + name);
    save_audio_pcm(out, d, d.samples);
    EXPECT_EQ(read_file(out), read_file(path));
  }
}

TEST(Series, CsvParsing) {
  EXPECT_EQ(parse_series_csv("1\n2\n3\n"), (std::vector<double>{1, 2, 3}));
  const Dataset d = normalize(parse_series_csv("1\n2\n3\n"));
  EXPECT_EQ(d.samples, (std::vector<double>{0, 0.5, 1}));
  EXPECT_EQ(parse_series_csv("price\r\n1.5\r\n\r\n-2e3\n"), (std::vector<double>{1.5, -2000}));
  try {
    parse_series_csv("1\n2\nabc\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(parse_series_csv("header\n"), ParseError);
  EXPECT_THROW(parse_series_csv(""), ParseError);
}

TEST(Series, FormatRoundTrips) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::vector<double> v(500);
  for (double& x : v) x = u(rng);
  EXPECT_EQ(parse_series_csv(format_series_csv(v)), v);
  const fs::path path = temp_dir() / "series.csv";
  save_series_csv(path, v);
  EXPECT_EQ(read_series_csv(path), v);
  EXPECT_FALSE(fs::exists(path.string() + ".partial"));
}

TEST(Files, Errors) {
  EXPECT_THROW(read_file("/nonexistent/file"), IoError);
  EXPECT_THROW(write_file_atomic("/nonexistent/dir/out.csv", "x"), IoError);
}
