#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "image.hpp"
#include "raster_io.hpp"
#include "rng.hpp"

using namespace bcseg;

namespace {

// Fresh scratch directory per process so parallel ctest runs cannot collide.
std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("bcseg_io_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string scratch(const std::string& name) {
  return (scratch_dir() / name).string();
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

GrayImage random_gray(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (double& x : v) x = static_cast<double>(uniform_index(rng, 256));
  return GrayImage(w, h, std::move(v));
}

}  // namespace

TEST_CASE("gray images round-trip through PGM and PNG") {
  GrayImage img = random_gray(33, 17, 101);
  for (const char* ext : {".pgm", ".png"}) {
    const std::string path = scratch(std::string("gray") + ext);
    save_gray(img, path);
    GrayImage back = load_gray(path);
    REQUIRE(back.width() == img.width());
    REQUIRE(back.height() == img.height());
    CHECK(back.values() == img.values());
  }
}

TEST_CASE("gray export rounds to nearest and clamps") {
  GrayImage img(4, 1, {3.4, 3.6, 0.2, 999.0});
  const std::string path = scratch("quant.pgm");
  save_gray(img, path);
  GrayImage back = load_gray(path);
  CHECK(back.values() == std::vector<double>{3.0, 4.0, 0.0, 255.0});
  // Negative intensities cannot even be constructed, so export never sees
  // them.
  CHECK_THROWS_AS(GrayImage(1, 1, {-17.0}), Error);
}

TEST_CASE("rgb images round-trip through PPM and PNG") {
  std::mt19937_64 rng(102);
  RgbImage img(9, 5);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 9; ++x) {
      for (int c = 0; c < 3; ++c) {
        img.set(x, y, c, static_cast<double>(uniform_index(rng, 256)));
      }
    }
  }
  for (const char* ext : {".ppm", ".png"}) {
    const std::string path = scratch(std::string("rgb") + ext);
    save_rgb(img, path);
    RgbImage back = load_rgb(path);
    CHECK(back.data() == img.data());
  }
}

TEST_CASE("loading rgb from gray needs explicit promotion") {
  const std::string path = scratch("promote.pgm");
  save_gray(random_gray(4, 4, 103), path);
  CHECK_THROWS_AS(load_rgb(path), Error);
  RgbImage promoted = load_rgb(path, LoadRgbOptions{true});
  CHECK(promoted.at(1, 2, 0) == promoted.at(1, 2, 2));
}

TEST_CASE("loading gray from rgb applies luminance") {
  RgbImage img(1, 1);
  img.set(0, 0, 0, 200.0);
  img.set(0, 0, 1, 100.0);
  img.set(0, 0, 2, 50.0);
  const std::string path = scratch("lum.ppm");
  save_rgb(img, path);
  GrayImage g = load_gray(path);
  CHECK(g.at(0, 0) ==
        doctest::Approx(0.299 * 200 + 0.587 * 100 + 0.114 * 50).epsilon(1e-12));
}

TEST_CASE("PNM header parsing accepts comments and single whitespace") {
  // Comment lines inside the header, then exactly one byte after maxval.
  const std::string path = scratch("comment.pgm");
  write_bytes(path, "P5\n# a comment\n2 # trailing\n2\n255\n\x01\x02\x03\x04");
  GrayImage img = load_gray(path);
  CHECK(img.values() == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  // The first payload byte may equal whitespace; it must not be eaten.
  const std::string tricky = scratch("tricky.pgm");
  write_bytes(tricky, std::string("P5\n2 1\n255\n") + '\x20' + '\xff');
  GrayImage t = load_gray(tricky);
  CHECK(t.values() == std::vector<double>{32.0, 255.0});
}

TEST_CASE("malformed rasters report format errors") {
  struct Case {
    const char* name;
    std::string bytes;
  };
  const Case cases[] = {
      {"truncated.pgm", "P5\n4 4\n255\n\x01\x02"},
      {"maxval16.pgm", "P5\n2 1\n65535\n\x01\x02\x03\x04"},
      {"ascii.pgm", "P2\n2 1\n255\n1 2\n"},
      {"zerodim.pgm", std::string("P5\n0 2\n255\n")},
      {"junk.png", "not a png at all"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.name);
    const std::string path = scratch(c.name);
    write_bytes(path, c.bytes);
    try {
      load_gray(path);
      FAIL_CHECK("expected a format error for " << c.name);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::format);
    }
  }
}

TEST_CASE("missing files and unknown extensions") {
  try {
    load_gray(scratch("does_not_exist.pgm"));
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  GrayImage img = random_gray(2, 2, 104);
  CHECK_THROWS_AS(save_gray(img, scratch("image.bmp")), Error);
  CHECK_THROWS_AS(save_gray(img, scratch("image.ppm")), Error);
}

TEST_CASE("palette parsing covers gray and rgb forms") {
  Palette p = Palette::parse("0=0;255=1");
  CHECK(p.num_classes() == 2);
  CHECK(p.lookup(0, 0, 0) == 0);
  CHECK(p.lookup(255, 255, 255) == 1);
  CHECK(p.lookup(7, 7, 7) == -1);
  CHECK(p.representative(1) == std::array<std::uint8_t, 3>{255, 255, 255});

  Palette rgb = Palette::parse("0,0,0=0;0,0,255=1;255,0,0=2");
  CHECK(rgb.num_classes() == 3);
  CHECK(rgb.lookup(0, 0, 255) == 1);
  CHECK(rgb.lookup(255, 0, 0) == 2);

  // Several colors may share a label; the first one is the representative.
  Palette multi = Palette::parse("10=0;20=0;200=1");
  CHECK(multi.num_classes() == 2);
  CHECK(multi.lookup(20, 20, 20) == 0);
  CHECK(multi.representative(0) == std::array<std::uint8_t, 3>{10, 10, 10});
}

TEST_CASE("palette parse errors") {
  for (const char* text : {"", "0;1", "0=-1", "0=0;0=1", "300=0", "1,2=0"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(Palette::parse(text), Error);
  }
  // Labels may be sparse; the gap class simply has no representative color.
  Palette sparse = Palette::parse("0=0;255=2");
  CHECK(sparse.num_classes() == 3);
  CHECK_THROWS_AS(sparse.representative(1), Error);
}

TEST_CASE("masks round-trip through PGM and paletted PNG") {
  std::mt19937_64 rng(105);
  const int w = 21, h = 13;
  std::vector<std::int32_t> labels(static_cast<std::size_t>(w) * h);
  for (auto& l : labels) l = static_cast<std::int32_t>(uniform_index(rng, 3));
  LabelMask mask(w, h, 3, labels);

  Palette gray = Palette::parse("0=0;128=1;255=2");
  for (const char* ext : {".pgm", ".png"}) {
    const std::string path = scratch(std::string("mask") + ext);
    save_mask(mask, gray, path);
    LabelMask back = load_mask(path, gray);
    CHECK(back.labels() == mask.labels());
  }

  Palette chroma = Palette::parse("0,0,0=0;0,0,255=1;255,0,0=2");
  const std::string png = scratch("mask_rgb.png");
  save_mask(mask, chroma, png);
  LabelMask back = load_mask(png, chroma);
  CHECK(back.labels() == mask.labels());
  CHECK_THROWS_AS(save_mask(mask, chroma, scratch("mask_rgb.pgm")), Error);
}

TEST_CASE("mask loading rejects colors outside the palette") {
  GrayImage img(2, 1, {0.0, 9.0});
  const std::string path = scratch("offpalette.pgm");
  save_gray(img, path);
  try {
    load_mask(path, Palette::parse("0=0;255=1"));
    FAIL("expected a format error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::format);
  }
}
