#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "image.hpp"

namespace bcseg {

// Decoded 8-bit raster, 1 (gray) or 3 (rgb) interleaved channels.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

// Readers accept PNG (8-bit gray, rgb, or palette) and binary PGM/PPM with
// maxval 255. Writers pick the codec from the file extension
// (.png/.pgm/.ppm). Alpha channels and 16-bit depths are rejected.
RasterImage read_raster(const std::string& path);
void write_raster(const std::string& path, const RasterImage& raster);

// Mapping from raw pixel colors to class labels. Gray rasters look up
// (v, v, v). Entries keep their given order; the first entry of each class is
// its representative color on export.
class Palette {
 public:
  struct Entry {
    std::array<std::uint8_t, 3> color;
    std::int32_t label;
  };

  // Text form: semicolon-separated `value=label` entries where value is
  // either a single gray level or `r,g,b`. Example: "0=0;255=1" or
  // "0,0,0=0;0,0,255=1;255,0,0=2".
  static Palette parse(const std::string& text);

  explicit Palette(std::vector<Entry> entries);

  int num_classes() const { return num_classes_; }
  const std::vector<Entry>& entries() const { return entries_; }

  // -1 when the color is not mapped.
  std::int32_t lookup(std::uint8_t r, std::uint8_t g, std::uint8_t b) const;

  // First entry mapped to `label`.
  std::array<std::uint8_t, 3> representative(std::int32_t label) const;

 private:
  std::vector<Entry> entries_;
  int num_classes_;
};

struct LoadRgbOptions {
  // Grayscale rasters are either promoted to a 3-channel copy or rejected.
  bool promote_gray = false;
};

RgbImage load_rgb(const std::string& path, const LoadRgbOptions& opts = {});

// Grayscale ingestion: gray rasters load exactly; rgb rasters go through
// to_gray.
GrayImage load_gray(const std::string& path);

// Round-to-nearest, clamped to [0, 255].
void save_gray(const GrayImage& img, const std::string& path);
void save_rgb(const RgbImage& img, const std::string& path);

LabelMask load_mask(const std::string& path, const Palette& palette);

// .pgm output requires every representative color to be achromatic.
void save_mask(const LabelMask& mask, const Palette& palette,
               const std::string& path);

}  // namespace bcseg
