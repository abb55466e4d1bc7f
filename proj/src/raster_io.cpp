#include "raster_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>

#include "error.hpp"
#include "text_num.hpp"

namespace bcseg {

namespace {

std::string lower_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// --- PNM (binary PGM/PPM, maxval 255) ---

int pnm_read_token(std::istream& in) {
  // Skips whitespace and '#' comments, then reads one decimal token.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF || !std::isdigit(c)) {
    fail(ErrorCode::format, "malformed PNM header");
  }
  long value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1000000) fail(ErrorCode::format, "PNM header value too large");
    c = in.get();
  }
  return static_cast<int>(value);
}

RasterImage read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6')) {
    fail(ErrorCode::format,
         "'" + path + "' is not a binary PGM/PPM (P5/P6) file");
  }
  RasterImage raster;
  raster.channels = magic[1] == '5' ? 1 : 3;
  raster.width = pnm_read_token(in);
  raster.height = pnm_read_token(in);
  const int maxval = pnm_read_token(in);
  if (raster.width < 1 || raster.height < 1) {
    fail(ErrorCode::format, "PNM with zero dimension");
  }
  if (maxval != 255) {
    fail(ErrorCode::format, "only maxval 255 PNM rasters are supported");
  }
  // The token reader already consumed the single whitespace after maxval.
  const std::size_t count = static_cast<std::size_t>(raster.width) *
                            raster.height * raster.channels;
  raster.data.resize(count);
  in.read(reinterpret_cast<char*>(raster.data.data()),
          static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) {
    fail(ErrorCode::format, "PNM pixel payload truncated in '" + path + "'");
  }
  return raster;
}

void write_pnm(const std::string& path, const RasterImage& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
  out << (raster.channels == 1 ? "P5" : "P6") << "\n"
      << raster.width << " " << raster.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.data.data()),
            static_cast<std::streamsize>(raster.data.size()));
  if (!out) fail(ErrorCode::io, "short write to '" + path + "'");
}

// --- PNG via libpng's simplified API ---

RasterImage read_png(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(ErrorCode::format, "cannot decode PNG '" + path + "': " + msg);
  }
  if (image.format & PNG_FORMAT_FLAG_ALPHA) {
    png_image_free(&image);
    fail(ErrorCode::format, "PNG '" + path + "' has an alpha channel");
  }
  RasterImage raster;
  raster.width = static_cast<int>(image.width);
  raster.height = static_cast<int>(image.height);
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  raster.channels = color ? 3 : 1;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  raster.data.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.data.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(ErrorCode::format, "cannot decode PNG '" + path + "': " + msg);
  }
  return raster;
}

void write_png(const std::string& path, const RasterImage& raster) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width);
  image.height = static_cast<png_uint_32>(raster.height);
  image.format = raster.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.c_str(), 0, raster.data.data(), 0,
                               nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(ErrorCode::io, "cannot write PNG '" + path + "': " + msg);
  }
}

std::uint8_t quantize(double v) {
  double r = std::nearbyint(v);
  if (r < 0.0) r = 0.0;
  if (r > 255.0) r = 255.0;
  return static_cast<std::uint8_t>(r);
}

}  // namespace

RasterImage read_raster(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    fail(ErrorCode::io, "no such file: '" + path + "'");
  }
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return read_pnm(path);
  // No recognized extension: sniff the magic bytes.
  std::ifstream in(path, std::ios::binary);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) {
    return read_pnm(path);
  }
  return read_png(path);
}

void write_raster(const std::string& path, const RasterImage& raster) {
  if (raster.width < 1 || raster.height < 1 ||
      (raster.channels != 1 && raster.channels != 3) ||
      raster.data.size() != static_cast<std::size_t>(raster.width) *
                                raster.height * raster.channels) {
    fail(ErrorCode::invalid_argument, "malformed raster buffer");
  }
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_png(path, raster);
  } else if (ext == ".pgm") {
    if (raster.channels != 1) {
      fail(ErrorCode::invalid_argument, ".pgm can only hold grayscale data");
    }
    write_pnm(path, raster);
  } else if (ext == ".ppm") {
    if (raster.channels != 3) {
      fail(ErrorCode::invalid_argument, ".ppm can only hold rgb data");
    }
    write_pnm(path, raster);
  } else {
    fail(ErrorCode::invalid_argument,
         "unsupported output extension on '" + path + "' (use .png/.pgm/.ppm)");
  }
}

Palette Palette::parse(const std::string& text) {
  std::vector<Entry> entries;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::format, "palette entry '" + item + "' lacks '='");
    }
    const std::string color_text = item.substr(0, eq);
    const long long label = parse_int(item.substr(eq + 1));
    if (label < 0 || label > 255) {
      fail(ErrorCode::format, "palette label out of range in '" + item + "'");
    }
    std::array<std::uint8_t, 3> color{};
    std::vector<long long> parts;
    std::size_t cpos = 0;
    while (cpos <= color_text.size()) {
      std::size_t comma = color_text.find(',', cpos);
      if (comma == std::string::npos) comma = color_text.size();
      parts.push_back(parse_int(color_text.substr(cpos, comma - cpos)));
      cpos = comma + 1;
      if (comma == color_text.size()) break;
    }
    if (parts.size() == 1) {
      parts = {parts[0], parts[0], parts[0]};
    }
    if (parts.size() != 3) {
      fail(ErrorCode::format,
           "palette color must be one gray level or r,g,b: '" + item + "'");
    }
    for (int c = 0; c < 3; ++c) {
      if (parts[c] < 0 || parts[c] > 255) {
        fail(ErrorCode::format, "palette color out of range in '" + item + "'");
      }
      color[c] = static_cast<std::uint8_t>(parts[c]);
    }
    entries.push_back(Entry{color, static_cast<std::int32_t>(label)});
  }
  return Palette(std::move(entries));
}

Palette::Palette(std::vector<Entry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) {
    fail(ErrorCode::invalid_argument, "palette has no entries");
  }
  std::int32_t max_label = 0;
  std::map<std::array<std::uint8_t, 3>, std::int32_t> seen;
  for (const Entry& e : entries_) {
    max_label = std::max(max_label, e.label);
    auto [it, inserted] = seen.emplace(e.color, e.label);
    if (!inserted) {
      fail(ErrorCode::invalid_argument, "palette maps one color twice");
    }
  }
  num_classes_ = max_label + 1;
}

std::int32_t Palette::lookup(std::uint8_t r, std::uint8_t g,
                             std::uint8_t b) const {
  for (const Entry& e : entries_) {
    if (e.color[0] == r && e.color[1] == g && e.color[2] == b) return e.label;
  }
  return -1;
}

std::array<std::uint8_t, 3> Palette::representative(std::int32_t label) const {
  for (const Entry& e : entries_) {
    if (e.label == label) return e.color;
  }
  fail(ErrorCode::invalid_argument,
       "palette has no color for class " + std::to_string(label));
}

RgbImage load_rgb(const std::string& path, const LoadRgbOptions& opts) {
  RasterImage raster = read_raster(path);
  std::vector<double> rgb(static_cast<std::size_t>(raster.width) *
                          raster.height * 3);
  if (raster.channels == 3) {
    for (std::size_t i = 0; i < raster.data.size(); ++i) {
      rgb[i] = raster.data[i];
    }
  } else if (opts.promote_gray) {
    for (std::size_t i = 0; i < raster.data.size(); ++i) {
      rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = raster.data[i];
    }
  } else {
    fail(ErrorCode::format,
         "'" + path + "' is grayscale; enable gray promotion to load it as rgb");
  }
  return RgbImage(raster.width, raster.height, std::move(rgb));
}

GrayImage load_gray(const std::string& path) {
  RasterImage raster = read_raster(path);
  if (raster.channels == 1) {
    std::vector<double> v(raster.data.begin(), raster.data.end());
    return GrayImage(raster.width, raster.height, std::move(v));
  }
  std::vector<double> rgb(raster.data.begin(), raster.data.end());
  return to_gray(RgbImage(raster.width, raster.height, std::move(rgb)));
}

void save_gray(const GrayImage& img, const std::string& path) {
  RasterImage raster;
  raster.width = img.width();
  raster.height = img.height();
  raster.channels = 1;
  raster.data.resize(img.pixels());
  for (std::size_t i = 0; i < raster.data.size(); ++i) {
    raster.data[i] = quantize(img.values()[i]);
  }
  write_raster(path, raster);
}

void save_rgb(const RgbImage& img, const std::string& path) {
  RasterImage raster;
  raster.width = img.width();
  raster.height = img.height();
  raster.channels = 3;
  raster.data.resize(img.pixels() * 3);
  for (std::size_t i = 0; i < raster.data.size(); ++i) {
    raster.data[i] = quantize(img.data()[i]);
  }
  write_raster(path, raster);
}

LabelMask load_mask(const std::string& path, const Palette& palette) {
  RasterImage raster = read_raster(path);
  const std::size_t n = static_cast<std::size_t>(raster.width) * raster.height;
  std::vector<std::int32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint8_t r, g, b;
    if (raster.channels == 1) {
      r = g = b = raster.data[i];
    } else {
      r = raster.data[3 * i];
      g = raster.data[3 * i + 1];
      b = raster.data[3 * i + 2];
    }
    const std::int32_t label = palette.lookup(r, g, b);
    if (label < 0) {
      fail(ErrorCode::format,
           "mask pixel value (" + std::to_string(r) + "," + std::to_string(g) +
               "," + std::to_string(b) + ") at index " + std::to_string(i) +
               " is not in the palette");
    }
    labels[i] = label;
  }
  return LabelMask(raster.width, raster.height, palette.num_classes(),
                   std::move(labels));
}

void save_mask(const LabelMask& mask, const Palette& palette,
               const std::string& path) {
  std::vector<std::array<std::uint8_t, 3>> colors(mask.num_classes());
  for (int k = 0; k < mask.num_classes(); ++k) {
    colors[k] = palette.representative(k);
  }
  const std::string ext = lower_extension(path);
  RasterImage raster;
  raster.width = mask.width();
  raster.height = mask.height();
  if (ext == ".pgm") {
    for (const auto& c : colors) {
      if (c[0] != c[1] || c[1] != c[2]) {
        fail(ErrorCode::invalid_argument,
             "palette has chromatic colors; write the mask as .png instead");
      }
    }
    raster.channels = 1;
    raster.data.resize(mask.pixels());
    for (std::size_t i = 0; i < raster.data.size(); ++i) {
      raster.data[i] = colors[mask.labels()[i]][0];
    }
  } else {
    raster.channels = 3;
    raster.data.resize(mask.pixels() * 3);
    for (std::size_t i = 0; i < mask.pixels(); ++i) {
      const auto& c = colors[mask.labels()[i]];
      raster.data[3 * i] = c[0];
      raster.data[3 * i + 1] = c[1];
      raster.data[3 * i + 2] = c[2];
    }
  }
  write_raster(path, raster);
}

}  // namespace bcseg
