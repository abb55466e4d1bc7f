#include "image.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "error.hpp"

namespace bcseg {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    fail(ErrorCode::invalid_argument,
         "image dimensions must be at least 1x1, got " +
             std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

RgbImage::RgbImage(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  data_.assign(pixels() * 3, 0.0);
}

RgbImage::RgbImage(int width, int height, std::vector<double> interleaved_rgb)
    : width_(width), height_(height), data_(std::move(interleaved_rgb)) {
  check_dims(width, height);
  if (data_.size() != pixels() * 3) {
    fail(ErrorCode::invalid_argument, "rgb buffer size does not match shape");
  }
  for (double v : data_) {
    if (!std::isfinite(v) || v < 0.0 || v > 255.0) {
      fail(ErrorCode::invalid_argument,
           "rgb channel value outside [0, 255]: " + std::to_string(v));
    }
  }
}

GrayImage::GrayImage(int width, int height) : width_(width), height_(height) {
  check_dims(width, height);
  values_.assign(pixels(), 0.0);
}

GrayImage::GrayImage(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  check_dims(width, height);
  if (values_.size() != pixels()) {
    fail(ErrorCode::invalid_argument, "intensity buffer size does not match shape");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      fail(ErrorCode::invalid_argument,
           "gray intensity must be finite and >= 0, got " + std::to_string(v));
    }
  }
}

IntensityVector::IntensityVector(std::vector<double> values, int width,
                                 int height)
    : values_(std::move(values)), width_(width), height_(height) {
  check_dims(width, height);
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::invalid_argument,
         "vector length does not equal width * height");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : values_) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::invalid_argument, "intensity vector value is not finite");
    }
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  min_value_ = lo;
  max_value_ = hi;
}

LabelMask::LabelMask(int width, int height, int num_classes,
                     std::vector<std::int32_t> labels,
                     std::vector<std::string> class_names)
    : width_(width),
      height_(height),
      num_classes_(num_classes),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
  check_dims(width, height);
  if (num_classes_ < 1) {
    fail(ErrorCode::invalid_argument, "mask needs at least one class");
  }
  if (labels_.size() != pixels()) {
    fail(ErrorCode::invalid_argument, "label buffer size does not match shape");
  }
  for (std::int32_t l : labels_) {
    if (l < 0 || l >= num_classes_) {
      fail(ErrorCode::invalid_argument,
           "label " + std::to_string(l) + " outside [0, " +
               std::to_string(num_classes_) + ")");
    }
  }
  if (!class_names_.empty() &&
      class_names_.size() != static_cast<std::size_t>(num_classes_)) {
    fail(ErrorCode::invalid_argument,
         "class name list must have one entry per class");
  }
}

GrayImage to_gray(const RgbImage& img) {
  std::vector<double> out(img.pixels());
  const std::vector<double>& rgb = img.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

IntensityVector vectorize(const GrayImage& img) {
  return IntensityVector(img.values(), img.width(), img.height());
}

GrayImage unvectorize(const IntensityVector& vec) {
  return GrayImage(vec.width(), vec.height(), vec.values());
}

}  // namespace bcseg
