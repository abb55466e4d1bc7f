#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bcseg {

// Raster data model. Intensities are carried as doubles from decode onward;
// integer quantization happens only at export. All pixel storage is row-major.

class RgbImage {
 public:
  RgbImage(int width, int height);
  RgbImage(int width, int height, std::vector<double> interleaved_rgb);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixels() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  double at(int x, int y, int channel) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
  }
  void set(int x, int y, int channel, double value) {
    data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel] = value;
  }

  const std::vector<double>& data() const { return data_; }

 private:
  int width_;
  int height_;
  std::vector<double> data_;  // interleaved r,g,b; each in [0, 255]
};

class GrayImage {
 public:
  GrayImage(int width, int height);
  GrayImage(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixels() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  double at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, double value) {
    values_[static_cast<std::size_t>(y) * width_ + x] = value;
  }

  const std::vector<double>& values() const { return values_; }

 private:
  int width_;
  int height_;
  std::vector<double> values_;  // finite, >= 0
};

// Flattened pixel vector. Keeps the origin shape so unvectorize is an exact
// inverse, and the minimum value so positivity preconditions are O(1).
class IntensityVector {
 public:
  IntensityVector(std::vector<double> values, int width, int height);

  std::size_t size() const { return values_.size(); }
  int width() const { return width_; }
  int height() const { return height_; }
  double min_value() const { return min_value_; }
  double max_value() const { return max_value_; }

  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;  // finite; may be negative after a transform
  int width_;
  int height_;
  double min_value_;
  double max_value_;
};

class LabelMask {
 public:
  LabelMask(int width, int height, int num_classes,
            std::vector<std::int32_t> labels,
            std::vector<std::string> class_names = {});

  int width() const { return width_; }
  int height() const { return height_; }
  int num_classes() const { return num_classes_; }
  std::size_t pixels() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  std::int32_t at(int x, int y) const {
    return labels_[static_cast<std::size_t>(y) * width_ + x];
  }

  const std::vector<std::int32_t>& labels() const { return labels_; }
  const std::vector<std::string>& class_names() const { return class_names_; }

 private:
  int width_;
  int height_;
  int num_classes_;
  std::vector<std::int32_t> labels_;  // each in [0, num_classes)
  std::vector<std::string> class_names_;  // empty or num_classes entries
};

// Luminance conversion, f' = 0.299 R + 0.587 G + 0.114 B, kept in floating
// point (no rounding).
GrayImage to_gray(const RgbImage& img);

// Row-major flattening and its exact inverse.
IntensityVector vectorize(const GrayImage& img);
GrayImage unvectorize(const IntensityVector& vec);

}  // namespace bcseg
