#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "image.hpp"

namespace bcseg {

// Row-major n x d matrix of per-pixel feature vectors.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t n, std::size_t d)
      : rows(n), cols(d), data(n * d, 0.0) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

enum class FeaturizerMode {
  intensity_only,         // d = 1
  intensity_window_stats  // d = 3: intensity, local mean, local stddev
};

const char* featurizer_mode_name(FeaturizerMode mode);
FeaturizerMode parse_featurizer_mode(const std::string& name);

struct FeaturizerSpec {
  FeaturizerMode mode = FeaturizerMode::intensity_only;
  int window = 3;  // odd, >= 3; ignored in intensity-only mode

  int dimension() const {
    return mode == FeaturizerMode::intensity_only ? 1 : 3;
  }
};

// Row i holds the features of pixel i in row-major pixel order. Window stats
// use replicate padding at the borders and the population standard deviation.
FeatureMatrix featurize(const GrayImage& img, const FeaturizerSpec& spec,
                        int threads = 1);

}  // namespace bcseg
