#include "features.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "parallel.hpp"

namespace bcseg {

const char* featurizer_mode_name(FeaturizerMode mode) {
  return mode == FeaturizerMode::intensity_only ? "intensity"
                                                : "intensity+window-stats";
}

FeaturizerMode parse_featurizer_mode(const std::string& name) {
  if (name == "intensity") return FeaturizerMode::intensity_only;
  if (name == "intensity+window-stats") {
    return FeaturizerMode::intensity_window_stats;
  }
  fail(ErrorCode::invalid_argument,
       "unknown featurizer '" + name +
           "' (intensity, intensity+window-stats)");
}

FeatureMatrix featurize(const GrayImage& img, const FeaturizerSpec& spec,
                        int threads) {
  if (spec.mode == FeaturizerMode::intensity_only) {
    FeatureMatrix out(img.pixels(), 1);
    out.data = img.values();
    return out;
  }
  if (spec.window < 3 || spec.window % 2 == 0) {
    fail(ErrorCode::invalid_argument,
         "window must be an odd integer >= 3, got " +
             std::to_string(spec.window));
  }
  const int half = spec.window / 2;
  const int w = img.width();
  const int h = img.height();
  const double count = static_cast<double>(spec.window) * spec.window;
  FeatureMatrix out(img.pixels(), 3);
  parallel_for(static_cast<std::size_t>(h), threads,
               [&](std::size_t y_lo, std::size_t y_hi) {
    for (std::size_t y = y_lo; y < y_hi; ++y) {
      for (int x = 0; x < w; ++x) {
        double sum = 0.0;
        for (int dy = -half; dy <= half; ++dy) {
          const int yy = std::clamp(static_cast<int>(y) + dy, 0, h - 1);
          for (int dx = -half; dx <= half; ++dx) {
            const int xx = std::clamp(x + dx, 0, w - 1);
            sum += img.at(xx, yy);
          }
        }
        const double mean = sum / count;
        double ss = 0.0;
        for (int dy = -half; dy <= half; ++dy) {
          const int yy = std::clamp(static_cast<int>(y) + dy, 0, h - 1);
          for (int dx = -half; dx <= half; ++dx) {
            const int xx = std::clamp(x + dx, 0, w - 1);
            const double dev = img.at(xx, yy) - mean;
            ss += dev * dev;
          }
        }
        const std::size_t i = y * w + x;
        out.at(i, 0) = img.at(x, static_cast<int>(y));
        out.at(i, 1) = mean;
        out.at(i, 2) = std::sqrt(ss / count);
      }
    }
  });
  return out;
}

}  // namespace bcseg
