#pragma once

#include <optional>

#include "image.hpp"
#include "lambda_fit.hpp"
#include "transforms.hpp"

namespace bcseg {

struct PrefilterOptions {
  std::optional<double> lambda;  // absent: fitted by maximum likelihood
  double shift = 1.0;
  StretchRange range;  // g_min must be >= 0: the output is a GrayImage
  LambdaFitOptions fit;
  int threads = 1;
};

struct PrefilterResult {
  GrayImage image;
  BoxCoxParams params;  // the lambda actually applied
  bool lambda_estimated = false;
  std::optional<LambdaEstimate> estimate;  // present when fitted
};

// Grayscale conversion, shift, Box-Cox, then stretch onto the target range.
// Output intensities lie in [g_min, g_max] with both endpoints attained.
PrefilterResult prefilter_pipeline(const GrayImage& img,
                                   const PrefilterOptions& opts);
PrefilterResult prefilter_pipeline(const RgbImage& img,
                                   const PrefilterOptions& opts);

}  // namespace bcseg
