#include "pipeline.hpp"

#include "error.hpp"

namespace bcseg {

PrefilterResult prefilter_pipeline(const GrayImage& img,
                                   const PrefilterOptions& opts) {
  if (opts.range.g_min < 0.0) {
    fail(ErrorCode::invalid_argument,
         "stretch target must start at g_min >= 0 for image output");
  }
  IntensityVector v = vectorize(img);
  BoxCoxParams params{0.0, opts.shift};
  PrefilterResult out{GrayImage(1, 1), params, false, std::nullopt};
  if (opts.lambda.has_value()) {
    params.lambda = *opts.lambda;
  } else {
    LambdaFitOptions fit = opts.fit;
    fit.threads = opts.threads;
    LambdaEstimate est = fit_lambda(v, opts.shift, fit);
    params.lambda = est.lambda_hat;
    out.lambda_estimated = true;
    out.estimate = std::move(est);
  }
  IntensityVector transformed = boxcox(v, params, opts.threads);
  IntensityVector stretched = stretch(transformed, opts.range);
  out.image = unvectorize(stretched);
  out.params = params;
  return out;
}

PrefilterResult prefilter_pipeline(const RgbImage& img,
                                   const PrefilterOptions& opts) {
  return prefilter_pipeline(to_gray(img), opts);
}

}  // namespace bcseg
