#include "transforms.hpp"

#include <cmath>

#include "error.hpp"
#include "parallel.hpp"
#include "text_num.hpp"

namespace bcseg {

namespace {

void check_boxcox_params(const BoxCoxParams& p) {
  if (!std::isfinite(p.lambda) || !std::isfinite(p.shift)) {
    fail(ErrorCode::invalid_argument, "nonfinite transform parameter");
  }
  if (p.shift < 0.0) {
    fail(ErrorCode::invalid_argument,
         "shift must be >= 0, got " + format_double(p.shift));
  }
}

}  // namespace

double boxcox_value(double y, const BoxCoxParams& p) {
  const double shifted = y + p.shift;
  if (!(shifted > 0.0)) {
    fail(ErrorCode::domain, "value " + format_double(y) + " with shift " +
                                format_double(p.shift) +
                                " is outside the transform domain (y + c > 0)");
  }
  const double log_shifted = std::log(shifted);
  if (std::abs(p.lambda) < kBoxCoxLogBranchThreshold) return log_shifted;
  return std::expm1(p.lambda * log_shifted) / p.lambda;
}

double inverse_boxcox_value(double v, const BoxCoxParams& p) {
  if (std::abs(p.lambda) < kBoxCoxLogBranchThreshold) {
    return std::exp(v) - p.shift;
  }
  const double u = p.lambda * v;
  if (!(u > -1.0)) {
    fail(ErrorCode::domain, "value " + format_double(v) +
                                " has no Box-Cox preimage at lambda = " +
                                format_double(p.lambda));
  }
  return std::exp(std::log1p(u) / p.lambda) - p.shift;
}

IntensityVector boxcox(const IntensityVector& v, const BoxCoxParams& p,
                       int threads) {
  check_boxcox_params(p);
  if (!(v.min_value() + p.shift > 0.0)) {
    fail(ErrorCode::domain,
         "minimum value " + format_double(v.min_value()) + " with shift " +
             format_double(p.shift) + " violates y + c > 0");
  }
  std::vector<double> out(v.size());
  const std::vector<double>& in = v.values();
  parallel_for(v.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = boxcox_value(in[i], p);
  });
  for (double x : out) {
    if (!std::isfinite(x)) {
      fail(ErrorCode::numeric, "transform overflowed at lambda = " +
                                   format_double(p.lambda));
    }
  }
  return IntensityVector(std::move(out), v.width(), v.height());
}

IntensityVector inverse_boxcox(const IntensityVector& v, const BoxCoxParams& p,
                               int threads) {
  check_boxcox_params(p);
  if (std::abs(p.lambda) >= kBoxCoxLogBranchThreshold) {
    const double extreme = p.lambda > 0.0 ? v.min_value() : v.max_value();
    if (!(p.lambda * extreme > -1.0)) {
      fail(ErrorCode::domain, "input leaves the Box-Cox image at lambda = " +
                                  format_double(p.lambda));
    }
  }
  std::vector<double> out(v.size());
  const std::vector<double>& in = v.values();
  parallel_for(v.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      out[i] = inverse_boxcox_value(in[i], p);
    }
  });
  for (double x : out) {
    if (!std::isfinite(x)) {
      fail(ErrorCode::numeric, "inverse transform overflowed at lambda = " +
                                   format_double(p.lambda));
    }
  }
  return IntensityVector(std::move(out), v.width(), v.height());
}

GrayImage gamma_correct(const GrayImage& img, const GammaParams& p) {
  if (!(p.gain > 0.0) || !(p.gamma > 0.0)) {
    fail(ErrorCode::invalid_argument,
         "gamma correction needs gain > 0 and gamma > 0");
  }
  std::vector<double> out(img.pixels());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = p.gain * std::pow(img.values()[i], p.gamma);
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

IntensityVector stretch(const IntensityVector& v, const StretchRange& r) {
  if (!(r.g_max > r.g_min)) {
    fail(ErrorCode::invalid_argument, "stretch range needs g_max > g_min");
  }
  const double f_min = v.min_value();
  const double f_max = v.max_value();
  if (f_max == f_min) {
    fail(ErrorCode::degenerate,
         "constant input has no contrast to stretch");
  }
  const double span = f_max - f_min;
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    // lerp hits both endpoints exactly and is monotone in t.
    out[i] = std::lerp(r.g_min, r.g_max, (v.values()[i] - f_min) / span);
  }
  return IntensityVector(std::move(out), v.width(), v.height());
}

}  // namespace bcseg
