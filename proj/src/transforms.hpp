#pragma once

#include "image.hpp"

namespace bcseg {

struct BoxCoxParams {
  double lambda = 1.0;
  double shift = 1.0;  // c >= 0; every transformed value needs y + c > 0
};

struct StretchRange {
  double g_min = 0.0;
  double g_max = 255.0;  // must exceed g_min
};

struct GammaParams {
  double gain = 1.0;   // c > 0
  double gamma = 1.0;  // exponent > 0; gain = gamma = 1 is the identity
};

// Magnitudes of lambda below this use the log branch. The power branch loses
// all significance to cancellation well before this point.
inline constexpr double kBoxCoxLogBranchThreshold = 1e-8;

double boxcox_value(double y, const BoxCoxParams& p);
double inverse_boxcox_value(double v, const BoxCoxParams& p);

// ((y+c)^lambda - 1)/lambda elementwise, log(y+c) on the lambda ~ 0 branch.
// Strictly increasing in y, continuous in lambda across the branch switch.
IntensityVector boxcox(const IntensityVector& v, const BoxCoxParams& p,
                       int threads = 1);

// Exact algebraic inverse on its domain (lambda*v + 1 > 0 for lambda != 0).
IntensityVector inverse_boxcox(const IntensityVector& v, const BoxCoxParams& p,
                               int threads = 1);

GrayImage gamma_correct(const GrayImage& img, const GammaParams& p);

// Affine map sending the observed min to g_min and the observed max to g_max,
// both exactly. Constant input is a degenerate-contrast error.
IntensityVector stretch(const IntensityVector& v, const StretchRange& r);

}  // namespace bcseg
