#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <utility>
#include <vector>

#include "image.hpp"

namespace bcseg {

// Linear Gaussian model for the transformed intensities. An empty design
// stands for the intercept-only column of ones, where the estimators collapse
// to the sample mean and biased sample variance.
struct LinearGaussianSpec {
  Eigen::MatrixXd design;  // n x p, full rank, when explicit

  bool intercept_only() const { return design.size() == 0; }
};

struct ThetaSigma {
  std::vector<double> theta;
  double sigma2 = 0.0;
  bool degenerate = false;  // zero residual variance
};

// theta = (A'A)^-1 A'y, sigma2 = ||y - A theta||^2 / n. A constant response
// is reported through the degenerate flag, not an exception, so callers that
// only need theta still get it.
ThetaSigma mle_theta_sigma(const std::vector<double>& y,
                           const LinearGaussianSpec& spec = {});
ThetaSigma mle_theta_sigma(const IntensityVector& v,
                           const LinearGaussianSpec& spec = {});

// Profile log-likelihood of lambda:
//   l_p(lambda) = -(n/2) log(sigma2(lambda)) + (lambda - 1) sum log(y_i + c)
// with sigma2(lambda) the residual variance of the transformed data.
double profile_loglik(const IntensityVector& v, double lambda, double shift,
                      const LinearGaussianSpec& spec = {});

struct LambdaFitOptions {
  double bracket_lo = -3.0;
  double bracket_hi = 5.0;
  int grid_points = 61;
  double tol = 1e-4;  // final bracket width of the refinement
  // Data sets above the cap are reduced to a seeded uniform subsample before
  // fitting; 0 disables subsampling.
  std::size_t subsample_cap = std::size_t{1} << 20;
  std::uint64_t subsample_seed = 20260814;
  int threads = 1;
};

struct LambdaEstimate {
  double lambda_hat = 0.0;
  std::vector<double> theta_hat;
  double sigma2_hat = 0.0;
  double loglik_at_max = 0.0;
  // The coarse equispaced scan, in grid order. loglik_at_max never falls
  // below any recorded value.
  std::vector<std::pair<double, double>> grid_evaluations;
  std::size_t n_used = 0;  // pixels the fit actually saw
};

// Coarse grid scan over the bracket, then golden-section refinement around
// the best interior point. A maximum on the bracket edge is an error (the
// bracket is too narrow), as is constant data. Deterministic for any thread
// count: ties on the grid go to the lowest lambda.
LambdaEstimate fit_lambda(const IntensityVector& v, double shift,
                          const LambdaFitOptions& opts = {},
                          const LinearGaussianSpec& spec = {});

// Two-column CSV (lambda,loglik) of the grid trace.
std::string grid_trace_csv(const LambdaEstimate& estimate);

}  // namespace bcseg
