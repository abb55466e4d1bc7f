#include "lambda_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "text_num.hpp"
#include "transforms.hpp"

namespace bcseg {

namespace {

ThetaSigma intercept_only_fit(const std::vector<double>& y) {
  const double n = static_cast<double>(y.size());
  double sum = 0.0;
  for (double x : y) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : y) ss += (x - mean) * (x - mean);
  ThetaSigma out;
  out.theta = {mean};
  out.sigma2 = ss / n;
  out.degenerate = !(out.sigma2 > 0.0);
  return out;
}

void check_design(const LinearGaussianSpec& spec, std::size_t n) {
  const auto rows = static_cast<std::size_t>(spec.design.rows());
  const auto cols = static_cast<std::size_t>(spec.design.cols());
  if (rows != n) {
    fail(ErrorCode::invalid_argument,
         "design has " + std::to_string(rows) + " rows for " +
             std::to_string(n) + " observations");
  }
  if (cols == 0 || cols + 1 > n) {
    fail(ErrorCode::invalid_argument,
         "design needs 1 <= p <= n - 1 columns");
  }
}

// Shared state for repeated likelihood evaluations at different lambdas:
// the shifted-log sum and the design factorization do not depend on lambda.
class ProfileEvaluator {
 public:
  ProfileEvaluator(std::vector<double> y, double shift,
                   const LinearGaussianSpec& spec)
      : y_(std::move(y)), shift_(shift), spec_(spec) {
    if (!spec_.intercept_only()) {
      check_design(spec_, y_.size());
      qr_.emplace(spec_.design);
      if (qr_->rank() < spec_.design.cols()) {
        fail(ErrorCode::invalid_argument, "design matrix is rank deficient");
      }
    }
    sum_log_shifted_ = 0.0;
    for (double x : y_) sum_log_shifted_ += std::log(x + shift_);
  }

  std::size_t size() const { return y_.size(); }

  ThetaSigma theta_sigma(double lambda) const {
    std::vector<double> t(y_.size());
    const BoxCoxParams p{lambda, shift_};
    for (std::size_t i = 0; i < y_.size(); ++i) {
      t[i] = boxcox_value(y_[i], p);
      if (!std::isfinite(t[i])) {
        fail(ErrorCode::numeric,
             "transform overflowed at lambda = " + format_double(lambda));
      }
    }
    if (spec_.intercept_only()) return intercept_only_fit(t);
    Eigen::Map<const Eigen::VectorXd> tv(t.data(),
                                         static_cast<Eigen::Index>(t.size()));
    Eigen::VectorXd theta = qr_->solve(tv);
    const double rss = (tv - spec_.design * theta).squaredNorm();
    ThetaSigma out;
    out.theta.assign(theta.data(), theta.data() + theta.size());
    out.sigma2 = rss / static_cast<double>(t.size());
    out.degenerate = !(out.sigma2 > 0.0);
    return out;
  }

  double loglik(double lambda) const {
    const ThetaSigma fit = theta_sigma(lambda);
    if (fit.degenerate) {
      fail(ErrorCode::degenerate,
           "zero residual variance at lambda = " + format_double(lambda));
    }
    const double n = static_cast<double>(y_.size());
    return -0.5 * n * std::log(fit.sigma2) +
           (lambda - 1.0) * sum_log_shifted_;
  }

 private:
  std::vector<double> y_;
  double shift_;
  LinearGaussianSpec spec_;
  double sum_log_shifted_ = 0.0;
  std::optional<Eigen::ColPivHouseholderQR<Eigen::MatrixXd>> qr_;
};

void check_domain(const IntensityVector& v, double shift) {
  if (!std::isfinite(shift) || shift < 0.0) {
    fail(ErrorCode::invalid_argument,
         "shift must be a finite value >= 0");
  }
  if (!(v.min_value() + shift > 0.0)) {
    fail(ErrorCode::domain,
         "minimum value " + format_double(v.min_value()) + " with shift " +
             format_double(shift) + " violates y + c > 0");
  }
}

}  // namespace

ThetaSigma mle_theta_sigma(const std::vector<double>& y,
                           const LinearGaussianSpec& spec) {
  if (y.empty()) fail(ErrorCode::invalid_argument, "empty sample");
  if (spec.intercept_only()) return intercept_only_fit(y);
  check_design(spec, y.size());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(spec.design);
  if (qr.rank() < spec.design.cols()) {
    fail(ErrorCode::invalid_argument, "design matrix is rank deficient");
  }
  Eigen::Map<const Eigen::VectorXd> yv(y.data(),
                                       static_cast<Eigen::Index>(y.size()));
  Eigen::VectorXd theta = qr.solve(yv);
  ThetaSigma out;
  out.theta.assign(theta.data(), theta.data() + theta.size());
  out.sigma2 =
      (yv - spec.design * theta).squaredNorm() / static_cast<double>(y.size());
  out.degenerate = !(out.sigma2 > 0.0);
  return out;
}

ThetaSigma mle_theta_sigma(const IntensityVector& v,
                           const LinearGaussianSpec& spec) {
  return mle_theta_sigma(v.values(), spec);
}

double profile_loglik(const IntensityVector& v, double lambda, double shift,
                      const LinearGaussianSpec& spec) {
  check_domain(v, shift);
  ProfileEvaluator eval(v.values(), shift, spec);
  return eval.loglik(lambda);
}

LambdaEstimate fit_lambda(const IntensityVector& v, double shift,
                          const LambdaFitOptions& opts,
                          const LinearGaussianSpec& spec) {
  if (!(opts.bracket_lo < opts.bracket_hi)) {
    fail(ErrorCode::invalid_argument, "lambda bracket needs lo < hi");
  }
  if (opts.grid_points < 3) {
    fail(ErrorCode::invalid_argument, "grid needs at least 3 points");
  }
  if (!(opts.tol > 0.0)) {
    fail(ErrorCode::invalid_argument, "refinement tolerance must be positive");
  }
  check_domain(v, shift);
  if (v.min_value() == v.max_value()) {
    fail(ErrorCode::degenerate, "constant data admits no transform fit");
  }

  // Work on the full data or a seeded uniform subsample above the cap.
  std::vector<double> data;
  LinearGaussianSpec used_spec = spec;
  if (opts.subsample_cap > 0 && v.size() > opts.subsample_cap) {
    std::mt19937_64 rng(opts.subsample_seed);
    std::vector<std::size_t> idx =
        sample_indices(rng, v.size(), opts.subsample_cap);
    std::sort(idx.begin(), idx.end());
    data.reserve(idx.size());
    for (std::size_t i : idx) data.push_back(v.values()[i]);
    if (!spec.intercept_only()) {
      check_design(spec, v.size());
      Eigen::MatrixXd sub(static_cast<Eigen::Index>(idx.size()),
                          spec.design.cols());
      for (std::size_t r = 0; r < idx.size(); ++r) {
        sub.row(static_cast<Eigen::Index>(r)) =
            spec.design.row(static_cast<Eigen::Index>(idx[r]));
      }
      used_spec.design = std::move(sub);
    }
  } else {
    data = v.values();
  }

  ProfileEvaluator eval(std::move(data), shift, used_spec);

  const int grid_n = opts.grid_points;
  const double step = (opts.bracket_hi - opts.bracket_lo) / (grid_n - 1);
  std::vector<double> grid_lambda(grid_n);
  for (int j = 0; j < grid_n; ++j) {
    grid_lambda[j] = j == grid_n - 1 ? opts.bracket_hi
                                     : opts.bracket_lo + j * step;
  }
  std::vector<double> grid_ll(grid_n);
  parallel_for(static_cast<std::size_t>(grid_n), opts.threads,
               [&](std::size_t lo, std::size_t hi) {
                 for (std::size_t j = lo; j < hi; ++j) {
                   grid_ll[j] = eval.loglik(grid_lambda[j]);
                 }
               });

  // First strict max in ascending lambda order: ties break low.
  int best = 0;
  for (int j = 1; j < grid_n; ++j) {
    if (grid_ll[j] > grid_ll[best]) best = j;
  }
  if (best == 0 || best == grid_n - 1) {
    fail(ErrorCode::numeric,
         "likelihood maximum sits on the bracket edge at lambda = " +
             format_double(grid_lambda[best]) + "; widen the bracket");
  }

  double best_lambda = grid_lambda[best];
  double best_ll = grid_ll[best];
  auto consider = [&](double lambda, double ll) {
    if (ll > best_ll || (ll == best_ll && lambda < best_lambda)) {
      best_lambda = lambda;
      best_ll = ll;
    }
  };

  // Golden-section narrowing of [grid[best-1], grid[best+1]]. Every evaluated
  // point is a candidate, so the result can only improve on the grid max.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = grid_lambda[best - 1];
  double b = grid_lambda[best + 1];
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval.loglik(x1);
  double f2 = eval.loglik(x2);
  consider(x1, f1);
  consider(x2, f2);
  while (b - a > opts.tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval.loglik(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval.loglik(x2);
      consider(x2, f2);
    }
  }

  LambdaEstimate out;
  out.lambda_hat = best_lambda;
  out.loglik_at_max = best_ll;
  const ThetaSigma at_best = eval.theta_sigma(best_lambda);
  out.theta_hat = at_best.theta;
  out.sigma2_hat = at_best.sigma2;
  out.grid_evaluations.reserve(grid_n);
  for (int j = 0; j < grid_n; ++j) {
    out.grid_evaluations.emplace_back(grid_lambda[j], grid_ll[j]);
  }
  out.n_used = eval.size();
  return out;
}

std::string grid_trace_csv(const LambdaEstimate& estimate) {
  std::string csv = "lambda,loglik\n";
  for (const auto& [lambda, ll] : estimate.grid_evaluations) {
    csv += format_double(lambda);
    csv += ',';
    csv += format_double(ll);
    csv += '\n';
  }
  return csv;
}

}  // namespace bcseg
