#include "discriminant.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "error.hpp"
#include "parallel.hpp"

namespace bcseg {

namespace {

Eigen::MatrixXd ridged(const std::vector<double>& cov, int d, double ridge) {
  Eigen::MatrixXd m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) m(r, c) = cov[r * d + c];
  }
  for (int r = 0; r < d; ++r) m(r, r) += ridge;
  return m;
}

}  // namespace

void DiscriminantModel::finalize() {
  const int d = dim;
  inv_cov.clear();
  log_det.clear();
  for (std::size_t m = 0; m < covariances.size(); ++m) {
    Eigen::MatrixXd sigma = ridged(covariances[m], d, ridge[m]);
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
      fail(ErrorCode::degenerate,
           "covariance matrix is singular even after ridging");
    }
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
    std::vector<double> flat(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) flat[r * d + c] = inv(r, c);
    }
    inv_cov.push_back(std::move(flat));
    double ld = 0.0;
    for (int r = 0; r < d; ++r) ld += 2.0 * std::log(llt.matrixL()(r, r));
    log_det.push_back(ld);
  }
}

DiscriminantModel fit_discriminant(const FeatureMatrix& features,
                                   const std::vector<std::int32_t>& labels,
                                   DiscriminantKind kind,
                                   std::optional<double> ridge,
                                   int num_classes) {
  const std::size_t n = features.rows;
  const int d = static_cast<int>(features.cols);
  if (n == 0 || d == 0) {
    fail(ErrorCode::invalid_argument, "empty training set");
  }
  if (labels.size() != n) {
    fail(ErrorCode::invalid_argument, "label count does not match rows");
  }
  int k_count = num_classes;
  for (std::int32_t g : labels) {
    if (g < 0) fail(ErrorCode::invalid_argument, "negative class label");
    k_count = std::max(k_count, g + 1);
  }
  if (k_count < 2) {
    fail(ErrorCode::invalid_argument,
         "training data holds a single class; nothing to discriminate");
  }
  std::vector<std::size_t> counts(k_count, 0);
  for (std::int32_t g : labels) ++counts[g];
  for (int k = 0; k < k_count; ++k) {
    if (counts[k] < static_cast<std::size_t>(d) + 1) {
      fail(ErrorCode::invalid_argument,
           "class " + std::to_string(k) + " has " +
               std::to_string(counts[k]) + " samples; needs at least " +
               std::to_string(d + 1));
    }
  }

  DiscriminantModel model;
  model.kind = kind;
  model.num_classes = k_count;
  model.dim = d;
  model.priors.resize(k_count);
  model.means.assign(k_count, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = features.row(i);
    for (int j = 0; j < d; ++j) model.means[labels[i]][j] += x[j];
  }
  for (int k = 0; k < k_count; ++k) {
    model.priors[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
    for (int j = 0; j < d; ++j) {
      model.means[k][j] /= static_cast<double>(counts[k]);
    }
  }

  const std::size_t dd = static_cast<std::size_t>(d) * d;
  if (kind == DiscriminantKind::lda) {
    std::vector<double> pooled(dd, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = features.row(i);
      const std::vector<double>& mu = model.means[labels[i]];
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          pooled[r * d + c] += (x[r] - mu[r]) * (x[c] - mu[c]);
        }
      }
    }
    const double divisor = static_cast<double>(n) - k_count;
    for (double& v : pooled) v /= divisor;
    model.covariances.push_back(std::move(pooled));
  } else {
    model.covariances.assign(k_count, std::vector<double>(dd, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = features.row(i);
      const std::vector<double>& mu = model.means[labels[i]];
      std::vector<double>& cov = model.covariances[labels[i]];
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          cov[r * d + c] += (x[r] - mu[r]) * (x[c] - mu[c]);
        }
      }
    }
    for (int k = 0; k < k_count; ++k) {
      const double divisor = static_cast<double>(counts[k]) - 1.0;
      for (double& v : model.covariances[k]) v /= divisor;
    }
  }

  model.ridge.reserve(model.covariances.size());
  for (const std::vector<double>& cov : model.covariances) {
    if (ridge.has_value()) {
      if (*ridge < 0.0) {
        fail(ErrorCode::invalid_argument, "ridge must be >= 0");
      }
      model.ridge.push_back(*ridge);
    } else {
      double trace = 0.0;
      for (int r = 0; r < d; ++r) trace += cov[r * d + r];
      model.ridge.push_back(1e-6 * trace / d);
    }
  }
  model.finalize();
  return model;
}

std::vector<double> discriminant_scores(const DiscriminantModel& model,
                                        const double* x) {
  const int d = model.dim;
  std::vector<double> scores(model.num_classes);
  if (model.kind == DiscriminantKind::lda) {
    const std::vector<double>& inv = model.inv_cov[0];
    for (int k = 0; k < model.num_classes; ++k) {
      const std::vector<double>& mu = model.means[k];
      double xw = 0.0;
      double mw = 0.0;
      for (int r = 0; r < d; ++r) {
        double inv_mu_r = 0.0;
        for (int c = 0; c < d; ++c) inv_mu_r += inv[r * d + c] * mu[c];
        xw += x[r] * inv_mu_r;
        mw += mu[r] * inv_mu_r;
      }
      scores[k] = xw - 0.5 * mw + std::log(model.priors[k]);
    }
  } else {
    for (int k = 0; k < model.num_classes; ++k) {
      const std::vector<double>& inv = model.inv_cov[k];
      const std::vector<double>& mu = model.means[k];
      double qf = 0.0;
      for (int r = 0; r < d; ++r) {
        double row = 0.0;
        for (int c = 0; c < d; ++c) row += inv[r * d + c] * (x[c] - mu[c]);
        qf += (x[r] - mu[r]) * row;
      }
      scores[k] = -0.5 * model.log_det[k] - 0.5 * qf +
                  std::log(model.priors[k]);
    }
  }
  return scores;
}

std::vector<std::int32_t> predict_discriminant(const DiscriminantModel& model,
                                               const FeatureMatrix& features,
                                               int threads) {
  if (static_cast<int>(features.cols) != model.dim) {
    fail(ErrorCode::invalid_argument,
         "feature dimension " + std::to_string(features.cols) +
             " does not match the model's " + std::to_string(model.dim));
  }
  if (model.inv_cov.empty()) {
    fail(ErrorCode::invalid_argument, "model was not finalized");
  }
  std::vector<std::int32_t> out(features.rows);
  parallel_for(features.rows, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const std::vector<double> scores =
          discriminant_scores(model, features.row(i));
      int best = 0;
      for (int k = 1; k < model.num_classes; ++k) {
        if (scores[k] > scores[best]) best = k;
      }
      out[i] = best;
    }
  });
  return out;
}

}  // namespace bcseg
