#include "svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace bcseg {

const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::linear: return "linear";
    case KernelKind::polynomial: return "polynomial";
    case KernelKind::rbf: return "rbf";
    case KernelKind::sigmoid: return "sigmoid";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "polynomial") return KernelKind::polynomial;
  if (name == "rbf") return KernelKind::rbf;
  if (name == "sigmoid") return KernelKind::sigmoid;
  fail(ErrorCode::invalid_argument,
       "unknown kernel '" + name + "' (linear, polynomial, rbf, sigmoid)");
}

const char* svm_mode_name(SvmMode mode) {
  return mode == SvmMode::linear_primal ? "linear-primal" : "kernel-dual";
}

SvmMode parse_svm_mode(const std::string& name) {
  if (name == "linear-primal") return SvmMode::linear_primal;
  if (name == "kernel-dual") return SvmMode::kernel_dual;
  fail(ErrorCode::invalid_argument,
       "unknown mode '" + name + "' (linear-primal, kernel-dual)");
}

namespace {

constexpr double kTau = 1e-12;

void check_kernel(const KernelParams& p) {
  if (p.kind == KernelKind::linear) return;
  if (!(p.gamma > 0.0)) {
    fail(ErrorCode::invalid_argument, "kernel needs gamma > 0");
  }
  if (p.kind == KernelKind::polynomial) {
    if (p.degree < 1) {
      fail(ErrorCode::invalid_argument, "polynomial degree must be >= 1");
    }
    if (p.coef0 < 0.0) {
      fail(ErrorCode::invalid_argument,
           "polynomial offset r must be >= 0");
    }
  }
}

// Fixed-epoch stochastic subgradient descent on the hinge loss with an
// unregularized bias (regularizer 1/(C n)). The step-size clock starts at
// 1/reg so eta opens near 1: an unshifted 1/(reg t) schedule opens with
// steps of size C n that swamp the bias, and the 1/t decay cannot walk that
// displacement back within any practical epoch budget.
BinarySvm fit_linear_primal(const FeatureMatrix& features,
                            const std::vector<int>& y,
                            const SvmConfig& config) {
  const std::size_t n = features.rows;
  const std::size_t d = features.cols;
  const double reg = 1.0 / (config.cost * static_cast<double>(n));
  BinarySvm m;
  m.mode = SvmMode::linear_primal;
  m.w.assign(d, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(config.seed);
  double t = 1.0 / reg;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_values(rng, order);
    for (std::size_t i : order) {
      t += 1.0;
      const double eta = 1.0 / (reg * t);
      const double* x = features.row(i);
      double margin = m.bias;
      for (std::size_t j = 0; j < d; ++j) margin += m.w[j] * x[j];
      margin *= y[i];
      const double keep = 1.0 - eta * reg;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < d; ++j) {
          m.w[j] = keep * m.w[j] + eta * y[i] * x[j];
        }
        m.bias += eta * y[i];
      } else {
        for (std::size_t j = 0; j < d; ++j) m.w[j] *= keep;
      }
    }
  }
  m.iterations = static_cast<long>(config.epochs) * static_cast<long>(n);
  return m;
}

// Working-set coordinate ascent on the dual (the standard maximal-violating-
// pair scheme with a second-order j choice). The full kernel matrix is
// precomputed, which the dual_cap keeps affordable.
BinarySvm fit_kernel_dual(const FeatureMatrix& features,
                          const std::vector<int>& y, const SvmConfig& config) {
  check_kernel(config.kernel);
  const std::size_t n = features.rows;
  const std::size_t d = features.cols;
  const double c_box = config.cost;

  std::vector<double> kmat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double k =
          kernel_eval(config.kernel, features.row(i), features.row(j), d);
      kmat[i * n + j] = k;
      kmat[j * n + i] = k;
    }
  }
  auto q = [&](std::size_t i, std::size_t j) {
    return y[i] * y[j] * kmat[i * n + j];
  };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  auto upper = [&](std::size_t i) { return alpha[i] >= c_box; };
  auto lower = [&](std::size_t i) { return alpha[i] <= 0.0; };

  const long max_iter = std::max<long>(100000, 100 * static_cast<long>(n));
  long iter = 0;
  bool converged = false;
  constexpr double inf = std::numeric_limits<double>::infinity();
  while (iter < max_iter) {
    // i maximizes -y_i grad_i over I_up.
    double gmax = -inf;
    double gmax2 = -inf;
    std::ptrdiff_t i = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == +1 ? !upper(t) : !lower(t)) {
        const double v = y[t] == +1 ? -grad[t] : grad[t];
        if (v >= gmax) {
          gmax = v;
          i = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    // j minimizes the second-order objective decrease over I_low.
    std::ptrdiff_t j = -1;
    double obj_min = inf;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == +1 ? !lower(t) : !upper(t)) {
        const double neg_yg = y[t] == +1 ? grad[t] : -grad[t];
        gmax2 = std::max(gmax2, neg_yg);
        const double grad_diff = gmax + neg_yg;
        if (grad_diff > 0.0) {
          double quad = kmat[i * n + i] + kmat[t * n + t] -
                        2.0 * y[i] * y[t] * kmat[i * n + t];
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= obj_min) {
            obj_min = obj;
            j = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
    }
    if (gmax + gmax2 < config.dual_tol || j == -1) {
      converged = true;
      break;
    }
    ++iter;

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y[i] != y[j]) {
      double quad = kmat[i * n + i] + kmat[j * n + j] + 2.0 * kmat[i * n + j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0 && alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = diff;
      } else if (diff <= 0.0 && alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0 && alpha[i] > c_box) {
        alpha[i] = c_box;
        alpha[j] = c_box - diff;
      } else if (diff <= 0.0 && alpha[j] > c_box) {
        alpha[j] = c_box;
        alpha[i] = c_box + diff;
      }
    } else {
      double quad = kmat[i * n + i] + kmat[j * n + j] - 2.0 * kmat[i * n + j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c_box && alpha[i] > c_box) {
        alpha[i] = c_box;
        alpha[j] = sum - c_box;
      } else if (sum <= c_box && alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c_box && alpha[j] > c_box) {
        alpha[j] = c_box;
        alpha[i] = sum - c_box;
      } else if (sum <= c_box && alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += q(t, i) * dai + q(t, j) * daj;
    }
  }

  // Bias from the KKT conditions: average over free vectors, else the
  // midpoint of the bound interval.
  double ub = inf, lb = -inf, sum_free = 0.0;
  long nr_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (upper(t)) {
      if (y[t] == -1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (lower(t)) {
      if (y[t] == +1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      ++nr_free;
      sum_free += yg;
    }
  }
  const double rho = nr_free > 0 ? sum_free / nr_free : (ub + lb) / 2.0;

  BinarySvm m;
  m.mode = SvmMode::kernel_dual;
  m.kernel = config.kernel;
  m.rho = rho;
  m.converged = converged;
  m.iterations = iter;
  std::size_t n_sv = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) ++n_sv;
  }
  m.support_vectors = FeatureMatrix(n_sv, d);
  m.coef.resize(n_sv);
  std::size_t s = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      std::copy(features.row(t), features.row(t) + d,
                m.support_vectors.row(s));
      m.coef[s] = alpha[t] * y[t];
      ++s;
    }
  }
  return m;
}

}  // namespace

double kernel_eval(const KernelParams& p, const double* x, const double* y,
                   std::size_t d) {
  switch (p.kind) {
    case KernelKind::linear: {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += x[j] * y[j];
      return dot;
    }
    case KernelKind::polynomial: {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += x[j] * y[j];
      return std::pow(p.gamma * dot + p.coef0, p.degree);
    }
    case KernelKind::rbf: {
      double d2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = x[j] - y[j];
        d2 += diff * diff;
      }
      return std::exp(-p.gamma * d2);
    }
    case KernelKind::sigmoid: {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += x[j] * y[j];
      return std::tanh(p.gamma * dot + p.coef0);
    }
  }
  fail(ErrorCode::invalid_argument, "unknown kernel");
}

double svm_decision(const BinarySvm& m, const double* x, std::size_t d) {
  if (m.mode == SvmMode::linear_primal) {
    double v = m.bias;
    for (std::size_t j = 0; j < d; ++j) v += m.w[j] * x[j];
    return v;
  }
  double v = 0.0;
  for (std::size_t s = 0; s < m.support_vectors.rows; ++s) {
    v += m.coef[s] * kernel_eval(m.kernel, m.support_vectors.row(s), x, d);
  }
  return v - m.rho;
}

BinarySvm fit_binary_svm(const FeatureMatrix& features,
                         const std::vector<int>& y, const SvmConfig& config) {
  if (features.rows == 0 || features.cols == 0) {
    fail(ErrorCode::invalid_argument, "empty training set");
  }
  if (y.size() != features.rows) {
    fail(ErrorCode::invalid_argument, "label count does not match rows");
  }
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == +1) {
      has_pos = true;
    } else if (v == -1) {
      has_neg = true;
    } else {
      fail(ErrorCode::invalid_argument, "binary labels must be -1 or +1");
    }
  }
  if (!has_pos || !has_neg) {
    fail(ErrorCode::invalid_argument,
         "training data holds a single class; nothing to separate");
  }
  if (!(config.cost > 0.0)) {
    fail(ErrorCode::invalid_argument, "cost must be positive");
  }
  if (config.mode == SvmMode::linear_primal) {
    if (config.epochs < 1) {
      fail(ErrorCode::invalid_argument, "epochs must be >= 1");
    }
    return fit_linear_primal(features, y, config);
  }
  if (config.dual_cap > 0 && features.rows > config.dual_cap) {
    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> idx =
        sample_indices(rng, features.rows, config.dual_cap);
    std::sort(idx.begin(), idx.end());
    FeatureMatrix sub(idx.size(), features.cols);
    std::vector<int> suby(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
      std::copy(features.row(idx[r]), features.row(idx[r]) + features.cols,
                sub.row(r));
      suby[r] = y[idx[r]];
    }
    const bool pos = std::count(suby.begin(), suby.end(), +1) > 0;
    const bool neg = std::count(suby.begin(), suby.end(), -1) > 0;
    if (!pos || !neg) {
      fail(ErrorCode::degenerate,
           "subsampling for the dual solver lost one class; lower the cap "
           "or rebalance the data");
    }
    return fit_kernel_dual(sub, suby, config);
  }
  return fit_kernel_dual(features, y, config);
}

SvmModel fit_svm(const FeatureMatrix& features,
                 const std::vector<std::int32_t>& labels,
                 const SvmConfig& config, int num_classes) {
  const std::size_t n = features.rows;
  if (n == 0) fail(ErrorCode::invalid_argument, "empty training set");
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
         "training data holds a single class; nothing to separate");
  }
  std::vector<std::size_t> counts(k_count, 0);
  for (std::int32_t g : labels) ++counts[g];
  for (int k = 0; k < k_count; ++k) {
    if (counts[k] == 0) {
      fail(ErrorCode::invalid_argument,
           "class " + std::to_string(k) + " has no training samples");
    }
  }

  SvmModel model;
  model.config = config;
  if (config.mode == SvmMode::kernel_dual &&
      config.kernel.kind != KernelKind::linear &&
      !(config.kernel.gamma > 0.0)) {
    double sum = 0.0;
    for (double v : features.data) sum += v;
    const double mean = sum / static_cast<double>(features.data.size());
    double ss = 0.0;
    for (double v : features.data) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(features.data.size());
    model.config.kernel.gamma =
        var > 0.0 ? 1.0 / (static_cast<double>(features.cols) * var) : 1.0;
  }
  model.num_classes = k_count;
  model.dim = static_cast<int>(features.cols);
  model.machines.reserve(k_count);
  for (int k = 0; k < k_count; ++k) {
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] == k ? +1 : -1;
    SvmConfig sub = model.config;
    sub.seed = model.config.seed + static_cast<std::uint64_t>(k);
    model.machines.push_back(fit_binary_svm(features, y, sub));
    model.converged = model.converged && model.machines.back().converged;
  }
  return model;
}

std::vector<std::int32_t> predict_svm(const SvmModel& model,
                                      const FeatureMatrix& queries,
                                      int threads) {
  if (static_cast<int>(queries.cols) != model.dim) {
    fail(ErrorCode::invalid_argument,
         "query dimension does not match the model");
  }
  std::vector<std::int32_t> out(queries.rows);
  parallel_for(queries.rows, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double* x = queries.row(i);
      int best = 0;
      double best_v = svm_decision(model.machines[0], x, queries.cols);
      for (int k = 1; k < model.num_classes; ++k) {
        const double v = svm_decision(model.machines[k], x, queries.cols);
        if (v > best_v) {
          best_v = v;
          best = k;
        }
      }
      out[i] = best;
    }
  });
  return out;
}

}  // namespace bcseg
