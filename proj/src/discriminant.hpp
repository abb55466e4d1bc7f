#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "features.hpp"

namespace bcseg {

enum class DiscriminantKind { lda, qda };

// Gaussian discriminant classifier. The stored priors, means, and covariances
// are the raw estimates (pooled with divisor N-K for LDA, per class with
// divisor N_k-1 for QDA); the ridge is added to the diagonal only when the
// inverses are formed.
struct DiscriminantModel {
  DiscriminantKind kind = DiscriminantKind::lda;
  int num_classes = 0;
  int dim = 0;
  std::vector<double> priors;               // K entries summing to 1
  std::vector<std::vector<double>> means;   // K vectors of length d
  // LDA: one pooled matrix; QDA: K matrices. Row-major d x d.
  std::vector<std::vector<double>> covariances;
  std::vector<double> ridge;  // resolved diagonal addition per matrix

  // Prediction cache, rebuilt by finalize(): inverse covariances and the
  // per-class constants of the discriminant functions.
  std::vector<std::vector<double>> inv_cov;
  std::vector<double> log_det;

  void finalize();
};

// Estimates priors, class means, and covariance(s) by direct sums. A ridge of
// nullopt resolves to 1e-6 * trace / d per matrix. num_classes 0 infers
// max(label) + 1. Each class needs at least d + 1 samples and K >= 2.
DiscriminantModel fit_discriminant(const FeatureMatrix& features,
                                   const std::vector<std::int32_t>& labels,
                                   DiscriminantKind kind,
                                   std::optional<double> ridge = std::nullopt,
                                   int num_classes = 0);

// Per-class discriminant scores delta_k(x) for one feature row.
std::vector<double> discriminant_scores(const DiscriminantModel& model,
                                        const double* x);

// argmax_k delta_k(x) per row; ties go to the smallest class index.
std::vector<std::int32_t> predict_discriminant(const DiscriminantModel& model,
                                               const FeatureMatrix& features,
                                               int threads = 1);

}  // namespace bcseg
