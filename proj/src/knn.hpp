#pragma once

#include <cstdint>
#include <vector>

#include "features.hpp"

namespace bcseg {

// Brute-force Euclidean K-nearest-neighbor classifier. Neighbors are ordered
// by (squared distance, training index), so equidistant points resolve to the
// lower index and predictions are reproducible.
struct KnnModel {
  int k = 1;
  int num_classes = 0;
  FeatureMatrix train;
  std::vector<std::int32_t> labels;
};

KnnModel fit_knn(const FeatureMatrix& features,
                 const std::vector<std::int32_t>& labels, int k,
                 int num_classes = 0);

// Empirical class frequencies among the K nearest neighbors of one query.
std::vector<double> knn_posterior(const KnnModel& model, const double* x);

// Majority vote; vote ties go to the smallest class index.
std::vector<std::int32_t> predict_knn(const KnnModel& model,
                                      const FeatureMatrix& queries,
                                      int threads = 1);

}  // namespace bcseg
