#include "knn.hpp"

#include <algorithm>
#include <utility>

#include "error.hpp"
#include "parallel.hpp"

namespace bcseg {

namespace {

std::vector<std::size_t> nearest(const KnnModel& model, const double* x) {
  const std::size_t n = model.train.rows;
  const std::size_t d = model.train.cols;
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* t = model.train.row(i);
    double d2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x[j] - t[j];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  const std::size_t k = static_cast<std::size_t>(model.k);
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = dist[i].second;
  return idx;
}

}  // namespace

KnnModel fit_knn(const FeatureMatrix& features,
                 const std::vector<std::int32_t>& labels, int k,
                 int num_classes) {
  if (features.rows == 0) {
    fail(ErrorCode::invalid_argument, "empty training set");
  }
  if (labels.size() != features.rows) {
    fail(ErrorCode::invalid_argument, "label count does not match rows");
  }
  if (k < 1 || static_cast<std::size_t>(k) > features.rows) {
    fail(ErrorCode::invalid_argument,
         "K must lie in [1, training size], got " + std::to_string(k));
  }
  KnnModel model;
  model.k = k;
  model.num_classes = num_classes;
  for (std::int32_t g : labels) {
    if (g < 0) fail(ErrorCode::invalid_argument, "negative class label");
    model.num_classes = std::max(model.num_classes, g + 1);
  }
  model.train = features;
  model.labels = labels;
  return model;
}

std::vector<double> knn_posterior(const KnnModel& model, const double* x) {
  std::vector<double> freq(model.num_classes, 0.0);
  for (std::size_t i : nearest(model, x)) {
    freq[model.labels[i]] += 1.0 / model.k;
  }
  return freq;
}

std::vector<std::int32_t> predict_knn(const KnnModel& model,
                                      const FeatureMatrix& queries,
                                      int threads) {
  if (queries.cols != model.train.cols) {
    fail(ErrorCode::invalid_argument,
         "query dimension does not match the training features");
  }
  std::vector<std::int32_t> out(queries.rows);
  parallel_for(queries.rows, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<int> votes(model.num_classes);
    for (std::size_t i = lo; i < hi; ++i) {
      std::fill(votes.begin(), votes.end(), 0);
      for (std::size_t t : nearest(model, queries.row(i))) {
        ++votes[model.labels[t]];
      }
      int best = 0;
      for (int k = 1; k < model.num_classes; ++k) {
        if (votes[k] > votes[best]) best = k;
      }
      out[i] = best;
    }
  });
  return out;
}

}  // namespace bcseg
