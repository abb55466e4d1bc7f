#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "image.hpp"

namespace bcseg {

// Rows index the true class, columns the predicted class.
struct ConfusionMatrix {
  int num_classes = 0;
  std::vector<std::uint64_t> counts;  // K*K row-major

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int k)
      : num_classes(k),
        counts(static_cast<std::size_t>(k) * k, 0) {}

  std::uint64_t at(int truth, int pred) const {
    return counts[static_cast<std::size_t>(truth) * num_classes + pred];
  }
  std::uint64_t& at(int truth, int pred) {
    return counts[static_cast<std::size_t>(truth) * num_classes + pred];
  }
  std::uint64_t total() const;
  std::uint64_t row_sum(int truth) const;
  std::uint64_t col_sum(int pred) const;
};

ConfusionMatrix confusion(const LabelMask& pred, const LabelMask& truth);

struct MetricReport {
  int num_classes = 0;
  std::vector<double> precision;  // one-vs-rest, per class
  std::vector<double> recall;
  std::vector<double> f1;
  std::vector<double> iou;
  std::vector<double> dice;
  // A zero denominator forces the affected entry to 0 and raises its flag.
  std::vector<bool> precision_zero_denominator;
  std::vector<bool> recall_zero_denominator;
  std::vector<bool> f1_zero_denominator;
  double accuracy = 0.0;
  double macro_precision = 0.0;  // unweighted class means
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double kappa = 0.0;
};

// p0 = trace/total, pe = sum_k row_k col_k / total^2, kappa = (p0-pe)/(1-pe).
// pe = 1 (everything in one category on both sides) leaves kappa undefined
// and is a degenerate error.
double kappa(const ConfusionMatrix& m);

// Full report: per-class precision/recall/F1 (standard harmonic mean with
// factor 2), accuracy, unweighted macro averages, per-class IoU and Dice
// (both-empty classes score 1), and kappa.
MetricReport scalar_metrics(const ConfusionMatrix& m);

// Long-format table (metric,class,value), confusion counts as truth:pred
// rows. Doubles print in shortest round-trip decimal form.
std::string report_csv(const MetricReport& r, const ConfusionMatrix& m);

// Set overlap of class k computed directly on the masks.
struct Overlap {
  double iou = 0.0;
  double dice = 0.0;
};
Overlap overlap_metrics(const LabelMask& pred, const LabelMask& truth, int k);

}  // namespace bcseg
