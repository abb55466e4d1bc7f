#include "metrics.hpp"

#include "error.hpp"
#include "text_num.hpp"

namespace bcseg {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts) sum += c;
  return sum;
}

std::uint64_t ConfusionMatrix::row_sum(int truth) const {
  std::uint64_t sum = 0;
  for (int p = 0; p < num_classes; ++p) sum += at(truth, p);
  return sum;
}

std::uint64_t ConfusionMatrix::col_sum(int pred) const {
  std::uint64_t sum = 0;
  for (int t = 0; t < num_classes; ++t) sum += at(t, pred);
  return sum;
}

ConfusionMatrix confusion(const LabelMask& pred, const LabelMask& truth) {
  if (pred.width() != truth.width() || pred.height() != truth.height()) {
    fail(ErrorCode::invalid_argument,
         "prediction and truth masks have different shapes");
  }
  if (pred.num_classes() != truth.num_classes()) {
    fail(ErrorCode::invalid_argument,
         "prediction and truth masks have different class counts");
  }
  ConfusionMatrix m(truth.num_classes());
  for (std::size_t i = 0; i < truth.pixels(); ++i) {
    ++m.at(truth.labels()[i], pred.labels()[i]);
  }
  return m;
}

double kappa(const ConfusionMatrix& m) {
  const double total = static_cast<double>(m.total());
  if (total == 0.0) fail(ErrorCode::invalid_argument, "empty confusion matrix");
  double trace = 0.0;
  double pe = 0.0;
  for (int k = 0; k < m.num_classes; ++k) {
    trace += static_cast<double>(m.at(k, k));
    pe += static_cast<double>(m.row_sum(k)) *
          static_cast<double>(m.col_sum(k)) / (total * total);
  }
  const double p0 = trace / total;
  if (pe >= 1.0) {
    fail(ErrorCode::degenerate,
         "kappa is undefined: all mass sits in a single category");
  }
  return (p0 - pe) / (1.0 - pe);
}

MetricReport scalar_metrics(const ConfusionMatrix& m) {
  const std::uint64_t total = m.total();
  if (m.num_classes == 0 || total == 0) {
    fail(ErrorCode::invalid_argument, "empty confusion matrix");
  }
  const int k_count = m.num_classes;
  MetricReport r;
  r.num_classes = k_count;
  r.precision.resize(k_count);
  r.recall.resize(k_count);
  r.f1.resize(k_count);
  r.iou.resize(k_count);
  r.dice.resize(k_count);
  r.precision_zero_denominator.resize(k_count);
  r.recall_zero_denominator.resize(k_count);
  r.f1_zero_denominator.resize(k_count);

  std::uint64_t trace = 0;
  for (int k = 0; k < k_count; ++k) {
    const std::uint64_t tp = m.at(k, k);
    const std::uint64_t row = m.row_sum(k);  // actual class-k pixels
    const std::uint64_t col = m.col_sum(k);  // predicted class-k pixels
    trace += tp;

    r.precision_zero_denominator[k] = col == 0;
    r.precision[k] =
        col == 0 ? 0.0
                 : static_cast<double>(tp) / static_cast<double>(col);
    r.recall_zero_denominator[k] = row == 0;
    r.recall[k] =
        row == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(row);
    const double pr_sum = r.precision[k] + r.recall[k];
    r.f1_zero_denominator[k] = pr_sum == 0.0;
    r.f1[k] =
        pr_sum == 0.0 ? 0.0 : 2.0 * r.precision[k] * r.recall[k] / pr_sum;

    const std::uint64_t uni = row + col - tp;
    r.iou[k] = uni == 0 ? 1.0
                        : static_cast<double>(tp) / static_cast<double>(uni);
    r.dice[k] = row + col == 0
                    ? 1.0
                    : 2.0 * static_cast<double>(tp) /
                          static_cast<double>(row + col);

    r.macro_precision += r.precision[k];
    r.macro_recall += r.recall[k];
    r.macro_f1 += r.f1[k];
  }
  r.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  r.macro_precision /= k_count;
  r.macro_recall /= k_count;
  r.macro_f1 /= k_count;
  r.kappa = kappa(m);
  return r;
}

std::string report_csv(const MetricReport& r, const ConfusionMatrix& m) {
  std::string csv = "metric,class,value\n";
  auto scalar = [&](const char* name, double value) {
    csv += name;
    csv += ",,";
    csv += format_double(value);
    csv += '\n';
  };
  scalar("accuracy", r.accuracy);
  scalar("kappa", r.kappa);
  scalar("macro_precision", r.macro_precision);
  scalar("macro_recall", r.macro_recall);
  scalar("macro_f1", r.macro_f1);
  auto per_class = [&](const char* name, int k, double value) {
    csv += name;
    csv += ',';
    csv += std::to_string(k);
    csv += ',';
    csv += format_double(value);
    csv += '\n';
  };
  for (int k = 0; k < r.num_classes; ++k) {
    per_class("precision", k, r.precision[k]);
    per_class("recall", k, r.recall[k]);
    per_class("f1", k, r.f1[k]);
    per_class("iou", k, r.iou[k]);
    per_class("dice", k, r.dice[k]);
    per_class("precision_zero_denominator", k,
              r.precision_zero_denominator[k] ? 1 : 0);
    per_class("recall_zero_denominator", k,
              r.recall_zero_denominator[k] ? 1 : 0);
    per_class("f1_zero_denominator", k, r.f1_zero_denominator[k] ? 1 : 0);
  }
  for (int t = 0; t < m.num_classes; ++t) {
    for (int p = 0; p < m.num_classes; ++p) {
      csv += "confusion," + std::to_string(t) + ":" + std::to_string(p) +
             "," + std::to_string(m.at(t, p)) + "\n";
    }
  }
  return csv;
}

Overlap overlap_metrics(const LabelMask& pred, const LabelMask& truth, int k) {
  if (pred.width() != truth.width() || pred.height() != truth.height()) {
    fail(ErrorCode::invalid_argument,
         "prediction and truth masks have different shapes");
  }
  std::uint64_t inter = 0, a = 0, b = 0;
  for (std::size_t i = 0; i < truth.pixels(); ++i) {
    const bool in_a = pred.labels()[i] == k;
    const bool in_b = truth.labels()[i] == k;
    inter += in_a && in_b;
    a += in_a;
    b += in_b;
  }
  Overlap o;
  const std::uint64_t uni = a + b - inter;
  o.iou = uni == 0 ? 1.0
                   : static_cast<double>(inter) / static_cast<double>(uni);
  o.dice = a + b == 0 ? 1.0
                      : 2.0 * static_cast<double>(inter) /
                            static_cast<double>(a + b);
  return o;
}

}  // namespace bcseg
