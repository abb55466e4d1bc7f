#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "image.hpp"
#include "metrics.hpp"
#include "rng.hpp"

using namespace bcseg;

namespace {

LabelMask mask_of(int w, int h, int k, std::vector<std::int32_t> labels) {
  return LabelMask(w, h, k, std::move(labels));
}

LabelMask random_mask(std::mt19937_64& rng, int w, int h, int k) {
  std::vector<std::int32_t> labels(static_cast<std::size_t>(w) * h);
  for (auto& l : labels) l = static_cast<std::int32_t>(uniform_index(rng, k));
  return LabelMask(w, h, k, std::move(labels));
}

}  // namespace

TEST_CASE("confusion counts truth rows against prediction columns") {
  LabelMask truth = mask_of(2, 2, 2, {0, 0, 1, 1});
  LabelMask pred = mask_of(2, 2, 2, {0, 1, 1, 1});
  ConfusionMatrix m = confusion(pred, truth);
  CHECK(m.at(0, 0) == 1);
  CHECK(m.at(0, 1) == 1);
  CHECK(m.at(1, 0) == 0);
  CHECK(m.at(1, 1) == 2);
  CHECK(m.total() == 4);
  CHECK(m.row_sum(0) == 2);
  CHECK(m.col_sum(1) == 3);

  LabelMask other_shape = mask_of(4, 1, 2, {0, 0, 1, 1});
  CHECK_THROWS_AS(confusion(other_shape, truth), Error);
  LabelMask other_k = mask_of(2, 2, 3, {0, 0, 1, 2});
  CHECK_THROWS_AS(confusion(other_k, truth), Error);
}

TEST_CASE("scalar metrics agree with hand-worked values") {
  // Confusion: [[5 1], [2 4]] -> per-class values computed by hand.
  ConfusionMatrix m(2);
  m.at(0, 0) = 5;
  m.at(0, 1) = 1;
  m.at(1, 0) = 2;
  m.at(1, 1) = 4;
  MetricReport r = scalar_metrics(m);
  CHECK(r.accuracy == doctest::Approx(9.0 / 12.0).epsilon(1e-15));
  CHECK(r.precision[0] == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
  CHECK(r.precision[1] == doctest::Approx(4.0 / 5.0).epsilon(1e-15));
  CHECK(r.recall[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(r.recall[1] == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  const double f1_0 = 2.0 * (5.0 / 7.0) * (5.0 / 6.0) / (5.0 / 7.0 + 5.0 / 6.0);
  CHECK(r.f1[0] == doctest::Approx(f1_0).epsilon(1e-14));
  CHECK(r.iou[0] == doctest::Approx(5.0 / 8.0).epsilon(1e-15));
  CHECK(r.dice[0] == doctest::Approx(10.0 / 13.0).epsilon(1e-15));
  CHECK(r.macro_precision ==
        doctest::Approx((5.0 / 7.0 + 4.0 / 5.0) / 2.0).epsilon(1e-15));
  // kappa: p0 = 9/12, pe = (6*7 + 6*5)/144 = 0.5.
  CHECK(r.kappa == doctest::Approx((0.75 - 0.5) / 0.5).epsilon(1e-14));
}

TEST_CASE("zero denominators zero the metric and raise flags") {
  // Class 2 never appears on either side; class 1 is never predicted.
  ConfusionMatrix m(3);
  m.at(0, 0) = 5;
  m.at(1, 0) = 3;
  MetricReport r = scalar_metrics(m);

  CHECK(r.precision[1] == 0.0);
  CHECK(r.precision_zero_denominator[1]);
  CHECK(r.recall[1] == 0.0);
  CHECK_FALSE(r.recall_zero_denominator[1]);  // row sum is 3
  CHECK(r.f1[1] == 0.0);
  CHECK(r.f1_zero_denominator[1]);

  CHECK(r.precision_zero_denominator[2]);
  CHECK(r.recall_zero_denominator[2]);
  CHECK(r.f1_zero_denominator[2]);
  // An absent-everywhere class is a perfect-overlap class.
  CHECK(r.iou[2] == 1.0);
  CHECK(r.dice[2] == 1.0);
  CHECK_FALSE(r.precision_zero_denominator[0]);
}

TEST_CASE("kappa edge cases") {
  ConfusionMatrix diag(3);
  diag.at(0, 0) = 10;
  diag.at(1, 1) = 2;
  diag.at(2, 2) = 5;
  CHECK(kappa(diag) == 1.0);

  ConfusionMatrix single(2);
  single.at(0, 0) = 9;  // every pixel in one category on both sides
  try {
    kappa(single);
    FAIL("expected a degenerate error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }

  ConfusionMatrix empty(2);
  CHECK_THROWS_AS(kappa(empty), Error);
  CHECK_THROWS_AS(scalar_metrics(empty), Error);

  // Perfect disagreement on a symmetric 2x2 layout reaches the lower bound.
  ConfusionMatrix anti(2);
  anti.at(0, 1) = 5;
  anti.at(1, 0) = 5;
  CHECK(kappa(anti) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("kappa stays within [-1, 1] and dice matches iou algebra") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(uniform_index(rng, 3));
    const int w = 1 + static_cast<int>(uniform_index(rng, 32));
    const int h = 1 + static_cast<int>(uniform_index(rng, 32));
    LabelMask truth = random_mask(rng, w, h, k);
    LabelMask pred = random_mask(rng, w, h, k);
    ConfusionMatrix m = confusion(pred, truth);
    MetricReport r;
    try {
      r = scalar_metrics(m);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::degenerate);
      continue;
    }
    CHECK(r.kappa >= -1.0);
    CHECK(r.kappa <= 1.0);
    for (int c = 0; c < k; ++c) {
      CHECK(std::abs(r.dice[c] - 2.0 * r.iou[c] / (1.0 + r.iou[c])) < 1e-12);
      Overlap o = overlap_metrics(pred, truth, c);
      CHECK(o.iou == r.iou[c]);
      CHECK(o.dice == r.dice[c]);
    }
  }
}

TEST_CASE("binary one-vs-rest counts match the KxK reduction") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(uniform_index(rng, 3));
    LabelMask truth = random_mask(rng, 16, 16, k);
    LabelMask pred = random_mask(rng, 16, 16, k);
    ConfusionMatrix m = confusion(pred, truth);
    for (int c = 0; c < k; ++c) {
      // Direct binary tallies of class c against the rest.
      std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
      for (std::size_t i = 0; i < truth.pixels(); ++i) {
        const bool in_truth = truth.labels()[i] == c;
        const bool in_pred = pred.labels()[i] == c;
        tp += in_truth && in_pred;
        fp += !in_truth && in_pred;
        fn += in_truth && !in_pred;
        tn += !in_truth && !in_pred;
      }
      CHECK(tp == m.at(c, c));
      CHECK(fp == m.col_sum(c) - m.at(c, c));
      CHECK(fn == m.row_sum(c) - m.at(c, c));
      CHECK(tn == m.total() - m.row_sum(c) - m.col_sum(c) + m.at(c, c));
    }
  }
}

TEST_CASE("report csv lists scalars, per-class rows, and confusion counts") {
  ConfusionMatrix m(2);
  m.at(0, 0) = 3;
  m.at(0, 1) = 1;
  m.at(1, 1) = 2;
  MetricReport r = scalar_metrics(m);
  const std::string csv = report_csv(r, m);
  CHECK(csv.rfind("metric,class,value\n", 0) == 0);
  CHECK(csv.find("accuracy,,") != std::string::npos);
  CHECK(csv.find("kappa,,") != std::string::npos);
  CHECK(csv.find("precision,0,") != std::string::npos);
  CHECK(csv.find("dice,1,") != std::string::npos);
  CHECK(csv.find("confusion,0:1,1\n") != std::string::npos);
  CHECK(csv.find("confusion,1:0,0\n") != std::string::npos);
  // 1 header + 5 scalars + 8 rows x 2 classes + 4 confusion cells.
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 1 + 5 + 16 + 4);
}
