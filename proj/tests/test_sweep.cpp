#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "error.hpp"
#include "lambda_fit.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "sweep.hpp"
#include "synth.hpp"

using namespace bcseg;

namespace {

std::vector<double> grid_of(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int j = 0; j < count; ++j) {
    g[j] = lo + (hi - lo) * j / (count - 1);
  }
  return g;
}

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.grid = grid_of(-1.0, 3.0, 9);
  cfg.seed = 9;
  return cfg;
}

}  // namespace

TEST_CASE("prefilter output spans the stretch range and records lambda") {
  LabeledImage scene = synth_two_class(48, 48, {}, 61);
  PrefilterOptions opts;  // lambda estimated, shift 1, range [0, 255]
  PrefilterResult res = prefilter_pipeline(scene.image, opts);
  CHECK(res.lambda_estimated);
  REQUIRE(res.estimate.has_value());
  CHECK(res.params.lambda == res.estimate->lambda_hat);
  CHECK(res.params.shift == 1.0);
  double mn = 1e300, mx = -1e300;
  for (double v : res.image.values()) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  CHECK(mn == 0.0);
  CHECK(mx == 255.0);

  PrefilterOptions fixed;
  fixed.lambda = 0.5;
  PrefilterResult fres = prefilter_pipeline(scene.image, fixed);
  CHECK_FALSE(fres.lambda_estimated);
  CHECK_FALSE(fres.estimate.has_value());
  CHECK(fres.params.lambda == 0.5);
}

TEST_CASE("prefilter validates its stretch floor") {
  LabeledImage scene = synth_two_class(16, 16, {}, 62);
  PrefilterOptions opts;
  opts.lambda = 1.0;
  opts.range.g_min = -5.0;  // a gray image cannot hold negatives
  CHECK_THROWS_AS(prefilter_pipeline(scene.image, opts), Error);
}

TEST_CASE("segmentation runs agree with their own reports") {
  LabeledImage scene = synth_two_class(64, 64, {}, 63);
  ClassifierConfig config;
  SegmentRun raw =
      run_segmentation(scene.image, scene.mask, std::nullopt, config, 0.5, 63);
  CHECK_FALSE(raw.prefilter.has_value());
  CHECK(raw.predicted.width() == 64);
  CHECK(raw.fit_seconds >= 0.0);
  // The stored report must be exactly the metrics of the stored confusion.
  MetricReport again = scalar_metrics(raw.cm);
  CHECK(again.kappa == raw.report.kappa);
  CHECK(again.accuracy == raw.report.accuracy);
  ConfusionMatrix direct = confusion(raw.predicted, scene.mask);
  CHECK(direct.counts == raw.cm.counts);

  PrefilterOptions pre;
  SegmentRun cooked =
      run_segmentation(scene.image, scene.mask, pre, config, 0.5, 63);
  CHECK(cooked.prefilter.has_value());
  CHECK(cooked.prefilter->lambda_estimated);
}

TEST_CASE("run_segmentation rejects mismatched shapes") {
  LabeledImage scene = synth_two_class(32, 32, {}, 64);
  GrayImage other = synth_lognormal(16, 16, {}, 64);
  ClassifierConfig config;
  CHECK_THROWS_AS(
      run_segmentation(other, scene.mask, std::nullopt, config, 0.5, 1), Error);
}

TEST_CASE("sweep validates its grid") {
  LabeledImage scene = synth_two_class(24, 24, {}, 65);
  SweepConfig cfg;
  CHECK_THROWS_AS(run_sweep(scene.image, scene.mask, cfg), Error);
  cfg.grid = {0.0, 0.0};
  CHECK_THROWS_AS(run_sweep(scene.image, scene.mask, cfg), Error);
  cfg.grid = {1.0, 0.5};
  CHECK_THROWS_AS(run_sweep(scene.image, scene.mask, cfg), Error);
}

TEST_CASE("sweep rows carry metrics consistent with their confusion counts") {
  LabeledImage scene = synth_two_class(48, 48, {}, 66);
  SweepConfig cfg = small_config();
  SweepResult result = run_sweep(scene.image, scene.mask, cfg);
  REQUIRE(result.rows.size() == 9);
  CHECK(result.num_classes == 2);
  CHECK(result.mle_lambda.has_value());
  REQUIRE(result.argmax_kappa.has_value());
  REQUIRE(result.argmax_precision.has_value());

  double best_kappa = -2.0, best_lambda = 0.0;
  for (const SweepRow& row : result.rows) {
    REQUIRE(row.ok);
    MetricReport again = scalar_metrics(row.cm);
    CHECK(std::abs(again.kappa - row.kappa) <= 1e-12);
    CHECK(std::abs(again.macro_precision - row.precision) <= 1e-12);
    CHECK(std::abs(again.accuracy - row.accuracy) <= 1e-12);
    REQUIRE(row.recall.size() == 2);
    CHECK(row.recall[0] == again.recall[0]);
    CHECK(row.recall[1] == again.recall[1]);
    if (again.kappa > best_kappa) {
      best_kappa = again.kappa;
      best_lambda = row.lambda;
    }
  }
  CHECK(*result.argmax_kappa == best_lambda);

  // The annotation matches a direct fit on the same image.
  LambdaFitOptions fit_opts = cfg.mle;
  IntensityVector v = vectorize(scene.image);
  CHECK(*result.mle_lambda == fit_lambda(v, cfg.shift, fit_opts).lambda_hat);
}

TEST_CASE("sweep matches a standalone segmentation at each grid point") {
  LabeledImage scene = synth_two_class(32, 32, {}, 67);
  SweepConfig cfg = small_config();
  cfg.grid = {0.0, 1.0};
  SweepResult result = run_sweep(scene.image, scene.mask, cfg);
  for (std::size_t j = 0; j < cfg.grid.size(); ++j) {
    PrefilterOptions pre;
    pre.lambda = cfg.grid[j];
    pre.shift = cfg.shift;
    pre.range = cfg.range;
    SegmentRun run = run_segmentation(scene.image, scene.mask, pre,
                                      cfg.classifier, cfg.train_fraction,
                                      cfg.seed);
    CHECK(result.rows[j].kappa == run.report.kappa);
    CHECK(result.rows[j].cm.counts == run.cm.counts);
  }
}

TEST_CASE("an all-failed sweep keeps rows and drops the argmax") {
  // A single-class truth mask cannot train a discriminant at any lambda.
  GrayImage img = synth_lognormal(16, 16, {}, 68);
  LabelMask flat(16, 16, 2, std::vector<std::int32_t>(256, 0));
  SweepConfig cfg = small_config();
  cfg.grid = {0.0, 0.5, 1.0};
  SweepResult result = run_sweep(img, flat, cfg);
  REQUIRE(result.rows.size() == 3);
  for (const SweepRow& row : result.rows) {
    CHECK_FALSE(row.ok);
    CHECK(row.error == "invalid-argument");
  }
  CHECK_FALSE(result.argmax_kappa.has_value());
  CHECK_FALSE(result.argmax_precision.has_value());
  CHECK(result.mle_lambda.has_value());  // the image fit itself still works

  const std::string csv = sweep_to_csv(result);
  SweepResult back = sweep_from_csv(csv);
  REQUIRE(back.rows.size() == 3);
  CHECK_FALSE(back.rows[0].ok);
  CHECK(back.rows[0].error == "invalid-argument");
  CHECK(sweep_to_plot_csv(result) == "lambda,metric,value\n");
}

TEST_CASE("sweep csv round-trips every row bit for bit") {
  LabeledImage scene = synth_two_class(48, 48, {}, 69);
  SweepConfig cfg = small_config();
  SweepResult result = run_sweep(scene.image, scene.mask, cfg);
  const std::string csv = sweep_to_csv(result);

  // Header shape: lambda, three scalars, K recalls, K^2 counts, status.
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header ==
        "lambda,kappa,precision,accuracy,recall_0,recall_1,"
        "cm_0_0,cm_0_1,cm_1_0,cm_1_1,status");

  SweepResult back = sweep_from_csv(csv);
  REQUIRE(back.rows.size() == result.rows.size());
  CHECK(back.num_classes == result.num_classes);
  for (std::size_t j = 0; j < back.rows.size(); ++j) {
    CHECK(back.rows[j].lambda == result.rows[j].lambda);
    CHECK(back.rows[j].kappa == result.rows[j].kappa);
    CHECK(back.rows[j].precision == result.rows[j].precision);
    CHECK(back.rows[j].accuracy == result.rows[j].accuracy);
    CHECK(back.rows[j].recall == result.rows[j].recall);
    CHECK(back.rows[j].cm.counts == result.rows[j].cm.counts);
  }
  // Serializing the parsed result reproduces the file exactly.
  CHECK(sweep_to_csv(back) == csv);
}

TEST_CASE("sweep csv parse errors") {
  CHECK_THROWS_AS(sweep_from_csv(""), Error);
  CHECK_THROWS_AS(sweep_from_csv("lambda,what\n"), Error);
  CHECK_THROWS_AS(
      sweep_from_csv("lambda,kappa,precision,accuracy,recall_0,recall_1,"
                     "cm_0_0,cm_0_1,cm_1_0,cm_1_1,status\n1,2,3\n"),
      Error);
}

TEST_CASE("plot csv holds one long-format row per metric") {
  LabeledImage scene = synth_two_class(32, 32, {}, 70);
  SweepConfig cfg = small_config();
  cfg.grid = {0.0, 1.0, 2.0};
  SweepResult result = run_sweep(scene.image, scene.mask, cfg);
  const std::string plot = sweep_to_plot_csv(result);
  CHECK(plot.rfind("lambda,metric,value\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : plot) lines += c == '\n';
  // 3 ok rows x (kappa, precision, accuracy, recall_0, recall_1).
  CHECK(lines == 1 + 3 * 5);
  CHECK(plot.find(",kappa,") != std::string::npos);
  CHECK(plot.find(",recall_1,") != std::string::npos);
}

TEST_CASE("annotations json carries the markers and fit times") {
  LabeledImage scene = synth_two_class(32, 32, {}, 71);
  SweepConfig cfg = small_config();
  cfg.grid = {0.0, 0.5, 1.0};
  SweepResult result = run_sweep(scene.image, scene.mask, cfg);
  const nlohmann::json j = nlohmann::json::parse(sweep_annotations_json(result));
  CHECK(j.at("format") == "bcseg-sweep-annotations");
  CHECK(j.at("mle_lambda").get<double>() == *result.mle_lambda);
  CHECK(j.at("argmax_kappa_lambda").get<double>() == *result.argmax_kappa);
  CHECK(j.at("argmax_precision_lambda").get<double>() ==
        *result.argmax_precision);
  REQUIRE(j.at("rows").size() == 3);
  for (const auto& row : j.at("rows")) {
    CHECK(row.at("status") == "ok");
    CHECK(row.at("fit_seconds").get<double>() >= 0.0);
  }
}

TEST_CASE("sweeps are deterministic across repeats and thread counts") {
  LabeledImage scene = synth_two_class(48, 48, {}, 72);
  SweepConfig cfg = small_config();
  SweepResult first = run_sweep(scene.image, scene.mask, cfg);
  SweepResult second = run_sweep(scene.image, scene.mask, cfg);
  CHECK(sweep_to_csv(first) == sweep_to_csv(second));

  cfg.threads = 4;
  SweepResult threaded = run_sweep(scene.image, scene.mask, cfg);
  CHECK(sweep_to_csv(first) == sweep_to_csv(threaded));
  CHECK(sweep_to_plot_csv(first) == sweep_to_plot_csv(threaded));
}

TEST_CASE("text files round-trip and report io failures") {
  const std::string path =
      (std::filesystem::temp_directory_path() /
       ("bcseg_sweep_text_" + std::to_string(::getpid()) + ".txt"))
          .string();
  write_text_file(path, "alpha\nbeta\n");
  CHECK(read_text_file(path) == "alpha\nbeta\n");
  std::filesystem::remove(path);
  try {
    read_text_file("/nonexistent/dir/file.txt");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  try {
    write_text_file("/nonexistent/dir/file.txt", "x");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
}
