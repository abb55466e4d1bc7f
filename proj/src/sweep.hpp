#pragma once

#include <optional>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "image.hpp"
#include "lambda_fit.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"

namespace bcseg {

// One full segmentation experiment on a single image: optional prefilter,
// stratified split, fit, whole-image prediction, scoring against the truth.
// Both the `segment` path and every sweep grid point run through here, so a
// one-point sweep equals a standalone segment-and-evaluate run.
struct SegmentRun {
  std::optional<PrefilterResult> prefilter;  // absent when run on raw pixels
  ClassifierModel model;
  LabelMask predicted;
  ConfusionMatrix cm;
  MetricReport report;
  double fit_seconds = 0.0;
};

SegmentRun run_segmentation(const GrayImage& img, const LabelMask& truth,
                            const std::optional<PrefilterOptions>& pre,
                            const ClassifierConfig& classifier,
                            double train_fraction, std::uint64_t seed,
                            int threads = 1);

struct SweepConfig {
  std::vector<double> grid;  // strictly increasing lambdas
  ClassifierConfig classifier;
  StretchRange range;
  double shift = 1.0;
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
  LambdaFitOptions mle;  // for the lambda-hat annotation
  int threads = 1;
};

struct SweepRow {
  double lambda = 0.0;
  bool ok = false;
  std::string error;  // error code name when the point failed
  double kappa = 0.0;
  double precision = 0.0;  // unweighted macro precision
  double accuracy = 0.0;
  std::vector<double> recall;  // per class
  ConfusionMatrix cm;
  double fit_seconds = 0.0;  // diagnostics only, never in the deterministic CSV
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order
  int num_classes = 0;
  // fit_lambda on the sweep image (same subsample seed); absent if that fit
  // itself failed, which does not abort the sweep.
  std::optional<double> mle_lambda;
  // Lambdas of the best successful rows (lowest lambda on ties); absent when
  // every row failed.
  std::optional<double> argmax_kappa;
  std::optional<double> argmax_precision;
};

// Failed grid points are recorded and the sweep continues.
SweepResult run_sweep(const GrayImage& img, const LabelMask& truth,
                      const SweepConfig& cfg);

// Main CSV: lambda,kappa,precision,accuracy,recall_<k>...,cm_<t>_<p>...,status
// with shortest round-trip decimal doubles; a failed row keeps its metric
// cells empty and sets status to error:<code>. Byte-identical for identical
// runs regardless of thread count.
std::string sweep_to_csv(const SweepResult& result);
SweepResult sweep_from_csv(const std::string& text);

// Long format (lambda,metric,value) for external plotting; failed rows are
// omitted.
std::string sweep_to_plot_csv(const SweepResult& result);

// Sidecar annotations: the MLE lambda-hat, the argmax markers, and the
// per-row fit times that are deliberately kept out of the main CSV.
std::string sweep_annotations_json(const SweepResult& result);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace bcseg
