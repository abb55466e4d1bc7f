// Command-line front end. Every computation goes through the shared C API;
// this file only parses flags, moves bytes, and renders text. Each run writes
// a manifest JSON holding all resolved options, so rerunning with the
// recorded values reproduces the outputs bit for bit.
#include <bcseg/bcseg.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

using nlohmann::json;

// Owning wrapper so early returns never leak a handle.
template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (ptr != nullptr) Free(ptr);
  }
  T** out() { return &ptr; }
  operator T*() const { return ptr; }
};

using GrayHandle = Handle<bcseg_gray, bcseg_gray_free>;
using MaskHandle = Handle<bcseg_mask, bcseg_mask_free>;
using PaletteHandle = Handle<bcseg_palette, bcseg_palette_free>;
using FitHandle = Handle<bcseg_lambda_fit, bcseg_lambda_fit_free>;
using ModelHandle = Handle<bcseg_model, bcseg_model_free>;
using ReportHandle = Handle<bcseg_report, bcseg_report_free>;
using SweepHandle = Handle<bcseg_sweep, bcseg_sweep_free>;

struct ApiString {
  char* s = nullptr;
  ApiString() = default;
  ApiString(const ApiString&) = delete;
  ApiString& operator=(const ApiString&) = delete;
  ~ApiString() { bcseg_string_free(s); }
};

int exit_code_for(int status) {
  switch (status) {
    case BCSEG_OK: return 0;
    case BCSEG_ERR_IO:
    case BCSEG_ERR_FORMAT:
    case BCSEG_ERR_INVALID_ARGUMENT: return 2;
    case BCSEG_ERR_DEGENERATE: return 3;
    default: return 4;  /* domain, numeric */
  }
}

int report_failure(int status) {
  std::fprintf(stderr, "bcseg: %s error: %s\n", bcseg_status_name(status),
               bcseg_last_error());
  return exit_code_for(status);
}

// Evaluates a C API call and turns a failure into the process exit code.
#define CLI_TRY(call)                                     \
  do {                                                    \
    const int try_status_ = (call);                       \
    if (try_status_ != BCSEG_OK) {                        \
      return report_failure(try_status_);                 \
    }                                                     \
  } while (0)

std::string fmt(double value) {
  char buf[64];
  if (bcseg_format_double(value, buf, sizeof buf) != BCSEG_OK) return "?";
  return buf;
}

bool to_double(const std::string& text, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

int usage_error(const std::string& message) {
  std::fprintf(stderr, "bcseg: %s\n", message.c_str());
  return 2;
}

// "min:max" pairs for --range and --bracket.
bool parse_pair(const std::string& text, double& lo, double& hi) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) return false;
  return to_double(text.substr(0, colon), lo) &&
         to_double(text.substr(colon + 1), hi);
}

// "lo:hi:count" (equispaced, endpoints included) or a single value.
bool parse_grid(const std::string& text, std::vector<double>& grid) {
  grid.clear();
  const std::size_t c1 = text.find(':');
  if (c1 == std::string::npos) {
    double v = 0.0;
    if (!to_double(text, v)) return false;
    grid.push_back(v);
    return true;
  }
  const std::size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) return false;
  double lo = 0.0, hi = 0.0, count_raw = 0.0;
  if (!to_double(text.substr(0, c1), lo) ||
      !to_double(text.substr(c1 + 1, c2 - c1 - 1), hi) ||
      !to_double(text.substr(c2 + 1), count_raw)) {
    return false;
  }
  const int count = static_cast<int>(count_raw);
  if (count != count_raw || count < 1) return false;
  if (count == 1) {
    if (lo != hi) return false;
    grid.push_back(lo);
    return true;
  }
  if (!(hi > lo)) return false;
  for (int j = 0; j < count; ++j) {
    grid.push_back(lo + (hi - lo) * j / (count - 1));
  }
  return true;
}

bool write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

int write_or_fail(const std::string& path, const char* text) {
  if (!write_file(path, text)) {
    return usage_error("cannot write '" + path + "'");
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int write_manifest(const std::string& path, const char* command,
                   json options, json results) {
  json manifest;
  manifest["command"] = command;
  manifest["tool_version"] = bcseg_version();
  manifest["options"] = std::move(options);
  manifest["results"] = std::move(results);
  if (!write_file(path, (manifest.dump(2) + "\n").c_str())) {
    return usage_error("cannot write manifest '" + path + "'");
  }
  std::printf("manifest %s\n", path.c_str());
  return 0;
}

// Flags shared by every command that estimates lambda.
struct FitFlags {
  std::string bracket = "-3:5";
  int grid_points = 61;
  double tol = 1e-4;
  std::uint64_t subsample_cap = std::uint64_t{1} << 20;

  void attach(CLI::App* cmd) {
    cmd->add_option("--bracket", bracket,
                    "lambda search bracket, lo:hi")
        ->capture_default_str();
    cmd->add_option("--grid-points", grid_points,
                    "coarse likelihood scan size")
        ->capture_default_str();
    cmd->add_option("--fit-tol", tol, "refinement bracket width")
        ->capture_default_str();
    cmd->add_option("--subsample-cap", subsample_cap,
                    "pixel budget for the fit; larger images are "
                    "subsampled (0 disables)")
        ->capture_default_str();
  }

  // Exit code in the int; 0 keeps going.
  int resolve(std::uint64_t seed, int threads, bcseg_fit_options& out) const {
    bcseg_fit_options_init(&out);
    if (!parse_pair(bracket, out.bracket_lo, out.bracket_hi)) {
      return usage_error("--bracket wants lo:hi, got '" + bracket + "'");
    }
    out.grid_points = grid_points;
    out.tol = tol;
    out.subsample_cap = subsample_cap;
    out.subsample_seed = seed;
    out.threads = threads;
    return 0;
  }

  json to_json() const {
    return json{{"bracket", bracket},
                {"grid-points", grid_points},
                {"fit-tol", tol},
                {"subsample-cap", subsample_cap}};
  }
};

// Classifier flags shared by segment and sweep.
struct ClassifierFlags {
  std::string classifier = "lda";
  std::string features = "intensity";
  int window = 3;
  double ridge = -1.0;
  int knn_k = 5;
  std::string svm_mode = "linear-primal";
  std::string svm_kernel = "linear";
  double svm_cost = 1.0;
  double svm_gamma = 0.0;
  double svm_coef0 = 0.0;
  int svm_degree = 3;
  int svm_epochs = 400;
  std::uint64_t svm_dual_cap = 2000;
  double svm_dual_tol = 1e-3;
  double train_fraction = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--classifier", classifier, "lda, qda, knn, or svm")
        ->capture_default_str();
    cmd->add_option("--features", features,
                    "intensity or intensity+window-stats")
        ->capture_default_str();
    cmd->add_option("--window", window, "window-stats side length (odd)")
        ->capture_default_str();
    cmd->add_option("--ridge", ridge,
                    "covariance regularizer; negative picks a default "
                    "proportional to trace/dim")
        ->capture_default_str();
    cmd->add_option("--knn-k", knn_k, "neighbor count")->capture_default_str();
    cmd->add_option("--svm-mode", svm_mode, "linear-primal or kernel-dual")
        ->capture_default_str();
    cmd->add_option("--svm-kernel", svm_kernel,
                    "linear, polynomial, rbf, or sigmoid")
        ->capture_default_str();
    cmd->add_option("--svm-cost", svm_cost, "soft-margin C")
        ->capture_default_str();
    cmd->add_option("--svm-gamma", svm_gamma,
                    "kernel scale; <= 0 picks 1/(dim * variance)")
        ->capture_default_str();
    cmd->add_option("--svm-coef0", svm_coef0, "kernel offset r")
        ->capture_default_str();
    cmd->add_option("--svm-degree", svm_degree, "polynomial degree")
        ->capture_default_str();
    cmd->add_option("--svm-epochs", svm_epochs, "linear-primal passes")
        ->capture_default_str();
    cmd->add_option("--svm-dual-cap", svm_dual_cap,
                    "dual training row budget; larger sets are subsampled")
        ->capture_default_str();
    cmd->add_option("--svm-dual-tol", svm_dual_tol,
                    "dual stopping threshold")
        ->capture_default_str();
    cmd->add_option("--train-fraction", train_fraction,
                    "stratified split share, in (0, 1)")
        ->capture_default_str();
  }

  void resolve(std::uint64_t seed, int threads,
               bcseg_train_options& out) const {
    bcseg_train_options_init(&out);
    out.classifier = classifier.c_str();
    out.features = features.c_str();
    out.window = window;
    out.ridge = ridge;
    out.knn_k = knn_k;
    out.svm_mode = svm_mode.c_str();
    out.svm_kernel = svm_kernel.c_str();
    out.svm_cost = svm_cost;
    out.svm_gamma = svm_gamma;
    out.svm_coef0 = svm_coef0;
    out.svm_degree = svm_degree;
    out.svm_epochs = svm_epochs;
    out.svm_dual_cap = svm_dual_cap;
    out.svm_dual_tol = svm_dual_tol;
    out.train_fraction = train_fraction;
    out.seed = seed;
    out.threads = threads;
  }

  json to_json() const {
    return json{{"classifier", classifier},
                {"features", features},
                {"window", window},
                {"ridge", ridge},
                {"knn-k", knn_k},
                {"svm-mode", svm_mode},
                {"svm-kernel", svm_kernel},
                {"svm-cost", svm_cost},
                {"svm-gamma", svm_gamma},
                {"svm-coef0", svm_coef0},
                {"svm-degree", svm_degree},
                {"svm-epochs", svm_epochs},
                {"svm-dual-cap", svm_dual_cap},
                {"svm-dual-tol", svm_dual_tol},
                {"train-fraction", train_fraction}};
  }
};

void print_report(const bcseg_report* report) {
  const int k_count = bcseg_report_num_classes(report);
  std::printf("accuracy %s\n", fmt(bcseg_report_accuracy(report)).c_str());
  std::printf("kappa %s\n", fmt(bcseg_report_kappa(report)).c_str());
  std::printf("macro precision %s recall %s f1 %s\n",
              fmt(bcseg_report_macro_precision(report)).c_str(),
              fmt(bcseg_report_macro_recall(report)).c_str(),
              fmt(bcseg_report_macro_f1(report)).c_str());
  for (int k = 0; k < k_count; ++k) {
    std::printf("class %d: precision %s recall %s f1 %s iou %s dice %s\n", k,
                fmt(bcseg_report_precision(report, k)).c_str(),
                fmt(bcseg_report_recall(report, k)).c_str(),
                fmt(bcseg_report_f1(report, k)).c_str(),
                fmt(bcseg_report_iou(report, k)).c_str(),
                fmt(bcseg_report_dice(report, k)).c_str());
  }
  std::printf("confusion (rows truth, cols predicted):\n");
  for (int t = 0; t < k_count; ++t) {
    std::printf(" ");
    for (int p = 0; p < k_count; ++p) {
      std::printf(" %llu", static_cast<unsigned long long>(
                               bcseg_report_confusion(report, t, p)));
    }
    std::printf("\n");
  }
}

/* ---- transform ---- */

struct TransformOpts {
  std::string input;
  std::string output;
  std::string lambda = "mle";
  double shift = 1.0;
  std::string range = "0:255";
  FitFlags fit;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string manifest;
};

int run_transform(const TransformOpts& o) {
  bcseg_prefilter_params params;
  bcseg_prefilter_params_init(&params);
  if (o.lambda != "mle" && !to_double(o.lambda, params.lambda)) {
    return usage_error("--lambda wants a number or 'mle', got '" + o.lambda +
                       "'");
  }
  params.shift = o.shift;
  if (!parse_pair(o.range, params.g_min, params.g_max)) {
    return usage_error("--range wants min:max, got '" + o.range + "'");
  }
  params.threads = o.threads;
  if (int rc = o.fit.resolve(o.seed, o.threads, params.fit); rc != 0) {
    return rc;
  }

  GrayHandle input;
  CLI_TRY(bcseg_gray_load(o.input.c_str(), input.out()));
  GrayHandle output;
  FitHandle fit;
  CLI_TRY(bcseg_prefilter(input, &params, output.out(), fit.out()));
  CLI_TRY(bcseg_gray_save(output, o.output.c_str()));

  const bool estimated = fit.ptr != nullptr;
  const double lambda_applied =
      estimated ? bcseg_lambda_fit_lambda(fit) : params.lambda;
  std::printf("lambda %s (%s)\n", fmt(lambda_applied).c_str(),
              estimated ? "maximum likelihood" : "fixed");
  if (estimated) {
    std::printf("log-likelihood %s\n",
                fmt(bcseg_lambda_fit_loglik(fit)).c_str());
  }
  std::printf("wrote %s\n", o.output.c_str());

  json options{{"input", o.input},    {"output", o.output},
               {"lambda", o.lambda},  {"shift", o.shift},
               {"range", o.range},    {"seed", o.seed},
               {"threads", o.threads}};
  options.update(o.fit.to_json());
  json results{{"lambda_applied", lambda_applied},
               {"lambda_estimated", estimated}};
  if (estimated) {
    results["log_likelihood"] = bcseg_lambda_fit_loglik(fit);
    results["sigma2"] = bcseg_lambda_fit_sigma2(fit);
    results["pixels_used"] = bcseg_lambda_fit_n_used(fit);
  }
  const std::string manifest =
      o.manifest.empty() ? o.output + ".manifest.json" : o.manifest;
  return write_manifest(manifest, "transform", std::move(options),
                        std::move(results));
}

/* ---- estimate-lambda ---- */

struct EstimateOpts {
  std::string input;
  std::string output;
  double shift = 1.0;
  FitFlags fit;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string manifest;
};

int run_estimate(const EstimateOpts& o) {
  bcseg_fit_options fit_options;
  if (int rc = o.fit.resolve(o.seed, o.threads, fit_options); rc != 0) {
    return rc;
  }
  GrayHandle input;
  CLI_TRY(bcseg_gray_load(o.input.c_str(), input.out()));
  FitHandle fit;
  CLI_TRY(bcseg_fit_lambda(input, o.shift, &fit_options, fit.out()));

  std::printf("lambda %s\n", fmt(bcseg_lambda_fit_lambda(fit)).c_str());
  std::printf("sigma2 %s\n", fmt(bcseg_lambda_fit_sigma2(fit)).c_str());
  std::string theta;
  json theta_json = json::array();
  for (size_t i = 0; i < bcseg_lambda_fit_theta_len(fit); ++i) {
    if (i > 0) theta += ' ';
    theta += fmt(bcseg_lambda_fit_theta(fit, i));
    theta_json.push_back(bcseg_lambda_fit_theta(fit, i));
  }
  std::printf("theta %s\n", theta.c_str());
  std::printf("log-likelihood %s\n",
              fmt(bcseg_lambda_fit_loglik(fit)).c_str());
  std::printf("pixels-used %zu\n", bcseg_lambda_fit_n_used(fit));

  ApiString grid;
  grid.s = bcseg_lambda_fit_grid_csv(fit);
  if (int rc = write_or_fail(o.output, grid.s); rc != 0) return rc;

  json options{{"input", o.input}, {"output", o.output}, {"shift", o.shift},
               {"seed", o.seed},   {"threads", o.threads}};
  options.update(o.fit.to_json());
  json results{{"lambda", bcseg_lambda_fit_lambda(fit)},
               {"sigma2", bcseg_lambda_fit_sigma2(fit)},
               {"theta", std::move(theta_json)},
               {"log_likelihood", bcseg_lambda_fit_loglik(fit)},
               {"pixels_used", bcseg_lambda_fit_n_used(fit)}};
  const std::string manifest =
      o.manifest.empty() ? o.output + ".manifest.json" : o.manifest;
  return write_manifest(manifest, "estimate-lambda", std::move(options),
                        std::move(results));
}

/* ---- segment ---- */

struct SegmentOpts {
  std::string input;
  std::string mask;
  std::string palette = "0=0;255=1";
  std::string output;
  std::string prefilter = "on";
  std::string lambda = "mle";
  double shift = 1.0;
  std::string range = "0:255";
  FitFlags fit;
  ClassifierFlags classifier;
  std::string report_path;
  std::string model_path;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string manifest;
};

int run_segment(const SegmentOpts& o) {
  GrayHandle raw;
  CLI_TRY(bcseg_gray_load(o.input.c_str(), raw.out()));
  PaletteHandle palette;
  CLI_TRY(bcseg_palette_parse(o.palette.c_str(), palette.out()));
  MaskHandle truth;
  CLI_TRY(bcseg_mask_load(o.mask.c_str(), palette, truth.out()));

  GrayHandle filtered;
  FitHandle fit;
  const bool prefilter_on = o.prefilter == "on";
  double lambda_applied = std::numeric_limits<double>::quiet_NaN();
  if (prefilter_on) {
    bcseg_prefilter_params params;
    bcseg_prefilter_params_init(&params);
    if (o.lambda != "mle" && !to_double(o.lambda, params.lambda)) {
      return usage_error("--lambda wants a number or 'mle', got '" + o.lambda +
                         "'");
    }
    params.shift = o.shift;
    if (!parse_pair(o.range, params.g_min, params.g_max)) {
      return usage_error("--range wants min:max, got '" + o.range + "'");
    }
    params.threads = o.threads;
    if (int rc = o.fit.resolve(o.seed, o.threads, params.fit); rc != 0) {
      return rc;
    }
    CLI_TRY(bcseg_prefilter(raw, &params, filtered.out(), fit.out()));
    lambda_applied =
        fit.ptr != nullptr ? bcseg_lambda_fit_lambda(fit) : params.lambda;
    std::printf("lambda %s (%s)\n", fmt(lambda_applied).c_str(),
                fit.ptr != nullptr ? "maximum likelihood" : "fixed");
  }
  const bcseg_gray* working = prefilter_on ? filtered.ptr : raw.ptr;

  bcseg_train_options train_options;
  o.classifier.resolve(o.seed, o.threads, train_options);
  ModelHandle model;
  double fit_seconds = 0.0;
  CLI_TRY(bcseg_train(working, truth, &train_options, model.out(),
                      &fit_seconds));
  if (bcseg_model_converged(model) == 0) {
    std::fprintf(stderr, "bcseg: warning: dual solver hit its iteration cap; "
                         "the model is usable but not fully converged\n");
  }
  MaskHandle predicted;
  CLI_TRY(bcseg_segment(working, model, o.threads, predicted.out()));
  CLI_TRY(bcseg_mask_save(predicted, palette, o.output.c_str()));

  ReportHandle report;
  CLI_TRY(bcseg_evaluate(predicted, truth, report.out()));
  std::printf("fit-seconds %s\n", fmt(fit_seconds).c_str());
  print_report(report);
  std::printf("wrote %s\n", o.output.c_str());

  if (!o.report_path.empty()) {
    ApiString csv;
    csv.s = bcseg_report_csv(report);
    if (int rc = write_or_fail(o.report_path, csv.s); rc != 0) return rc;
  }
  if (!o.model_path.empty()) {
    CLI_TRY(bcseg_model_save(model, o.model_path.c_str()));
    std::printf("wrote %s\n", o.model_path.c_str());
  }

  json options{{"input", o.input},
               {"mask", o.mask},
               {"palette", o.palette},
               {"output", o.output},
               {"prefilter", o.prefilter},
               {"lambda", o.lambda},
               {"shift", o.shift},
               {"range", o.range},
               {"report", o.report_path},
               {"save-model", o.model_path},
               {"seed", o.seed},
               {"threads", o.threads}};
  options.update(o.fit.to_json());
  options.update(o.classifier.to_json());
  json results{{"fit_seconds", fit_seconds},
               {"accuracy", bcseg_report_accuracy(report)},
               {"kappa", bcseg_report_kappa(report)},
               {"converged", bcseg_model_converged(model) != 0}};
  if (prefilter_on) {
    results["lambda_applied"] = lambda_applied;
    results["lambda_estimated"] = fit.ptr != nullptr;
  }
  const std::string manifest =
      o.manifest.empty() ? o.output + ".manifest.json" : o.manifest;
  return write_manifest(manifest, "segment", std::move(options),
                        std::move(results));
}

/* ---- evaluate ---- */

struct EvaluateOpts {
  std::string pred;
  std::string truth;
  std::string palette = "0=0;255=1";
  std::string output;
  std::string manifest;
};

int run_evaluate(const EvaluateOpts& o) {
  PaletteHandle palette;
  CLI_TRY(bcseg_palette_parse(o.palette.c_str(), palette.out()));
  MaskHandle pred;
  CLI_TRY(bcseg_mask_load(o.pred.c_str(), palette, pred.out()));
  MaskHandle truth;
  CLI_TRY(bcseg_mask_load(o.truth.c_str(), palette, truth.out()));
  ReportHandle report;
  CLI_TRY(bcseg_evaluate(pred, truth, report.out()));

  print_report(report);
  ApiString csv;
  csv.s = bcseg_report_csv(report);
  if (int rc = write_or_fail(o.output, csv.s); rc != 0) return rc;

  json options{{"pred", o.pred},
               {"truth", o.truth},
               {"palette", o.palette},
               {"output", o.output}};
  json results{{"accuracy", bcseg_report_accuracy(report)},
               {"kappa", bcseg_report_kappa(report)}};
  const std::string manifest =
      o.manifest.empty() ? o.output + ".manifest.json" : o.manifest;
  return write_manifest(manifest, "evaluate", std::move(options),
                        std::move(results));
}

/* ---- sweep ---- */

struct SweepOpts {
  std::string input;
  std::string mask;
  std::string palette = "0=0;255=1";
  std::string output;
  std::string plot_data;
  std::string grid = "-1:5:61";
  double shift = 1.0;
  std::string range = "0:255";
  FitFlags fit;
  ClassifierFlags classifier;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string manifest;
};

int run_sweep_cmd(const SweepOpts& o) {
  std::vector<double> grid;
  if (!parse_grid(o.grid, grid)) {
    return usage_error("--grid wants lo:hi:count or a single value, got '" +
                       o.grid + "'");
  }
  double g_min = 0.0, g_max = 0.0;
  if (!parse_pair(o.range, g_min, g_max)) {
    return usage_error("--range wants min:max, got '" + o.range + "'");
  }
  bcseg_fit_options fit_options;
  if (int rc = o.fit.resolve(o.seed, o.threads, fit_options); rc != 0) {
    return rc;
  }
  bcseg_train_options train_options;
  o.classifier.resolve(o.seed, o.threads, train_options);

  GrayHandle img;
  CLI_TRY(bcseg_gray_load(o.input.c_str(), img.out()));
  PaletteHandle palette;
  CLI_TRY(bcseg_palette_parse(o.palette.c_str(), palette.out()));
  MaskHandle truth;
  CLI_TRY(bcseg_mask_load(o.mask.c_str(), palette, truth.out()));

  SweepHandle sweep;
  CLI_TRY(bcseg_sweep_run(img, truth, grid.data(), grid.size(), o.shift,
                          g_min, g_max, &train_options, &fit_options,
                          sweep.out()));

  std::printf("rows %zu\n", bcseg_sweep_num_rows(sweep));
  double value = 0.0;
  json results;
  if (bcseg_sweep_argmax_kappa(sweep, &value) == 1) {
    std::printf("argmax-kappa lambda %s\n", fmt(value).c_str());
    results["argmax_kappa_lambda"] = value;
  } else {
    std::printf("argmax-kappa unavailable (no grid point succeeded)\n");
    results["argmax_kappa_lambda"] = nullptr;
  }
  if (bcseg_sweep_argmax_precision(sweep, &value) == 1) {
    std::printf("argmax-precision lambda %s\n", fmt(value).c_str());
    results["argmax_precision_lambda"] = value;
  } else {
    std::printf("argmax-precision unavailable (no grid point succeeded)\n");
    results["argmax_precision_lambda"] = nullptr;
  }
  if (bcseg_sweep_mle_lambda(sweep, &value) == 1) {
    std::printf("mle lambda %s\n", fmt(value).c_str());
    results["mle_lambda"] = value;
  } else {
    std::printf("mle lambda unavailable (likelihood fit failed)\n");
    results["mle_lambda"] = nullptr;
  }

  ApiString csv;
  csv.s = bcseg_sweep_csv(sweep);
  if (int rc = write_or_fail(o.output, csv.s); rc != 0) return rc;
  ApiString annotations;
  annotations.s = bcseg_sweep_annotations_json(sweep);
  const std::string annotations_path = o.output + ".annotations.json";
  if (int rc = write_or_fail(annotations_path, annotations.s); rc != 0) {
    return rc;
  }
  if (!o.plot_data.empty()) {
    ApiString plot;
    plot.s = bcseg_sweep_plot_csv(sweep);
    if (int rc = write_or_fail(o.plot_data, plot.s); rc != 0) return rc;
  }

  json options{{"input", o.input},   {"mask", o.mask},
               {"palette", o.palette}, {"output", o.output},
               {"plot-data", o.plot_data}, {"grid", o.grid},
               {"shift", o.shift},   {"range", o.range},
               {"seed", o.seed},     {"threads", o.threads}};
  options.update(o.fit.to_json());
  options.update(o.classifier.to_json());
  const std::string manifest =
      o.manifest.empty() ? o.output + ".manifest.json" : o.manifest;
  return write_manifest(manifest, "sweep", std::move(options),
                        std::move(results));
}

/* ---- synth ---- */

struct SynthOpts {
  std::string kind;
  int width = 256;
  int height = 256;
  std::string output;
  std::string mask_output;
  std::string palette = "0=0;255=1";
  // Kind-specific parameters; unset ones fall back to the kind's default.
  std::optional<double> mu_log;
  std::optional<double> sigma_log;
  std::optional<double> mean;
  std::optional<double> sigma;
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<double> shift;
  std::optional<double> bg_mu_log;
  std::optional<double> fg_mu_log;
  std::optional<double> fg_fraction;
  std::optional<int> num_disks;
  std::uint64_t seed = 1;
  std::string manifest;
};

int run_synth(const SynthOpts& o) {
  GrayHandle img;
  MaskHandle mask;
  json params;
  if (o.kind == "lognormal") {
    const double mu_log = o.mu_log.value_or(4.0);
    const double sigma_log = o.sigma_log.value_or(0.3);
    CLI_TRY(bcseg_synth_lognormal(o.width, o.height, mu_log, sigma_log,
                                  o.seed, img.out()));
    params = {{"mu-log", mu_log}, {"sigma-log", sigma_log}};
  } else if (o.kind == "normal") {
    const double mean = o.mean.value_or(128.0);
    const double sigma = o.sigma.value_or(5.0);
    CLI_TRY(bcseg_synth_normal(o.width, o.height, mean, sigma, o.seed,
                               img.out()));
    params = {{"mean", mean}, {"sigma", sigma}};
  } else if (o.kind == "boxcox-normal") {
    const double lambda = o.lambda.value_or(0.5);
    const double mu = o.mu.value_or(3.0);
    const double sigma = o.sigma.value_or(0.1);
    const double shift = o.shift.value_or(0.0);
    CLI_TRY(bcseg_synth_boxcox_normal(o.width, o.height, lambda, mu, sigma,
                                      shift, o.seed, img.out()));
    params = {{"lambda", lambda}, {"mu", mu}, {"sigma", sigma},
              {"shift", shift}};
  } else if (o.kind == "two-class") {
    if (o.mask_output.empty()) {
      return usage_error("--mask-output is required for two-class scenes");
    }
    const double bg_mu_log = o.bg_mu_log.value_or(4.787);
    const double fg_mu_log = o.fg_mu_log.value_or(3.401);
    const double sigma_log = o.sigma_log.value_or(0.5);
    const double fg_fraction = o.fg_fraction.value_or(0.08);
    const int num_disks = o.num_disks.value_or(3);
    CLI_TRY(bcseg_synth_two_class(o.width, o.height, bg_mu_log, fg_mu_log,
                                  sigma_log, fg_fraction, num_disks, o.seed,
                                  img.out(), mask.out()));
    params = {{"bg-mu-log", bg_mu_log},
              {"fg-mu-log", fg_mu_log},
              {"sigma-log", sigma_log},
              {"fg-fraction", fg_fraction},
              {"num-disks", num_disks}};
  } else {
    return usage_error("--kind wants lognormal, normal, boxcox-normal, or "
                       "two-class, got '" + o.kind + "'");
  }

  CLI_TRY(bcseg_gray_save(img, o.output.c_str()));
  std::printf("wrote %s\n", o.output.c_str());
  if (mask.ptr != nullptr) {
    PaletteHandle palette;
    CLI_TRY(bcseg_palette_parse(o.palette.c_str(), palette.out()));
    CLI_TRY(bcseg_mask_save(mask, palette, o.mask_output.c_str()));
    std::printf("wrote %s\n", o.mask_output.c_str());
  }

  json options{{"kind", o.kind},       {"width", o.width},
               {"height", o.height},   {"output", o.output},
               {"mask-output", o.mask_output}, {"palette", o.palette},
               {"seed", o.seed}};
  options.update(params);
  const std::string manifest =
      o.manifest.empty() ? o.output + ".manifest.json" : o.manifest;
  return write_manifest(manifest, "synth", std::move(options), json::object());
}

void attach_optional(CLI::App* cmd, const char* name,
                     std::optional<double>& slot, const char* help) {
  cmd->add_option_function<double>(
      name, [&slot](const double& v) { slot = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Box-Cox prefiltered pixel segmentation"};
  app.set_config("--config", "",
                 "read defaults from a key=value file; command options live "
                 "in a [command] section");
  app.require_subcommand(1);

  TransformOpts transform;
  auto* t = app.add_subcommand(
      "transform", "Box-Cox transform an image and stretch the contrast");
  t->add_option("--input", transform.input, "source image (PNG/PGM/PPM)")
      ->required();
  t->add_option("--output", transform.output, "destination image")->required();
  t->add_option("--lambda", transform.lambda,
                "exponent, a number or 'mle' to estimate it")
      ->capture_default_str();
  t->add_option("--shift", transform.shift, "offset c added before the power")
      ->capture_default_str();
  t->add_option("--range", transform.range, "output range min:max")
      ->capture_default_str();
  transform.fit.attach(t);
  t->add_option("--seed", transform.seed, "seed for all randomness")
      ->capture_default_str();
  t->add_option("--threads", transform.threads, "worker threads")
      ->capture_default_str();
  t->add_option("--manifest", transform.manifest,
                "manifest path (default: <output>.manifest.json)");

  EstimateOpts estimate;
  auto* e = app.add_subcommand("estimate-lambda",
                               "maximum-likelihood Box-Cox exponent");
  e->add_option("--input", estimate.input, "source image")->required();
  e->add_option("--output", estimate.output, "grid trace CSV path")
      ->required();
  e->add_option("--shift", estimate.shift, "offset c added before the power")
      ->capture_default_str();
  estimate.fit.attach(e);
  e->add_option("--seed", estimate.seed, "seed for all randomness")
      ->capture_default_str();
  e->add_option("--threads", estimate.threads, "worker threads")
      ->capture_default_str();
  e->add_option("--manifest", estimate.manifest,
                "manifest path (default: <output>.manifest.json)");

  SegmentOpts segment;
  auto* s = app.add_subcommand(
      "segment", "train a pixel classifier on a labeled image and apply it");
  s->add_option("--input", segment.input, "source image")->required();
  s->add_option("--mask", segment.mask, "ground-truth label image")
      ->required();
  s->add_option("--palette", segment.palette,
                "color=label mapping, e.g. 0=0;255=1")
      ->capture_default_str();
  s->add_option("--output", segment.output, "predicted mask path")
      ->required();
  s->add_option("--prefilter", segment.prefilter, "on or off")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  s->add_option("--lambda", segment.lambda,
                "prefilter exponent, a number or 'mle'")
      ->capture_default_str();
  s->add_option("--shift", segment.shift, "prefilter offset c")
      ->capture_default_str();
  s->add_option("--range", segment.range, "prefilter output range min:max")
      ->capture_default_str();
  segment.fit.attach(s);
  segment.classifier.attach(s);
  s->add_option("--report", segment.report_path, "also write the report CSV");
  s->add_option("--save-model", segment.model_path,
                "persist the trained model as JSON");
  s->add_option("--seed", segment.seed, "seed for all randomness")
      ->capture_default_str();
  s->add_option("--threads", segment.threads, "worker threads")
      ->capture_default_str();
  s->add_option("--manifest", segment.manifest,
                "manifest path (default: <output>.manifest.json)");

  EvaluateOpts evaluate;
  auto* v = app.add_subcommand("evaluate",
                               "compare a predicted mask against the truth");
  v->add_option("--pred", evaluate.pred, "predicted mask")->required();
  v->add_option("--truth", evaluate.truth, "ground-truth mask")->required();
  v->add_option("--palette", evaluate.palette,
                "color=label mapping, e.g. 0=0;255=1")
      ->capture_default_str();
  v->add_option("--output", evaluate.output, "report CSV path")->required();
  v->add_option("--manifest", evaluate.manifest,
                "manifest path (default: <output>.manifest.json)");

  SweepOpts sweep;
  auto* w = app.add_subcommand(
      "sweep", "segmentation quality across a grid of Box-Cox exponents");
  w->add_option("--input", sweep.input, "source image")->required();
  w->add_option("--mask", sweep.mask, "ground-truth label image")->required();
  w->add_option("--palette", sweep.palette,
                "color=label mapping, e.g. 0=0;255=1")
      ->capture_default_str();
  w->add_option("--output", sweep.output, "sweep CSV path")->required();
  w->add_option("--plot-data", sweep.plot_data,
                "also write a long-format lambda,metric,value CSV");
  w->add_option("--grid", sweep.grid, "lambda grid, lo:hi:count or one value")
      ->capture_default_str();
  w->add_option("--shift", sweep.shift, "prefilter offset c")
      ->capture_default_str();
  w->add_option("--range", sweep.range, "prefilter output range min:max")
      ->capture_default_str();
  sweep.fit.attach(w);
  sweep.classifier.attach(w);
  w->add_option("--seed", sweep.seed, "seed for all randomness")
      ->capture_default_str();
  w->add_option("--threads", sweep.threads, "worker threads")
      ->capture_default_str();
  w->add_option("--manifest", sweep.manifest,
                "manifest path (default: <output>.manifest.json)");

  SynthOpts synth;
  auto* y = app.add_subcommand("synth", "generate seeded synthetic scenes");
  y->add_option("--kind", synth.kind,
                "lognormal, normal, boxcox-normal, or two-class")
      ->required();
  y->add_option("--width", synth.width, "image width")->capture_default_str();
  y->add_option("--height", synth.height, "image height")
      ->capture_default_str();
  y->add_option("--output", synth.output, "image path")->required();
  y->add_option("--mask-output", synth.mask_output,
                "label mask path (two-class)");
  y->add_option("--palette", synth.palette, "palette for the mask export")
      ->capture_default_str();
  attach_optional(y, "--mu-log", synth.mu_log, "log-scale mean (lognormal)");
  attach_optional(y, "--sigma-log", synth.sigma_log,
                  "log-scale deviation (lognormal: 0.3, two-class: 0.5)");
  attach_optional(y, "--mean", synth.mean, "mean (normal)");
  attach_optional(y, "--sigma", synth.sigma,
                  "deviation (normal: 5, boxcox-normal: 0.1)");
  attach_optional(y, "--lambda", synth.lambda,
                  "generating exponent (boxcox-normal)");
  attach_optional(y, "--mu", synth.mu,
                  "transformed-scale mean (boxcox-normal)");
  attach_optional(y, "--shift", synth.shift,
                  "generating offset (boxcox-normal)");
  attach_optional(y, "--bg-mu-log", synth.bg_mu_log,
                  "background log-mean (two-class)");
  attach_optional(y, "--fg-mu-log", synth.fg_mu_log,
                  "foreground log-mean (two-class)");
  attach_optional(y, "--fg-fraction", synth.fg_fraction,
                  "minority area share (two-class)");
  y->add_option_function<int>(
      "--num-disks", [&synth](const int& n) { synth.num_disks = n; },
      "disk count (two-class)");
  y->add_option("--seed", synth.seed, "seed for all randomness")
      ->capture_default_str();
  y->add_option("--manifest", synth.manifest,
                "manifest path (default: <output>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  if (t->parsed()) return run_transform(transform);
  if (e->parsed()) return run_estimate(estimate);
  if (s->parsed()) return run_segment(segment);
  if (v->parsed()) return run_evaluate(evaluate);
  if (w->parsed()) return run_sweep_cmd(sweep);
  return run_synth(synth);
}
