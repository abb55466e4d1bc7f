#include "bcseg/bcseg.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "classifier.hpp"
#include "error.hpp"
#include "image.hpp"
#include "lambda_fit.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "raster_io.hpp"
#include "sweep.hpp"
#include "synth.hpp"
#include "text_num.hpp"
#include "transforms.hpp"

struct bcseg_gray {
  bcseg::GrayImage img;
};
struct bcseg_mask {
  bcseg::LabelMask mask;
};
struct bcseg_palette {
  bcseg::Palette palette;
};
struct bcseg_lambda_fit {
  bcseg::LambdaEstimate estimate;
};
struct bcseg_model {
  bcseg::ClassifierModel model;
};
struct bcseg_report {
  bcseg::ConfusionMatrix cm;
  bcseg::MetricReport report;
};
struct bcseg_sweep {
  bcseg::SweepResult result;
};

namespace {

thread_local std::string t_last_error;

// Runs the body and folds any failure into a status code plus the
// thread-local message. Nothing may escape an extern "C" frame.
template <typename F>
int guarded(F&& body) noexcept {
  try {
    body();
    return BCSEG_OK;
  } catch (const bcseg::Error& e) {
    t_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return BCSEG_ERR_NUMERIC;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return BCSEG_ERR_NUMERIC;
  } catch (...) {
    t_last_error = "unknown failure";
    return BCSEG_ERR_NUMERIC;
  }
}

int null_argument(const char* what) {
  t_last_error = std::string(what) + " must not be null";
  return BCSEG_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Raw buffers become width-n single-row vectors; IntensityVector's own
// checks catch non-finite entries.
bcseg::IntensityVector values_vector(const double* y, size_t n) {
  if (n > static_cast<size_t>(std::numeric_limits<int>::max())) {
    bcseg::fail(bcseg::ErrorCode::invalid_argument,
                "vector length exceeds the supported maximum");
  }
  return bcseg::IntensityVector(std::vector<double>(y, y + n),
                                static_cast<int>(n), 1);
}

bcseg::LambdaFitOptions to_fit_options(const bcseg_fit_options* opts) {
  bcseg::LambdaFitOptions fit;
  if (opts == nullptr) return fit;
  fit.bracket_lo = opts->bracket_lo;
  fit.bracket_hi = opts->bracket_hi;
  fit.grid_points = opts->grid_points;
  fit.tol = opts->tol;
  fit.subsample_cap = static_cast<std::size_t>(opts->subsample_cap);
  fit.subsample_seed = opts->subsample_seed;
  fit.threads = opts->threads;
  return fit;
}

bcseg::ClassifierConfig to_classifier_config(const bcseg_train_options& o) {
  using bcseg::fail;
  if (o.classifier == nullptr || o.features == nullptr ||
      o.svm_mode == nullptr || o.svm_kernel == nullptr) {
    fail(bcseg::ErrorCode::invalid_argument,
         "classifier option strings must not be null");
  }
  bcseg::ClassifierConfig config;
  config.kind = bcseg::parse_classifier_kind(o.classifier);
  config.featurizer.mode = bcseg::parse_featurizer_mode(o.features);
  config.featurizer.window = o.window;
  if (o.ridge >= 0.0) config.ridge = o.ridge;
  config.knn_k = o.knn_k;
  config.svm.mode = bcseg::parse_svm_mode(o.svm_mode);
  config.svm.kernel.kind = bcseg::parse_kernel_kind(o.svm_kernel);
  config.svm.kernel.gamma = o.svm_gamma;
  config.svm.kernel.coef0 = o.svm_coef0;
  config.svm.kernel.degree = o.svm_degree;
  config.svm.cost = o.svm_cost;
  config.svm.epochs = o.svm_epochs;
  config.svm.seed = o.seed;
  config.svm.dual_cap = static_cast<std::size_t>(o.svm_dual_cap);
  config.svm.dual_tol = o.svm_dual_tol;
  return config;
}

}  // namespace

extern "C" {

const char* bcseg_status_name(int status) {
  switch (status) {
    case BCSEG_OK: return "ok";
    case BCSEG_ERR_IO: return "io";
    case BCSEG_ERR_FORMAT: return "format";
    case BCSEG_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case BCSEG_ERR_DOMAIN: return "domain";
    case BCSEG_ERR_DEGENERATE: return "degenerate";
    case BCSEG_ERR_NUMERIC: return "numeric";
  }
  return "unknown";
}

const char* bcseg_last_error(void) { return t_last_error.c_str(); }

const char* bcseg_version(void) { return "1.0.0"; }

void bcseg_string_free(char* s) { delete[] s; }

int bcseg_format_double(double value, char* buf, size_t cap) {
  if (buf == nullptr) return null_argument("buf");
  return guarded([&] {
    const std::string s = bcseg::format_double(value);
    if (s.size() + 1 > cap) {
      bcseg::fail(bcseg::ErrorCode::invalid_argument,
                  "buffer too small for formatted double");
    }
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

/* ---- grayscale images ---- */

int bcseg_gray_load(const char* path, bcseg_gray** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new bcseg_gray{bcseg::load_gray(path)}; });
}

int bcseg_gray_save(const bcseg_gray* img, const char* path) {
  if (img == nullptr) return null_argument("img");
  if (path == nullptr) return null_argument("path");
  return guarded([&] { bcseg::save_gray(img->img, path); });
}

int bcseg_gray_create(int width, int height, const double* pixels,
                      bcseg_gray** out) {
  if (pixels == nullptr) return null_argument("pixels");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    if (width <= 0 || height <= 0) {
      bcseg::fail(bcseg::ErrorCode::invalid_argument,
                  "image dimensions must be positive");
    }
    std::vector<double> values(
        pixels, pixels + static_cast<std::size_t>(width) * height);
    *out = new bcseg_gray{bcseg::GrayImage(width, height, std::move(values))};
  });
}

int bcseg_gray_width(const bcseg_gray* img) { return img->img.width(); }
int bcseg_gray_height(const bcseg_gray* img) { return img->img.height(); }

const double* bcseg_gray_pixels(const bcseg_gray* img) {
  return img->img.values().data();
}

void bcseg_gray_free(bcseg_gray* img) { delete img; }

/* ---- masks and palettes ---- */

int bcseg_palette_parse(const char* text, bcseg_palette** out) {
  if (text == nullptr) return null_argument("text");
  if (out == nullptr) return null_argument("out");
  return guarded(
      [&] { *out = new bcseg_palette{bcseg::Palette::parse(text)}; });
}

int bcseg_palette_num_classes(const bcseg_palette* pal) {
  return pal->palette.num_classes();
}

void bcseg_palette_free(bcseg_palette* pal) { delete pal; }

int bcseg_mask_load(const char* path, const bcseg_palette* pal,
                    bcseg_mask** out) {
  if (path == nullptr) return null_argument("path");
  if (pal == nullptr) return null_argument("pal");
  if (out == nullptr) return null_argument("out");
  return guarded(
      [&] { *out = new bcseg_mask{bcseg::load_mask(path, pal->palette)}; });
}

int bcseg_mask_save(const bcseg_mask* mask, const bcseg_palette* pal,
                    const char* path) {
  if (mask == nullptr) return null_argument("mask");
  if (pal == nullptr) return null_argument("pal");
  if (path == nullptr) return null_argument("path");
  return guarded([&] { bcseg::save_mask(mask->mask, pal->palette, path); });
}

int bcseg_mask_create(int width, int height, int num_classes,
                      const int32_t* labels, bcseg_mask** out) {
  if (labels == nullptr) return null_argument("labels");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    if (width <= 0 || height <= 0) {
      bcseg::fail(bcseg::ErrorCode::invalid_argument,
                  "mask dimensions must be positive");
    }
    std::vector<std::int32_t> values(
        labels, labels + static_cast<std::size_t>(width) * height);
    *out = new bcseg_mask{
        bcseg::LabelMask(width, height, num_classes, std::move(values))};
  });
}

int bcseg_mask_width(const bcseg_mask* mask) { return mask->mask.width(); }
int bcseg_mask_height(const bcseg_mask* mask) { return mask->mask.height(); }

int bcseg_mask_num_classes(const bcseg_mask* mask) {
  return mask->mask.num_classes();
}

const int32_t* bcseg_mask_labels(const bcseg_mask* mask) {
  return mask->mask.labels().data();
}

void bcseg_mask_free(bcseg_mask* mask) { delete mask; }

/* ---- value transforms ---- */

int bcseg_boxcox_values(const double* y, size_t n, double lambda, double shift,
                        int threads, double* out) {
  if (y == nullptr) return null_argument("y");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const bcseg::IntensityVector r =
        bcseg::boxcox(values_vector(y, n), {lambda, shift}, threads);
    std::memcpy(out, r.values().data(), n * sizeof(double));
  });
}

int bcseg_inverse_boxcox_values(const double* v, size_t n, double lambda,
                                double shift, int threads, double* out) {
  if (v == nullptr) return null_argument("v");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const bcseg::IntensityVector r =
        bcseg::inverse_boxcox(values_vector(v, n), {lambda, shift}, threads);
    std::memcpy(out, r.values().data(), n * sizeof(double));
  });
}

int bcseg_stretch_values(const double* y, size_t n, double g_min, double g_max,
                         double* out) {
  if (y == nullptr) return null_argument("y");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const bcseg::IntensityVector r =
        bcseg::stretch(values_vector(y, n), {g_min, g_max});
    std::memcpy(out, r.values().data(), n * sizeof(double));
  });
}

int bcseg_gamma(const bcseg_gray* img, double gain, double gamma,
                bcseg_gray** out) {
  if (img == nullptr) return null_argument("img");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new bcseg_gray{bcseg::gamma_correct(img->img, {gain, gamma})};
  });
}

/* ---- maximum-likelihood lambda ---- */

void bcseg_fit_options_init(bcseg_fit_options* opts) {
  const bcseg::LambdaFitOptions d;
  opts->bracket_lo = d.bracket_lo;
  opts->bracket_hi = d.bracket_hi;
  opts->grid_points = d.grid_points;
  opts->tol = d.tol;
  opts->subsample_cap = static_cast<uint64_t>(d.subsample_cap);
  opts->subsample_seed = d.subsample_seed;
  opts->threads = d.threads;
}

int bcseg_fit_lambda(const bcseg_gray* img, double shift,
                     const bcseg_fit_options* opts, bcseg_lambda_fit** out) {
  if (img == nullptr) return null_argument("img");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new bcseg_lambda_fit{
        bcseg::fit_lambda(bcseg::vectorize(img->img), shift,
                          to_fit_options(opts))};
  });
}

int bcseg_fit_lambda_values(const double* y, size_t n, double shift,
                            const bcseg_fit_options* opts,
                            bcseg_lambda_fit** out) {
  if (y == nullptr) return null_argument("y");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new bcseg_lambda_fit{
        bcseg::fit_lambda(values_vector(y, n), shift, to_fit_options(opts))};
  });
}

double bcseg_lambda_fit_lambda(const bcseg_lambda_fit* fit) {
  return fit->estimate.lambda_hat;
}

double bcseg_lambda_fit_sigma2(const bcseg_lambda_fit* fit) {
  return fit->estimate.sigma2_hat;
}

double bcseg_lambda_fit_loglik(const bcseg_lambda_fit* fit) {
  return fit->estimate.loglik_at_max;
}

size_t bcseg_lambda_fit_n_used(const bcseg_lambda_fit* fit) {
  return fit->estimate.n_used;
}

size_t bcseg_lambda_fit_theta_len(const bcseg_lambda_fit* fit) {
  return fit->estimate.theta_hat.size();
}

double bcseg_lambda_fit_theta(const bcseg_lambda_fit* fit, size_t i) {
  return fit->estimate.theta_hat[i];
}

char* bcseg_lambda_fit_grid_csv(const bcseg_lambda_fit* fit) {
  return copy_string(bcseg::grid_trace_csv(fit->estimate));
}

void bcseg_lambda_fit_free(bcseg_lambda_fit* fit) { delete fit; }

/* ---- prefilter pipeline ---- */

void bcseg_prefilter_params_init(bcseg_prefilter_params* params) {
  params->lambda = std::numeric_limits<double>::quiet_NaN();
  params->shift = 1.0;
  params->g_min = 0.0;
  params->g_max = 255.0;
  params->threads = 1;
  bcseg_fit_options_init(&params->fit);
}

int bcseg_prefilter(const bcseg_gray* img, const bcseg_prefilter_params* params,
                    bcseg_gray** out_img, bcseg_lambda_fit** out_fit) {
  if (img == nullptr) return null_argument("img");
  if (params == nullptr) return null_argument("params");
  if (out_img == nullptr) return null_argument("out_img");
  if (out_fit != nullptr) *out_fit = nullptr;
  return guarded([&] {
    bcseg::PrefilterOptions opts;
    if (!std::isnan(params->lambda)) opts.lambda = params->lambda;
    opts.shift = params->shift;
    opts.range = {params->g_min, params->g_max};
    opts.fit = to_fit_options(&params->fit);
    opts.threads = params->threads;
    bcseg::PrefilterResult result = bcseg::prefilter_pipeline(img->img, opts);
    if (out_fit != nullptr && result.estimate.has_value()) {
      *out_fit = new bcseg_lambda_fit{std::move(*result.estimate)};
    }
    *out_img = new bcseg_gray{std::move(result.image)};
  });
}

/* ---- classifiers ---- */

void bcseg_train_options_init(bcseg_train_options* opts) {
  const bcseg::ClassifierConfig d;
  opts->classifier = "lda";
  opts->features = "intensity";
  opts->window = d.featurizer.window;
  opts->ridge = -1.0;
  opts->knn_k = d.knn_k;
  opts->svm_mode = "linear-primal";
  opts->svm_kernel = "linear";
  opts->svm_cost = d.svm.cost;
  opts->svm_gamma = 0.0;
  opts->svm_coef0 = d.svm.kernel.coef0;
  opts->svm_degree = d.svm.kernel.degree;
  opts->svm_epochs = d.svm.epochs;
  opts->svm_dual_cap = static_cast<uint64_t>(d.svm.dual_cap);
  opts->svm_dual_tol = d.svm.dual_tol;
  opts->train_fraction = 0.5;
  opts->seed = 1;
  opts->threads = 1;
}

int bcseg_train(const bcseg_gray* img, const bcseg_mask* truth,
                const bcseg_train_options* opts, bcseg_model** out,
                double* out_fit_seconds) {
  if (img == nullptr) return null_argument("img");
  if (truth == nullptr) return null_argument("truth");
  if (opts == nullptr) return null_argument("opts");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    bcseg::TrainOutcome outcome = bcseg::train_on_image(
        img->img, truth->mask, to_classifier_config(*opts),
        opts->train_fraction, opts->seed, opts->threads);
    if (out_fit_seconds != nullptr) *out_fit_seconds = outcome.fit_seconds;
    *out = new bcseg_model{std::move(outcome.model)};
  });
}

int bcseg_segment(const bcseg_gray* img, const bcseg_model* model, int threads,
                  bcseg_mask** out) {
  if (img == nullptr) return null_argument("img");
  if (model == nullptr) return null_argument("model");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new bcseg_mask{bcseg::segment_image(img->img, model->model,
                                               threads)};
  });
}

int bcseg_model_save(const bcseg_model* model, const char* path) {
  if (model == nullptr) return null_argument("model");
  if (path == nullptr) return null_argument("path");
  return guarded([&] { bcseg::save_model(model->model, path); });
}

int bcseg_model_load(const char* path, bcseg_model** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new bcseg_model{bcseg::load_model(path)}; });
}

const char* bcseg_model_kind(const bcseg_model* model) {
  return bcseg::classifier_kind_name(model->model.kind);
}

int bcseg_model_num_classes(const bcseg_model* model) {
  return model->model.num_classes;
}

int bcseg_model_converged(const bcseg_model* model) {
  return model->model.converged ? 1 : 0;
}

void bcseg_model_free(bcseg_model* model) { delete model; }

/* ---- evaluation ---- */

int bcseg_evaluate(const bcseg_mask* pred, const bcseg_mask* truth,
                   bcseg_report** out) {
  if (pred == nullptr) return null_argument("pred");
  if (truth == nullptr) return null_argument("truth");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    bcseg::ConfusionMatrix cm = bcseg::confusion(pred->mask, truth->mask);
    bcseg::MetricReport report = bcseg::scalar_metrics(cm);
    *out = new bcseg_report{std::move(cm), std::move(report)};
  });
}

int bcseg_report_num_classes(const bcseg_report* r) {
  return r->report.num_classes;
}

double bcseg_report_accuracy(const bcseg_report* r) {
  return r->report.accuracy;
}

double bcseg_report_kappa(const bcseg_report* r) { return r->report.kappa; }

double bcseg_report_macro_precision(const bcseg_report* r) {
  return r->report.macro_precision;
}

double bcseg_report_macro_recall(const bcseg_report* r) {
  return r->report.macro_recall;
}

double bcseg_report_macro_f1(const bcseg_report* r) {
  return r->report.macro_f1;
}

// Out-of-range class indices answer NaN / 0 rather than reading past the
// per-class vectors; a C caller has no exception to catch.
static bool class_in_range(const bcseg_report* r, int k) {
  return k >= 0 && k < r->report.num_classes;
}

double bcseg_report_precision(const bcseg_report* r, int k) {
  return class_in_range(r, k) ? r->report.precision[k] : std::nan("");
}

double bcseg_report_recall(const bcseg_report* r, int k) {
  return class_in_range(r, k) ? r->report.recall[k] : std::nan("");
}

double bcseg_report_f1(const bcseg_report* r, int k) {
  return class_in_range(r, k) ? r->report.f1[k] : std::nan("");
}

double bcseg_report_iou(const bcseg_report* r, int k) {
  return class_in_range(r, k) ? r->report.iou[k] : std::nan("");
}

double bcseg_report_dice(const bcseg_report* r, int k) {
  return class_in_range(r, k) ? r->report.dice[k] : std::nan("");
}

int bcseg_report_precision_undefined(const bcseg_report* r, int k) {
  return class_in_range(r, k) && r->report.precision_zero_denominator[k] ? 1
                                                                         : 0;
}

int bcseg_report_recall_undefined(const bcseg_report* r, int k) {
  return class_in_range(r, k) && r->report.recall_zero_denominator[k] ? 1 : 0;
}

int bcseg_report_f1_undefined(const bcseg_report* r, int k) {
  return class_in_range(r, k) && r->report.f1_zero_denominator[k] ? 1 : 0;
}

uint64_t bcseg_report_confusion(const bcseg_report* r, int truth, int pred) {
  if (truth < 0 || pred < 0 || truth >= r->cm.num_classes ||
      pred >= r->cm.num_classes) {
    return 0;
  }
  return r->cm.at(truth, pred);
}

char* bcseg_report_csv(const bcseg_report* r) {
  return copy_string(bcseg::report_csv(r->report, r->cm));
}

void bcseg_report_free(bcseg_report* r) { delete r; }

/* ---- lambda sweep ---- */

int bcseg_sweep_run(const bcseg_gray* img, const bcseg_mask* truth,
                    const double* grid, size_t grid_len, double shift,
                    double g_min, double g_max,
                    const bcseg_train_options* classifier,
                    const bcseg_fit_options* mle, bcseg_sweep** out) {
  if (img == nullptr) return null_argument("img");
  if (truth == nullptr) return null_argument("truth");
  if (grid == nullptr) return null_argument("grid");
  if (classifier == nullptr) return null_argument("classifier");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    bcseg::SweepConfig config;
    config.grid.assign(grid, grid + grid_len);
    config.classifier = to_classifier_config(*classifier);
    config.range = {g_min, g_max};
    config.shift = shift;
    config.train_fraction = classifier->train_fraction;
    config.seed = classifier->seed;
    config.mle = to_fit_options(mle);
    config.threads = classifier->threads;
    *out = new bcseg_sweep{bcseg::run_sweep(img->img, truth->mask, config)};
  });
}

size_t bcseg_sweep_num_rows(const bcseg_sweep* s) {
  return s->result.rows.size();
}

int bcseg_sweep_argmax_kappa(const bcseg_sweep* s, double* out) {
  if (!s->result.argmax_kappa.has_value()) return 0;
  if (out != nullptr) *out = *s->result.argmax_kappa;
  return 1;
}

int bcseg_sweep_argmax_precision(const bcseg_sweep* s, double* out) {
  if (!s->result.argmax_precision.has_value()) return 0;
  if (out != nullptr) *out = *s->result.argmax_precision;
  return 1;
}

int bcseg_sweep_mle_lambda(const bcseg_sweep* s, double* out) {
  if (!s->result.mle_lambda.has_value()) return 0;
  if (out != nullptr) *out = *s->result.mle_lambda;
  return 1;
}

char* bcseg_sweep_csv(const bcseg_sweep* s) {
  return copy_string(bcseg::sweep_to_csv(s->result));
}

char* bcseg_sweep_plot_csv(const bcseg_sweep* s) {
  return copy_string(bcseg::sweep_to_plot_csv(s->result));
}

char* bcseg_sweep_annotations_json(const bcseg_sweep* s) {
  return copy_string(bcseg::sweep_annotations_json(s->result));
}

void bcseg_sweep_free(bcseg_sweep* s) { delete s; }

/* ---- synthetic scenes ---- */

int bcseg_synth_lognormal(int width, int height, double mu_log,
                          double sigma_log, uint64_t seed, bcseg_gray** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new bcseg_gray{
        bcseg::synth_lognormal(width, height, {mu_log, sigma_log}, seed)};
  });
}

int bcseg_synth_normal(int width, int height, double mean, double sigma,
                       uint64_t seed, bcseg_gray** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new bcseg_gray{
        bcseg::synth_normal(width, height, {mean, sigma}, seed)};
  });
}

int bcseg_synth_boxcox_normal(int width, int height, double lambda, double mu,
                              double sigma, double shift, uint64_t seed,
                              bcseg_gray** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    *out = new bcseg_gray{bcseg::synth_boxcox_normal(
        width, height, {lambda, mu, sigma, shift}, seed)};
  });
}

int bcseg_synth_two_class(int width, int height, double bg_mu_log,
                          double fg_mu_log, double sigma_log,
                          double fg_fraction, int num_disks, uint64_t seed,
                          bcseg_gray** out_img, bcseg_mask** out_mask) {
  if (out_img == nullptr) return null_argument("out_img");
  if (out_mask == nullptr) return null_argument("out_mask");
  return guarded([&] {
    bcseg::TwoClassParams params;
    params.bg_mu_log = bg_mu_log;
    params.fg_mu_log = fg_mu_log;
    params.sigma_log = sigma_log;
    params.fg_fraction = fg_fraction;
    params.num_disks = num_disks;
    bcseg::LabeledImage scene =
        bcseg::synth_two_class(width, height, params, seed);
    *out_img = new bcseg_gray{std::move(scene.image)};
    *out_mask = new bcseg_mask{std::move(scene.mask)};
  });
}

} /* extern "C" */
