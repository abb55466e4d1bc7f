/* C interface to the Box-Cox segmentation library.
 *
 * Every fallible call returns a status code (0 on success) and reports
 * results through out-parameters. Objects come back as opaque handles that
 * the caller frees with the matching *_free function. Handles are immutable
 * after creation, so sharing one across threads for reads is safe; the
 * last-error message is per thread.
 */
#ifndef BCSEG_H
#define BCSEG_H

#include <stddef.h>
#include <stdint.h>

#ifndef BCSEG_API
#if defined(_WIN32)
#define BCSEG_API
#else
#define BCSEG_API __attribute__((visibility("default")))
#endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  BCSEG_OK = 0,
  BCSEG_ERR_IO = 1,               /* unreadable or unwritable file */
  BCSEG_ERR_FORMAT = 2,           /* malformed file contents */
  BCSEG_ERR_INVALID_ARGUMENT = 3, /* parameter violates a precondition */
  BCSEG_ERR_DOMAIN = 4,           /* value outside a transform's domain */
  BCSEG_ERR_DEGENERATE = 5,       /* constant data, undefined statistic */
  BCSEG_ERR_NUMERIC = 6           /* overflow or failed convergence */
};

BCSEG_API const char* bcseg_status_name(int status);

/* Message for the most recent failure on the calling thread. Valid until
 * the next failing call on the same thread. */
BCSEG_API const char* bcseg_last_error(void);

BCSEG_API const char* bcseg_version(void);

/* Frees strings returned by the *_csv / *_json functions. */
BCSEG_API void bcseg_string_free(char* s);

/* Shortest decimal form that parses back to the identical double. Fails
 * with BCSEG_ERR_INVALID_ARGUMENT when the buffer is too small. */
BCSEG_API int bcseg_format_double(double value, char* buf, size_t cap);

typedef struct bcseg_gray bcseg_gray;       /* grayscale image, double pixels */
typedef struct bcseg_mask bcseg_mask;       /* per-pixel class labels */
typedef struct bcseg_palette bcseg_palette; /* color <-> label mapping */
typedef struct bcseg_lambda_fit bcseg_lambda_fit;
typedef struct bcseg_model bcseg_model;
typedef struct bcseg_report bcseg_report;
typedef struct bcseg_sweep bcseg_sweep;

/* ---- grayscale images ----
 * Pixels are finite doubles >= 0 in row-major order. PNG and PGM/PPM files
 * are accepted; color inputs are reduced to luminance on load. Export
 * quantizes to 8 bits. */

BCSEG_API int bcseg_gray_load(const char* path, bcseg_gray** out);
BCSEG_API int bcseg_gray_save(const bcseg_gray* img, const char* path);
BCSEG_API int bcseg_gray_create(int width, int height, const double* pixels,
                                bcseg_gray** out);
BCSEG_API int bcseg_gray_width(const bcseg_gray* img);
BCSEG_API int bcseg_gray_height(const bcseg_gray* img);
BCSEG_API const double* bcseg_gray_pixels(const bcseg_gray* img);
BCSEG_API void bcseg_gray_free(bcseg_gray* img);

/* ---- label masks and palettes ----
 * A palette maps image colors to class labels 0..K-1. The text form is a
 * semicolon list of color=label entries where a color is either one gray
 * value or r,g,b: "0=0;255=1" or "0,0,0=0;255,0,0=1". The first entry of
 * each class is its representative color on export. */

BCSEG_API int bcseg_palette_parse(const char* text, bcseg_palette** out);
BCSEG_API int bcseg_palette_num_classes(const bcseg_palette* pal);
BCSEG_API void bcseg_palette_free(bcseg_palette* pal);

BCSEG_API int bcseg_mask_load(const char* path, const bcseg_palette* pal,
                              bcseg_mask** out);
BCSEG_API int bcseg_mask_save(const bcseg_mask* mask, const bcseg_palette* pal,
                              const char* path);
/* labels: row-major, each in [0, num_classes). */
BCSEG_API int bcseg_mask_create(int width, int height, int num_classes,
                                const int32_t* labels, bcseg_mask** out);
BCSEG_API int bcseg_mask_width(const bcseg_mask* mask);
BCSEG_API int bcseg_mask_height(const bcseg_mask* mask);
BCSEG_API int bcseg_mask_num_classes(const bcseg_mask* mask);
BCSEG_API const int32_t* bcseg_mask_labels(const bcseg_mask* mask);
BCSEG_API void bcseg_mask_free(bcseg_mask* mask);

/* ---- value transforms ----
 * In-place on caller buffers; out may alias y. The Box-Cox transform is
 * ((y+c)^lambda - 1)/lambda with the exact log(y+c) limit at lambda = 0.
 * It needs y + c > 0 everywhere; the inverse needs lambda*v + 1 > 0. */

BCSEG_API int bcseg_boxcox_values(const double* y, size_t n, double lambda,
                                  double shift, int threads, double* out);
BCSEG_API int bcseg_inverse_boxcox_values(const double* v, size_t n,
                                          double lambda, double shift,
                                          int threads, double* out);
/* Affine map sending min(y) to g_min and max(y) to g_max exactly. Constant
 * input is a degenerate-contrast error. */
BCSEG_API int bcseg_stretch_values(const double* y, size_t n, double g_min,
                                   double g_max, double* out);
/* g = gain * f^gamma per pixel; gain and gamma must be positive. */
BCSEG_API int bcseg_gamma(const bcseg_gray* img, double gain, double gamma,
                          bcseg_gray** out);

/* ---- maximum-likelihood lambda ---- */

typedef struct bcseg_fit_options {
  double bracket_lo; /* search bracket, default [-3, 5] */
  double bracket_hi;
  int grid_points;     /* coarse scan size, default 61 */
  double tol;          /* refinement bracket width, default 1e-4 */
  uint64_t subsample_cap;  /* pixels beyond this are subsampled; 0 = never */
  uint64_t subsample_seed;
  int threads;
} bcseg_fit_options;

BCSEG_API void bcseg_fit_options_init(bcseg_fit_options* opts);

/* opts may be NULL for defaults. Degenerate (constant) data and a maximum
 * on the bracket edge are errors. */
BCSEG_API int bcseg_fit_lambda(const bcseg_gray* img, double shift,
                               const bcseg_fit_options* opts,
                               bcseg_lambda_fit** out);
BCSEG_API int bcseg_fit_lambda_values(const double* y, size_t n, double shift,
                                      const bcseg_fit_options* opts,
                                      bcseg_lambda_fit** out);

BCSEG_API double bcseg_lambda_fit_lambda(const bcseg_lambda_fit* fit);
BCSEG_API double bcseg_lambda_fit_sigma2(const bcseg_lambda_fit* fit);
BCSEG_API double bcseg_lambda_fit_loglik(const bcseg_lambda_fit* fit);
BCSEG_API size_t bcseg_lambda_fit_n_used(const bcseg_lambda_fit* fit);
BCSEG_API size_t bcseg_lambda_fit_theta_len(const bcseg_lambda_fit* fit);
BCSEG_API double bcseg_lambda_fit_theta(const bcseg_lambda_fit* fit, size_t i);
/* Two-column CSV (lambda,loglik) of the coarse scan. Free with
 * bcseg_string_free. */
BCSEG_API char* bcseg_lambda_fit_grid_csv(const bcseg_lambda_fit* fit);
BCSEG_API void bcseg_lambda_fit_free(bcseg_lambda_fit* fit);

/* ---- prefilter pipeline ----
 * Shift, Box-Cox, then contrast stretch onto [g_min, g_max]. */

typedef struct bcseg_prefilter_params {
  double lambda; /* NaN requests the maximum-likelihood estimate */
  double shift;
  double g_min; /* must be >= 0 */
  double g_max;
  int threads;
  bcseg_fit_options fit; /* used only when lambda is NaN */
} bcseg_prefilter_params;

BCSEG_API void bcseg_prefilter_params_init(bcseg_prefilter_params* params);

/* out_fit (optional) receives the lambda estimate when one was computed,
 * NULL when lambda was fixed. */
BCSEG_API int bcseg_prefilter(const bcseg_gray* img,
                              const bcseg_prefilter_params* params,
                              bcseg_gray** out_img,
                              bcseg_lambda_fit** out_fit);

/* ---- classifiers ---- */

typedef struct bcseg_train_options {
  const char* classifier; /* "lda", "qda", "knn", "svm" */
  const char* features;   /* "intensity" or "intensity+window-stats" */
  int window;             /* window-stats side length, odd, >= 3 */
  double ridge;           /* discriminant regularizer; < 0 picks a default
                             proportional to trace/dim */
  int knn_k;
  const char* svm_mode;   /* "linear-primal" or "kernel-dual" */
  const char* svm_kernel; /* "linear", "polynomial", "rbf", "sigmoid" */
  double svm_cost;
  double svm_gamma; /* <= 0 resolves to 1/(dim * feature variance) */
  double svm_coef0;
  int svm_degree;
  int svm_epochs;        /* linear-primal passes over the data */
  uint64_t svm_dual_cap; /* dual training rows beyond this are subsampled */
  double svm_dual_tol;
  double train_fraction; /* stratified split share, in (0, 1) */
  uint64_t seed;         /* drives the split and any SVM randomness */
  int threads;
} bcseg_train_options;

BCSEG_API void bcseg_train_options_init(bcseg_train_options* opts);

/* Trains on a seeded stratified split of the labeled pixels.
 * out_fit_seconds (optional) receives the training wall time. */
BCSEG_API int bcseg_train(const bcseg_gray* img, const bcseg_mask* truth,
                          const bcseg_train_options* opts, bcseg_model** out,
                          double* out_fit_seconds);
BCSEG_API int bcseg_segment(const bcseg_gray* img, const bcseg_model* model,
                            int threads, bcseg_mask** out);
BCSEG_API int bcseg_model_save(const bcseg_model* model, const char* path);
BCSEG_API int bcseg_model_load(const char* path, bcseg_model** out);
BCSEG_API const char* bcseg_model_kind(const bcseg_model* model);
BCSEG_API int bcseg_model_num_classes(const bcseg_model* model);
/* 0 only when a capped dual SVM stopped at its iteration limit. */
BCSEG_API int bcseg_model_converged(const bcseg_model* model);
BCSEG_API void bcseg_model_free(bcseg_model* model);

/* ---- evaluation ----
 * Masks must share shape and class count. Kappa is undefined when both
 * masks put everything in one class (BCSEG_ERR_DEGENERATE). */

BCSEG_API int bcseg_evaluate(const bcseg_mask* pred, const bcseg_mask* truth,
                             bcseg_report** out);
BCSEG_API int bcseg_report_num_classes(const bcseg_report* r);
BCSEG_API double bcseg_report_accuracy(const bcseg_report* r);
BCSEG_API double bcseg_report_kappa(const bcseg_report* r);
BCSEG_API double bcseg_report_macro_precision(const bcseg_report* r);
BCSEG_API double bcseg_report_macro_recall(const bcseg_report* r);
BCSEG_API double bcseg_report_macro_f1(const bcseg_report* r);
BCSEG_API double bcseg_report_precision(const bcseg_report* r, int k);
BCSEG_API double bcseg_report_recall(const bcseg_report* r, int k);
BCSEG_API double bcseg_report_f1(const bcseg_report* r, int k);
BCSEG_API double bcseg_report_iou(const bcseg_report* r, int k);
BCSEG_API double bcseg_report_dice(const bcseg_report* r, int k);
/* A metric with a zero denominator reports 0; these tell that 0 apart from
 * a real score. */
BCSEG_API int bcseg_report_precision_undefined(const bcseg_report* r, int k);
BCSEG_API int bcseg_report_recall_undefined(const bcseg_report* r, int k);
BCSEG_API int bcseg_report_f1_undefined(const bcseg_report* r, int k);
BCSEG_API uint64_t bcseg_report_confusion(const bcseg_report* r, int truth,
                                          int pred);
/* Long-format table (metric,class,value). Free with bcseg_string_free. */
BCSEG_API char* bcseg_report_csv(const bcseg_report* r);
BCSEG_API void bcseg_report_free(bcseg_report* r);

/* ---- lambda sweep ----
 * Re-runs prefilter + train + evaluate at every grid point. Rows are
 * bitwise independent of the thread count. A failing grid point records
 * its error and the sweep continues. */

BCSEG_API int bcseg_sweep_run(const bcseg_gray* img, const bcseg_mask* truth,
                              const double* grid, size_t grid_len,
                              double shift, double g_min, double g_max,
                              const bcseg_train_options* classifier,
                              const bcseg_fit_options* mle,
                              bcseg_sweep** out);
BCSEG_API size_t bcseg_sweep_num_rows(const bcseg_sweep* s);
/* Return 1 and set *out when the value exists, else 0. The argmaxes are
 * absent when every row failed; the reference estimate is absent when the
 * likelihood fit itself failed. */
BCSEG_API int bcseg_sweep_argmax_kappa(const bcseg_sweep* s, double* out);
BCSEG_API int bcseg_sweep_argmax_precision(const bcseg_sweep* s, double* out);
BCSEG_API int bcseg_sweep_mle_lambda(const bcseg_sweep* s, double* out);
/* Free all three with bcseg_string_free. */
BCSEG_API char* bcseg_sweep_csv(const bcseg_sweep* s);
BCSEG_API char* bcseg_sweep_plot_csv(const bcseg_sweep* s);
BCSEG_API char* bcseg_sweep_annotations_json(const bcseg_sweep* s);
BCSEG_API void bcseg_sweep_free(bcseg_sweep* s);

/* ---- synthetic scenes ----
 * Seeded generators; identical arguments give identical pixels on every
 * platform. */

BCSEG_API int bcseg_synth_lognormal(int width, int height, double mu_log,
                                    double sigma_log, uint64_t seed,
                                    bcseg_gray** out);
BCSEG_API int bcseg_synth_normal(int width, int height, double mean,
                                 double sigma, uint64_t seed,
                                 bcseg_gray** out);
/* Inverse Box-Cox of N(mu, sigma^2) draws at the given lambda, so the
 * estimator's model holds exactly and lambda is recoverable. */
BCSEG_API int bcseg_synth_boxcox_normal(int width, int height, double lambda,
                                        double mu, double sigma, double shift,
                                        uint64_t seed, bcseg_gray** out);
/* Dark log-normal disks (class 1) on a brighter log-normal background
 * (class 0). */
BCSEG_API int bcseg_synth_two_class(int width, int height, double bg_mu_log,
                                    double fg_mu_log, double sigma_log,
                                    double fg_fraction, int num_disks,
                                    uint64_t seed, bcseg_gray** out_img,
                                    bcseg_mask** out_mask);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BCSEG_H */
