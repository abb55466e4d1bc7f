// Exercises the shared library strictly through its C surface; nothing here
// touches the C++ headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <bcseg/bcseg.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

std::string scratch(const std::string& name) {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("bcseg_capi_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return (dir / name).string();
}

struct Scene {
  bcseg_gray* img = nullptr;
  bcseg_mask* mask = nullptr;
  ~Scene() {
    bcseg_gray_free(img);
    bcseg_mask_free(mask);
  }
};

Scene make_scene(int w, int h, uint64_t seed) {
  Scene s;
  REQUIRE(bcseg_synth_two_class(w, h, 4.787, 3.401, 0.5, 0.08, 3, seed, &s.img,
                                &s.mask) == BCSEG_OK);
  return s;
}

}  // namespace

TEST_CASE("version, status names, and error reporting") {
  CHECK(bcseg_version() != nullptr);
  CHECK(std::strcmp(bcseg_status_name(BCSEG_OK), "ok") == 0);
  CHECK(std::strcmp(bcseg_status_name(BCSEG_ERR_DEGENERATE), "degenerate") ==
        0);
  bcseg_gray* img = nullptr;
  CHECK(bcseg_gray_load(nullptr, &img) == BCSEG_ERR_INVALID_ARGUMENT);
  CHECK(bcseg_last_error()[0] != '\0');
  CHECK(bcseg_gray_load("/no/such/file.pgm", &img) == BCSEG_ERR_IO);
  CHECK(img == nullptr);
  bcseg_string_free(nullptr);  // must be a no-op
  bcseg_gray_free(nullptr);
  bcseg_mask_free(nullptr);
  bcseg_model_free(nullptr);
}

TEST_CASE("format_double writes shortest round-trip decimals") {
  char buf[64];
  REQUIRE(bcseg_format_double(0.1, buf, sizeof(buf)) == BCSEG_OK);
  CHECK(std::strcmp(buf, "0.1") == 0);
  CHECK(bcseg_format_double(0.1, buf, 2) == BCSEG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("gray create, accessors, and file round-trip") {
  const double pixels[] = {0.0, 64.0, 128.0, 255.0, 32.0, 16.0};
  bcseg_gray* img = nullptr;
  REQUIRE(bcseg_gray_create(3, 2, pixels, &img) == BCSEG_OK);
  CHECK(bcseg_gray_width(img) == 3);
  CHECK(bcseg_gray_height(img) == 2);
  CHECK(std::memcmp(bcseg_gray_pixels(img), pixels, sizeof(pixels)) == 0);

  const std::string path = scratch("roundtrip.pgm");
  REQUIRE(bcseg_gray_save(img, path.c_str()) == BCSEG_OK);
  bcseg_gray* back = nullptr;
  REQUIRE(bcseg_gray_load(path.c_str(), &back) == BCSEG_OK);
  CHECK(std::memcmp(bcseg_gray_pixels(back), pixels, sizeof(pixels)) == 0);
  bcseg_gray_free(back);
  bcseg_gray_free(img);

  bcseg_gray* bad = nullptr;
  const double negative[] = {-1.0};
  CHECK(bcseg_gray_create(1, 1, negative, &bad) ==
        BCSEG_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
}

TEST_CASE("value transforms run on raw buffers") {
  const double y[] = {1.0, 4.0, 9.0};
  double out[3];
  REQUIRE(bcseg_boxcox_values(y, 3, 0.5, 0.0, 1, out) == BCSEG_OK);
  CHECK(out[1] == doctest::Approx(2.0).epsilon(1e-15));  // (sqrt(4)-1)/0.5
  double back[3];
  REQUIRE(bcseg_inverse_boxcox_values(out, 3, 0.5, 0.0, 1, back) == BCSEG_OK);
  for (int i = 0; i < 3; ++i) {
    CHECK(back[i] == doctest::Approx(y[i]).epsilon(1e-12));
  }
  double stretched[3];
  REQUIRE(bcseg_stretch_values(y, 3, 0.0, 255.0, stretched) == BCSEG_OK);
  CHECK(stretched[0] == 0.0);
  CHECK(stretched[2] == 255.0);

  const double flat[] = {5.0, 5.0};
  CHECK(bcseg_stretch_values(flat, 2, 0.0, 255.0, stretched) ==
        BCSEG_ERR_DEGENERATE);
  const double zero[] = {0.0};
  CHECK(bcseg_boxcox_values(zero, 1, 0.5, 0.0, 1, out) == BCSEG_ERR_DOMAIN);
}

TEST_CASE("gamma correction on handles") {
  const double pixels[] = {4.0, 9.0};
  bcseg_gray* img = nullptr;
  REQUIRE(bcseg_gray_create(2, 1, pixels, &img) == BCSEG_OK);
  bcseg_gray* out = nullptr;
  REQUIRE(bcseg_gamma(img, 2.0, 0.5, &out) == BCSEG_OK);
  CHECK(bcseg_gray_pixels(out)[0] == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(bcseg_gray_pixels(out)[1] == doctest::Approx(6.0).epsilon(1e-15));
  bcseg_gray_free(out);
  CHECK(bcseg_gamma(img, -1.0, 0.5, &out) == BCSEG_ERR_INVALID_ARGUMENT);
  bcseg_gray_free(img);
}

TEST_CASE("lambda fit over the C surface") {
  bcseg_gray* img = nullptr;
  REQUIRE(bcseg_synth_lognormal(96, 96, 4.0, 0.3, 7, &img) == BCSEG_OK);

  bcseg_fit_options opts;
  bcseg_fit_options_init(&opts);
  CHECK(opts.grid_points == 61);
  CHECK(opts.bracket_lo == -3.0);

  bcseg_lambda_fit* fit = nullptr;
  REQUIRE(bcseg_fit_lambda(img, 0.0, &opts, &fit) == BCSEG_OK);
  CHECK(std::fabs(bcseg_lambda_fit_lambda(fit)) < 0.2);  // lognormal: near 0
  CHECK(bcseg_lambda_fit_sigma2(fit) > 0.0);
  CHECK(bcseg_lambda_fit_n_used(fit) == 96u * 96u);
  REQUIRE(bcseg_lambda_fit_theta_len(fit) == 1);
  // theta is the transformed-scale mean at lambda-hat, which tracks the
  // log-scale mean of 4.0 only to first order in lambda-hat (~8 per unit).
  CHECK(std::fabs(bcseg_lambda_fit_theta(fit, 0) - 4.0) < 0.5);
  char* csv = bcseg_lambda_fit_grid_csv(fit);
  REQUIRE(csv != nullptr);
  CHECK(std::strncmp(csv, "lambda,loglik\n", 14) == 0);
  bcseg_string_free(csv);
  bcseg_lambda_fit_free(fit);

  // Defaults also apply when opts is NULL.
  REQUIRE(bcseg_fit_lambda(img, 0.0, nullptr, &fit) == BCSEG_OK);
  bcseg_lambda_fit_free(fit);
  bcseg_gray_free(img);

  const double flat[] = {3.0, 3.0, 3.0, 3.0};
  bcseg_gray* constant = nullptr;
  REQUIRE(bcseg_gray_create(2, 2, flat, &constant) == BCSEG_OK);
  CHECK(bcseg_fit_lambda(constant, 0.0, nullptr, &fit) ==
        BCSEG_ERR_DEGENERATE);
  bcseg_gray_free(constant);
}

TEST_CASE("prefilter with fixed and estimated lambda") {
  Scene s = make_scene(48, 48, 21);
  bcseg_prefilter_params params;
  bcseg_prefilter_params_init(&params);
  CHECK(std::isnan(params.lambda));  // estimate by default

  bcseg_gray* out = nullptr;
  bcseg_lambda_fit* fit = nullptr;
  REQUIRE(bcseg_prefilter(s.img, &params, &out, &fit) == BCSEG_OK);
  REQUIRE(fit != nullptr);
  const double* px = bcseg_gray_pixels(out);
  double mn = 1e300, mx = -1e300;
  for (int i = 0; i < 48 * 48; ++i) {
    mn = std::min(mn, px[i]);
    mx = std::max(mx, px[i]);
  }
  CHECK(mn == 0.0);
  CHECK(mx == 255.0);
  bcseg_gray_free(out);
  bcseg_lambda_fit_free(fit);

  params.lambda = 1.0;
  fit = nullptr;
  REQUIRE(bcseg_prefilter(s.img, &params, &out, &fit) == BCSEG_OK);
  CHECK(fit == nullptr);  // nothing estimated
  bcseg_gray_free(out);
}

TEST_CASE("train, segment, evaluate, and persist a model") {
  Scene s = make_scene(64, 64, 22);
  bcseg_train_options opts;
  bcseg_train_options_init(&opts);
  CHECK(std::strcmp(opts.classifier, "lda") == 0);
  CHECK(opts.train_fraction == 0.5);

  bcseg_model* model = nullptr;
  double fit_seconds = -1.0;
  REQUIRE(bcseg_train(s.img, s.mask, &opts, &model, &fit_seconds) == BCSEG_OK);
  CHECK(fit_seconds >= 0.0);
  CHECK(std::strcmp(bcseg_model_kind(model), "lda") == 0);
  CHECK(bcseg_model_num_classes(model) == 2);
  CHECK(bcseg_model_converged(model) == 1);

  bcseg_mask* pred = nullptr;
  REQUIRE(bcseg_segment(s.img, model, 1, &pred) == BCSEG_OK);
  CHECK(bcseg_mask_width(pred) == 64);
  CHECK(bcseg_mask_num_classes(pred) == 2);

  bcseg_report* report = nullptr;
  REQUIRE(bcseg_evaluate(pred, s.mask, &report) == BCSEG_OK);
  const double kappa = bcseg_report_kappa(report);
  CHECK(kappa >= -1.0);
  CHECK(kappa <= 1.0);
  CHECK(bcseg_report_accuracy(report) > 0.5);
  uint64_t total = 0;
  for (int t = 0; t < 2; ++t) {
    for (int p = 0; p < 2; ++p) total += bcseg_report_confusion(report, t, p);
  }
  CHECK(total == 64u * 64u);
  // Per-class accessors stay in range and flags are 0/1.
  for (int k = 0; k < 2; ++k) {
    CHECK(bcseg_report_precision(report, k) >= 0.0);
    CHECK(bcseg_report_recall(report, k) <= 1.0);
    CHECK((bcseg_report_precision_undefined(report, k) == 0 ||
           bcseg_report_precision_undefined(report, k) == 1));
  }
  char* csv = bcseg_report_csv(report);
  REQUIRE(csv != nullptr);
  CHECK(std::strncmp(csv, "metric,class,value\n", 19) == 0);
  bcseg_string_free(csv);
  bcseg_report_free(report);

  // Out-of-range class indexing is a hard error value, not UB.
  REQUIRE(bcseg_evaluate(pred, s.mask, &report) == BCSEG_OK);
  CHECK(std::isnan(bcseg_report_precision(report, 7)));
  bcseg_report_free(report);

  const std::string path = scratch("model.json");
  REQUIRE(bcseg_model_save(model, path.c_str()) == BCSEG_OK);
  bcseg_model* restored = nullptr;
  REQUIRE(bcseg_model_load(path.c_str(), &restored) == BCSEG_OK);
  bcseg_mask* pred2 = nullptr;
  REQUIRE(bcseg_segment(s.img, restored, 1, &pred2) == BCSEG_OK);
  CHECK(std::memcmp(bcseg_mask_labels(pred), bcseg_mask_labels(pred2),
                    sizeof(int32_t) * 64 * 64) == 0);
  bcseg_mask_free(pred2);
  bcseg_mask_free(pred);
  bcseg_model_free(restored);
  bcseg_model_free(model);

  opts.classifier = "forest";
  CHECK(bcseg_train(s.img, s.mask, &opts, &model, nullptr) ==
        BCSEG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("masks, palettes, and mask files") {
  bcseg_palette* pal = nullptr;
  REQUIRE(bcseg_palette_parse("0=0;255=1", &pal) == BCSEG_OK);
  CHECK(bcseg_palette_num_classes(pal) == 2);

  const int32_t labels[] = {0, 1, 1, 0};
  bcseg_mask* mask = nullptr;
  REQUIRE(bcseg_mask_create(2, 2, 2, labels, &mask) == BCSEG_OK);
  const std::string path = scratch("mask.png");
  REQUIRE(bcseg_mask_save(mask, pal, path.c_str()) == BCSEG_OK);
  bcseg_mask* back = nullptr;
  REQUIRE(bcseg_mask_load(path.c_str(), pal, &back) == BCSEG_OK);
  CHECK(std::memcmp(bcseg_mask_labels(back), labels, sizeof(labels)) == 0);
  bcseg_mask_free(back);
  bcseg_mask_free(mask);
  bcseg_palette_free(pal);

  CHECK(bcseg_palette_parse("nonsense", &pal) == BCSEG_ERR_FORMAT);
  const int32_t bad[] = {0, 2, 0, 0};
  CHECK(bcseg_mask_create(2, 2, 2, bad, &mask) == BCSEG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("sweep through the C surface is deterministic") {
  Scene s = make_scene(48, 48, 23);
  const double grid[] = {-1.0, 0.0, 1.0, 2.0};
  bcseg_train_options opts;
  bcseg_train_options_init(&opts);
  bcseg_sweep* sweep = nullptr;
  REQUIRE(bcseg_sweep_run(s.img, s.mask, grid, 4, 1.0, 0.0, 255.0, &opts,
                          nullptr, &sweep) == BCSEG_OK);
  CHECK(bcseg_sweep_num_rows(sweep) == 4);
  double value = 0.0;
  CHECK(bcseg_sweep_argmax_kappa(sweep, &value) == 1);
  CHECK(bcseg_sweep_argmax_precision(sweep, &value) == 1);
  CHECK(bcseg_sweep_mle_lambda(sweep, &value) == 1);
  char* csv = bcseg_sweep_csv(sweep);
  char* plot = bcseg_sweep_plot_csv(sweep);
  char* notes = bcseg_sweep_annotations_json(sweep);
  REQUIRE(csv != nullptr);
  REQUIRE(plot != nullptr);
  REQUIRE(notes != nullptr);

  bcseg_sweep* again = nullptr;
  REQUIRE(bcseg_sweep_run(s.img, s.mask, grid, 4, 1.0, 0.0, 255.0, &opts,
                          nullptr, &again) == BCSEG_OK);
  char* csv2 = bcseg_sweep_csv(again);
  CHECK(std::strcmp(csv, csv2) == 0);

  bcseg_string_free(csv);
  bcseg_string_free(csv2);
  bcseg_string_free(plot);
  bcseg_string_free(notes);
  bcseg_sweep_free(sweep);
  bcseg_sweep_free(again);

  // An unsorted grid is rejected up front.
  const double bad_grid[] = {1.0, 0.0};
  CHECK(bcseg_sweep_run(s.img, s.mask, bad_grid, 2, 1.0, 0.0, 255.0, &opts,
                        nullptr, &sweep) == BCSEG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("synthetic generators are seeded") {
  bcseg_gray* a = nullptr;
  bcseg_gray* b = nullptr;
  REQUIRE(bcseg_synth_normal(16, 16, 128.0, 5.0, 3, &a) == BCSEG_OK);
  REQUIRE(bcseg_synth_normal(16, 16, 128.0, 5.0, 3, &b) == BCSEG_OK);
  CHECK(std::memcmp(bcseg_gray_pixels(a), bcseg_gray_pixels(b),
                    sizeof(double) * 256) == 0);
  bcseg_gray_free(b);
  REQUIRE(bcseg_synth_normal(16, 16, 128.0, 5.0, 4, &b) == BCSEG_OK);
  CHECK(std::memcmp(bcseg_gray_pixels(a), bcseg_gray_pixels(b),
                    sizeof(double) * 256) != 0);
  bcseg_gray_free(a);
  bcseg_gray_free(b);

  bcseg_gray* bx = nullptr;
  REQUIRE(bcseg_synth_boxcox_normal(8, 8, 0.5, 3.0, 0.1, 0.0, 5, &bx) ==
          BCSEG_OK);
  bcseg_gray_free(bx);
  CHECK(bcseg_synth_lognormal(0, 8, 4.0, 0.3, 5, &bx) ==
        BCSEG_ERR_INVALID_ARGUMENT);
}
