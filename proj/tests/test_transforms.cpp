#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "error.hpp"
#include "image.hpp"
#include "rng.hpp"
#include "transforms.hpp"

using namespace bcseg;

namespace {

IntensityVector vec(std::vector<double> v) {
  const int n = static_cast<int>(v.size());
  return IntensityVector(std::move(v), n, 1);
}

std::vector<double> random_positive(std::mt19937_64& rng, std::size_t n,
                                    double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * uniform_unit(rng);
  return v;
}

}  // namespace

TEST_CASE("boxcox closed forms at lambda 1 and 0") {
  BoxCoxParams p;
  p.shift = 0.0;
  p.lambda = 1.0;
  CHECK(boxcox_value(7.25, p) == doctest::Approx(6.25).epsilon(1e-15));
  p.lambda = 0.0;
  CHECK(boxcox_value(7.25, p) == doctest::Approx(std::log(7.25)).epsilon(1e-15));
  p.shift = 2.0;
  CHECK(boxcox_value(5.0, p) == doctest::Approx(std::log(7.0)).epsilon(1e-15));
  p.lambda = 2.0;
  CHECK(boxcox_value(5.0, p) == doctest::Approx((49.0 - 1.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("boxcox is continuous across the log branch switch") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const double y = 0.01 + 400.0 * uniform_unit(rng);
    const double log_y = std::log(y);
    for (double lambda : {1e-7, -1e-7, 2e-8, -2e-8}) {
      BoxCoxParams p{lambda, 0.0};
      // The expansion ((y^l - 1)/l) - log y = l log^2(y)/2 + O(l^2) bounds
      // the gap; 0.51 absorbs the higher-order terms.
      const double bound = std::abs(lambda) * log_y * log_y * 0.51 + 1e-12;
      CHECK(std::abs(boxcox_value(y, p) - log_y) <= bound);
    }
    // On the log branch itself the value is exactly the logarithm.
    BoxCoxParams log_branch{5e-9, 0.0};
    CHECK(boxcox_value(y, log_branch) == log_y);
  }
  // Flat tolerance on a bounded intensity range: within [0.05, 60] the gap
  // at |lambda| = 1e-7 never reaches 1e-6.
  for (int i = 0; i < 200; ++i) {
    const double y = 0.05 + 59.95 * uniform_unit(rng);
    for (double lambda : {1e-7, -1e-7}) {
      BoxCoxParams p{lambda, 0.0};
      CHECK(std::abs(boxcox_value(y, p) - std::log(y)) < 1e-6);
    }
  }
}

TEST_CASE("inverse round-trips within 1e-10 relative") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const double lambda = -2.5 + 7.0 * uniform_unit(rng);
    const double shift = uniform_unit(rng) < 0.5 ? 0.0 : 3.0 * uniform_unit(rng);
    BoxCoxParams p{lambda, shift};
    std::vector<double> y = random_positive(rng, 64, 0.5, 300.0);
    IntensityVector forward = boxcox(vec(y), p);
    IntensityVector back = inverse_boxcox(forward, p);
    for (std::size_t j = 0; j < y.size(); ++j) {
      CHECK(std::abs(back.values()[j] - y[j]) <= 1e-10 * std::abs(y[j]));
    }
  }
}

TEST_CASE("boxcox preserves ranks") {
  std::mt19937_64 rng(13);
  for (double lambda : {-3.0, -0.7, 0.0, 0.4, 2.0, 5.0}) {
    BoxCoxParams p{lambda, 1.0};
    std::vector<double> y = random_positive(rng, 257, 0.0, 255.0);
    IntensityVector t = boxcox(vec(y), p);
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
    for (std::size_t j = 1; j < order.size(); ++j) {
      const double prev = t.values()[order[j - 1]];
      const double next = t.values()[order[j]];
      CHECK(prev <= next);
      if (y[order[j - 1]] < y[order[j]]) CHECK(prev < next);
    }
  }
}

TEST_CASE("boxcox domain and parameter errors") {
  CHECK_THROWS_AS(boxcox_value(0.0, BoxCoxParams{1.0, 0.0}), Error);
  CHECK_THROWS_AS(boxcox_value(-2.0, BoxCoxParams{1.0, 1.0}), Error);
  try {
    boxcox(vec({1.0, 0.0, 3.0}), BoxCoxParams{0.5, 0.0});
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
  try {
    boxcox(vec({1.0, 2.0}), BoxCoxParams{0.5, -1.0});
    FAIL("expected an invalid-argument error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("inverse rejects values outside the transform image") {
  // At lambda = 2 the image is v > -1/2.
  BoxCoxParams p{2.0, 0.0};
  CHECK_THROWS_AS(inverse_boxcox_value(-0.5, p), Error);
  try {
    inverse_boxcox(vec({0.0, -0.75}), p);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
  // Negative lambda bounds the image from above instead.
  BoxCoxParams neg{-2.0, 0.0};
  CHECK_THROWS_AS(inverse_boxcox(vec({0.0, 0.5}), neg), Error);
}

TEST_CASE("boxcox overflow reports a numeric error") {
  try {
    boxcox(vec({1e300, 2e300}), BoxCoxParams{5.0, 0.0});
    FAIL("expected a numeric error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::numeric);
  }
}

TEST_CASE("stretch hits both endpoints exactly") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> y = random_positive(rng, 100, -40.0, 600.0);
    StretchRange r{0.0, 255.0};
    IntensityVector s = stretch(vec(y), r);
    const auto [mn, mx] =
        std::minmax_element(s.values().begin(), s.values().end());
    CHECK(*mn == 0.0);
    CHECK(*mx == 255.0);
    for (double v : s.values()) {
      CHECK(v >= 0.0);
      CHECK(v <= 255.0);
    }
  }
  // A non-default target range.
  IntensityVector s = stretch(vec({3.0, 9.0, 6.0}), StretchRange{10.0, 20.0});
  CHECK(s.values()[0] == 10.0);
  CHECK(s.values()[1] == 20.0);
  CHECK(s.values()[2] == doctest::Approx(15.0).epsilon(1e-15));
}

TEST_CASE("stretch rejects constant input and bad ranges") {
  try {
    stretch(vec({5.0, 5.0, 5.0}), StretchRange{0.0, 255.0});
    FAIL("expected a degenerate error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate);
  }
  CHECK_THROWS_AS(stretch(vec({1.0, 2.0}), StretchRange{5.0, 5.0}), Error);
  CHECK_THROWS_AS(stretch(vec({1.0, 2.0}), StretchRange{9.0, 3.0}), Error);
}

TEST_CASE("gamma correction applies gain times power") {
  GrayImage img(2, 1, {4.0, 9.0});
  GrayImage out = gamma_correct(img, GammaParams{2.0, 0.5});
  CHECK(out.at(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(out.at(1, 0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_correct(img, GammaParams{0.0, 1.0}), Error);
  CHECK_THROWS_AS(gamma_correct(img, GammaParams{1.0, -2.0}), Error);
}

TEST_CASE("elementwise transforms are thread-count invariant") {
  std::mt19937_64 rng(15);
  std::vector<double> y = random_positive(rng, 10007, 0.1, 250.0);
  BoxCoxParams p{0.37, 1.0};
  IntensityVector serial = boxcox(vec(y), p, 1);
  IntensityVector parallel = boxcox(vec(y), p, 4);
  CHECK(serial.values() == parallel.values());
  IntensityVector back_serial = inverse_boxcox(serial, p, 1);
  IntensityVector back_parallel = inverse_boxcox(serial, p, 4);
  CHECK(back_serial.values() == back_parallel.values());
}

TEST_CASE("luminance conversion uses the 0.299 0.587 0.114 weights") {
  RgbImage img(2, 1);
  img.set(0, 0, 0, 255.0);  // pure red
  img.set(1, 0, 1, 100.0);  // green only
  GrayImage g = to_gray(img);
  CHECK(g.at(0, 0) == doctest::Approx(0.299 * 255.0).epsilon(1e-15));
  CHECK(g.at(1, 0) == doctest::Approx(0.587 * 100.0).epsilon(1e-15));
}

TEST_CASE("vectorize and unvectorize are exact inverses") {
  GrayImage img(3, 2, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  IntensityVector v = vectorize(img);
  CHECK(v.width() == 3);
  CHECK(v.height() == 2);
  CHECK(v.min_value() == 1.0);
  CHECK(v.max_value() == 6.0);
  GrayImage round = unvectorize(v);
  CHECK(round.values() == img.values());
}
