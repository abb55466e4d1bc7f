#pragma once

#include <cstdint>
#include <vector>

#include "image.hpp"

namespace bcseg {

// Seeded synthetic data used by the experiments and as test oracles. Every
// generator consumes its own mt19937_64 stream, so identical parameters give
// identical pixels on every run and platform.

struct LognormalParams {
  double mu_log = 4.0;
  double sigma_log = 0.3;
};
GrayImage synth_lognormal(int width, int height, const LognormalParams& p,
                          std::uint64_t seed);

struct NormalParams {
  double mean = 128.0;
  double sigma = 5.0;  // draws below zero are clamped (vanishing mass here)
};
GrayImage synth_normal(int width, int height, const NormalParams& p,
                       std::uint64_t seed);

// y = inverse Box-Cox of z ~ N(mu, sigma^2) at a chosen lambda: the exact
// generative model the estimator assumes, so lambda is recoverable from the
// output. Inadmissible draws (lambda z + 1 <= 0) are redrawn.
struct BoxCoxNormalParams {
  double lambda = 0.5;
  double mu = 3.0;
  double sigma = 0.1;
  double shift = 0.0;
};
std::vector<double> synth_boxcox_normal_values(std::size_t n,
                                               const BoxCoxNormalParams& p,
                                               std::uint64_t seed);
GrayImage synth_boxcox_normal(int width, int height,
                              const BoxCoxNormalParams& p, std::uint64_t seed);

// Two-class scene: dark log-normal disks (class 1, the minority) on a
// brighter log-normal background (class 0), raw supports overlapping.
struct TwoClassParams {
  double bg_mu_log = 4.787;  // log 120
  double fg_mu_log = 3.401;  // log 30
  double sigma_log = 0.5;
  double fg_fraction = 0.08;  // approximate minority area share
  int num_disks = 3;
};
struct LabeledImage {
  GrayImage image;
  LabelMask mask;
};
LabeledImage synth_two_class(int width, int height, const TwoClassParams& p,
                             std::uint64_t seed);

}  // namespace bcseg
