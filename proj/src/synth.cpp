#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "error.hpp"
#include "rng.hpp"
#include "transforms.hpp"

namespace bcseg {

namespace {

void check_dims(int width, int height) {
  if (width < 1 || height < 1) {
    fail(ErrorCode::invalid_argument, "image dimensions must be positive");
  }
}

}  // namespace

GrayImage synth_lognormal(int width, int height, const LognormalParams& p,
                          std::uint64_t seed) {
  check_dims(width, height);
  if (!(p.sigma_log > 0.0)) {
    fail(ErrorCode::invalid_argument, "sigma_log must be positive");
  }
  std::mt19937_64 rng(seed);
  NormalSampler normal;
  std::vector<double> v(static_cast<std::size_t>(width) * height);
  for (double& x : v) x = std::exp(p.mu_log + p.sigma_log * normal(rng));
  return GrayImage(width, height, std::move(v));
}

GrayImage synth_normal(int width, int height, const NormalParams& p,
                       std::uint64_t seed) {
  check_dims(width, height);
  if (!(p.sigma > 0.0)) {
    fail(ErrorCode::invalid_argument, "sigma must be positive");
  }
  std::mt19937_64 rng(seed);
  NormalSampler normal;
  std::vector<double> v(static_cast<std::size_t>(width) * height);
  for (double& x : v) x = std::max(0.0, p.mean + p.sigma * normal(rng));
  return GrayImage(width, height, std::move(v));
}

std::vector<double> synth_boxcox_normal_values(std::size_t n,
                                               const BoxCoxNormalParams& p,
                                               std::uint64_t seed) {
  if (n == 0) fail(ErrorCode::invalid_argument, "sample size must be positive");
  if (!(p.sigma > 0.0)) {
    fail(ErrorCode::invalid_argument, "sigma must be positive");
  }
  const BoxCoxParams bc{p.lambda, p.shift};
  std::mt19937_64 rng(seed);
  NormalSampler normal;
  std::vector<double> v(n);
  for (double& x : v) {
    double z = p.mu + p.sigma * normal(rng);
    while (std::abs(p.lambda) >= kBoxCoxLogBranchThreshold &&
           !(p.lambda * z > -1.0)) {
      z = p.mu + p.sigma * normal(rng);
    }
    x = inverse_boxcox_value(z, bc);
  }
  return v;
}

GrayImage synth_boxcox_normal(int width, int height,
                              const BoxCoxNormalParams& p,
                              std::uint64_t seed) {
  check_dims(width, height);
  std::vector<double> v = synth_boxcox_normal_values(
      static_cast<std::size_t>(width) * height, p, seed);
  for (double& x : v) x = std::max(0.0, x);
  return GrayImage(width, height, std::move(v));
}

LabeledImage synth_two_class(int width, int height, const TwoClassParams& p,
                             std::uint64_t seed) {
  check_dims(width, height);
  if (!(p.sigma_log > 0.0) || p.num_disks < 1 || !(p.fg_fraction > 0.0) ||
      !(p.fg_fraction < 1.0)) {
    fail(ErrorCode::invalid_argument, "invalid two-class scene parameters");
  }
  std::mt19937_64 rng(seed);

  // Disk radius sized so num_disks disks cover about fg_fraction of the area.
  const double area = static_cast<double>(width) * height;
  const double radius = std::max(
      2.0, std::sqrt(p.fg_fraction * area / (std::numbers::pi * p.num_disks)));
  struct Disk {
    double cx, cy, r;
  };
  std::vector<Disk> disks(p.num_disks);
  for (Disk& d : disks) {
    d.cx = radius + uniform_unit(rng) * std::max(1.0, width - 2.0 * radius);
    d.cy = radius + uniform_unit(rng) * std::max(1.0, height - 2.0 * radius);
    d.r = radius;
  }

  std::vector<std::int32_t> labels(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      bool inside = false;
      for (const Disk& d : disks) {
        const double dx = x - d.cx;
        const double dy = y - d.cy;
        if (dx * dx + dy * dy <= d.r * d.r) {
          inside = true;
          break;
        }
      }
      labels[static_cast<std::size_t>(y) * width + x] = inside ? 1 : 0;
    }
  }

  NormalSampler normal;
  std::vector<double> v(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double mu = labels[i] == 1 ? p.fg_mu_log : p.bg_mu_log;
    v[i] = std::exp(mu + p.sigma_log * normal(rng));
  }
  LabeledImage out{GrayImage(width, height, std::move(v)),
                   LabelMask(width, height, 2, std::move(labels))};
  return out;
}

}  // namespace bcseg
