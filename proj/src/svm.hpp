#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "features.hpp"

namespace bcseg {

enum class KernelKind { linear, polynomial, rbf, sigmoid };

const char* kernel_kind_name(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);

struct KernelParams {
  KernelKind kind = KernelKind::linear;
  double gamma = 0.0;  // <= 0 resolves to 1/(d * feature variance) at fit
  double coef0 = 0.0;  // r
  int degree = 3;
};

// linear: x.y; polynomial: (gamma x.y + r)^degree; rbf: exp(-gamma |x-y|^2);
// sigmoid: tanh(gamma x.y + r).
double kernel_eval(const KernelParams& p, const double* x, const double* y,
                   std::size_t d);

enum class SvmMode { linear_primal, kernel_dual };

const char* svm_mode_name(SvmMode mode);
SvmMode parse_svm_mode(const std::string& name);

struct SvmConfig {
  SvmMode mode = SvmMode::linear_primal;
  KernelParams kernel;  // kernel_dual only
  double cost = 1.0;    // C; the primal regularizer is 1/(C n)
  int epochs = 400;     // primal passes over the data
  std::uint64_t seed = 1;
  std::size_t dual_cap = 2000;  // dual training rows beyond this are subsampled
  double dual_tol = 1e-3;       // KKT violation stopping threshold
};

struct BinarySvm {
  SvmMode mode = SvmMode::linear_primal;
  // Linear primal state: decision = w.x + bias.
  std::vector<double> w;
  double bias = 0.0;
  // Kernel dual state: decision = sum_s coef_s K(sv_s, x) - rho,
  // coef_s = alpha_s y_s.
  FeatureMatrix support_vectors;
  std::vector<double> coef;
  double rho = 0.0;
  KernelParams kernel;
  // Dual diagnostics; the model stays usable when the iteration cap is hit.
  bool converged = true;
  long iterations = 0;
};

double svm_decision(const BinarySvm& m, const double* x, std::size_t d);

// Binary labels in {-1, +1}; both must be present. The primal path runs a
// fixed number of seeded, shuffled subgradient epochs; the dual path runs
// working-set coordinate ascent on the box-constrained dual.
BinarySvm fit_binary_svm(const FeatureMatrix& features,
                         const std::vector<int>& y, const SvmConfig& config);

// One-vs-rest multiclass wrapper; machine k treats class k as +1.
struct SvmModel {
  SvmConfig config;  // gamma resolved
  int num_classes = 0;
  int dim = 0;
  std::vector<BinarySvm> machines;
  bool converged = true;
};

SvmModel fit_svm(const FeatureMatrix& features,
                 const std::vector<std::int32_t>& labels,
                 const SvmConfig& config, int num_classes = 0);

// Highest decision value wins; ties go to the smallest class index.
std::vector<std::int32_t> predict_svm(const SvmModel& model,
                                      const FeatureMatrix& queries,
                                      int threads = 1);

}  // namespace bcseg
