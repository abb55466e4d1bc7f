#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "discriminant.hpp"
#include "features.hpp"
#include "image.hpp"
#include "knn.hpp"
#include "svm.hpp"

namespace bcseg {

enum class ClassifierKind { lda, qda, knn, svm };

const char* classifier_kind_name(ClassifierKind kind);
ClassifierKind parse_classifier_kind(const std::string& name);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::lda;
  FeaturizerSpec featurizer;
  std::optional<double> ridge;  // discriminant models
  int knn_k = 5;
  SvmConfig svm;
};

struct ClassifierModel {
  ClassifierKind kind = ClassifierKind::lda;
  FeaturizerSpec featurizer;
  int num_classes = 0;
  std::vector<std::string> class_names;  // empty or num_classes entries
  std::variant<DiscriminantModel, KnnModel, SvmModel> impl;
  bool converged = true;  // false only for a capped dual SVM fit
};

ClassifierModel train_classifier(const FeatureMatrix& features,
                                 const std::vector<std::int32_t>& labels,
                                 const ClassifierConfig& config,
                                 int num_classes = 0);

std::vector<std::int32_t> predict_labels(const ClassifierModel& model,
                                         const FeatureMatrix& features,
                                         int threads = 1);

// Featurizes with the model's own spec, then predicts every pixel.
LabelMask segment_image(const GrayImage& img, const ClassifierModel& model,
                        int threads = 1);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified split: classes are processed in ascending order, each class's
// indices are shuffled with the shared seeded generator, and round(frac * n_k)
// of them (at least one) go to the training side. Both sides come back sorted.
SplitIndices stratified_split(const std::vector<std::int32_t>& labels,
                              int num_classes, double train_fraction,
                              std::uint64_t seed);

struct TrainOutcome {
  ClassifierModel model;
  double fit_seconds = 0.0;
};

// The single-image protocol: featurize, stratified split against the truth
// mask, train on the training side.
TrainOutcome train_on_image(const GrayImage& img, const LabelMask& truth,
                            const ClassifierConfig& config,
                            double train_fraction, std::uint64_t seed,
                            int threads = 1);

// Text schema with full-precision decimal doubles; a loaded model predicts
// identically to the saved one.
std::string model_to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const std::string& text);
void save_model(const ClassifierModel& model, const std::string& path);
ClassifierModel load_model(const std::string& path);

}  // namespace bcseg
