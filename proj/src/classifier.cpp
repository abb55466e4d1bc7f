#include "classifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace bcseg {

using nlohmann::json;

const char* classifier_kind_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::lda: return "lda";
    case ClassifierKind::qda: return "qda";
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::svm: return "svm";
  }
  return "unknown";
}

ClassifierKind parse_classifier_kind(const std::string& name) {
  if (name == "lda") return ClassifierKind::lda;
  if (name == "qda") return ClassifierKind::qda;
  if (name == "knn") return ClassifierKind::knn;
  if (name == "svm") return ClassifierKind::svm;
  fail(ErrorCode::invalid_argument,
       "unknown classifier '" + name + "' (lda, qda, knn, svm)");
}

ClassifierModel train_classifier(const FeatureMatrix& features,
                                 const std::vector<std::int32_t>& labels,
                                 const ClassifierConfig& config,
                                 int num_classes) {
  ClassifierModel model;
  model.kind = config.kind;
  model.featurizer = config.featurizer;
  if (static_cast<int>(features.cols) != config.featurizer.dimension()) {
    fail(ErrorCode::invalid_argument,
         "feature matrix width does not match the featurizer spec");
  }
  switch (config.kind) {
    case ClassifierKind::lda:
    case ClassifierKind::qda: {
      DiscriminantModel m = fit_discriminant(
          features, labels,
          config.kind == ClassifierKind::lda ? DiscriminantKind::lda
                                             : DiscriminantKind::qda,
          config.ridge, num_classes);
      model.num_classes = m.num_classes;
      model.impl = std::move(m);
      break;
    }
    case ClassifierKind::knn: {
      KnnModel m = fit_knn(features, labels, config.knn_k, num_classes);
      model.num_classes = m.num_classes;
      model.impl = std::move(m);
      break;
    }
    case ClassifierKind::svm: {
      SvmModel m = fit_svm(features, labels, config.svm, num_classes);
      model.num_classes = m.num_classes;
      model.converged = m.converged;
      model.impl = std::move(m);
      break;
    }
  }
  return model;
}

std::vector<std::int32_t> predict_labels(const ClassifierModel& model,
                                         const FeatureMatrix& features,
                                         int threads) {
  if (std::holds_alternative<DiscriminantModel>(model.impl)) {
    return predict_discriminant(std::get<DiscriminantModel>(model.impl),
                                features, threads);
  }
  if (std::holds_alternative<KnnModel>(model.impl)) {
    return predict_knn(std::get<KnnModel>(model.impl), features, threads);
  }
  return predict_svm(std::get<SvmModel>(model.impl), features, threads);
}

LabelMask segment_image(const GrayImage& img, const ClassifierModel& model,
                        int threads) {
  FeatureMatrix features = featurize(img, model.featurizer, threads);
  std::vector<std::int32_t> labels = predict_labels(model, features, threads);
  return LabelMask(img.width(), img.height(), model.num_classes,
                   std::move(labels), model.class_names);
}

SplitIndices stratified_split(const std::vector<std::int32_t>& labels,
                              int num_classes, double train_fraction,
                              std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    fail(ErrorCode::invalid_argument,
         "train fraction must lie strictly between 0 and 1");
  }
  std::vector<std::vector<std::size_t>> per_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      fail(ErrorCode::invalid_argument, "label outside [0, num_classes)");
    }
    per_class[labels[i]].push_back(i);
  }
  std::mt19937_64 rng(seed);
  SplitIndices split;
  for (int k = 0; k < num_classes; ++k) {
    std::vector<std::size_t>& idx = per_class[k];
    if (idx.empty()) continue;
    shuffle_values(rng, idx);
    const auto rounded = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(idx.size())));
    const std::size_t n_train =
        std::min(idx.size(), std::max<std::size_t>(1, rounded));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      (i < n_train ? split.train : split.test).push_back(idx[i]);
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

TrainOutcome train_on_image(const GrayImage& img, const LabelMask& truth,
                            const ClassifierConfig& config,
                            double train_fraction, std::uint64_t seed,
                            int threads) {
  if (img.width() != truth.width() || img.height() != truth.height()) {
    fail(ErrorCode::invalid_argument, "image and mask shapes differ");
  }
  FeatureMatrix all = featurize(img, config.featurizer, threads);
  SplitIndices split = stratified_split(truth.labels(), truth.num_classes(),
                                        train_fraction, seed);
  FeatureMatrix train(split.train.size(), all.cols);
  std::vector<std::int32_t> train_labels(split.train.size());
  for (std::size_t r = 0; r < split.train.size(); ++r) {
    std::copy(all.row(split.train[r]), all.row(split.train[r]) + all.cols,
              train.row(r));
    train_labels[r] = truth.labels()[split.train[r]];
  }
  const auto t0 = std::chrono::steady_clock::now();
  ClassifierModel model =
      train_classifier(train, train_labels, config, truth.num_classes());
  const auto t1 = std::chrono::steady_clock::now();
  model.class_names = truth.class_names();
  TrainOutcome out;
  out.model = std::move(model);
  out.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

namespace {

json featurizer_to_json(const FeaturizerSpec& spec) {
  json j;
  j["mode"] = featurizer_mode_name(spec.mode);
  j["window"] = spec.window;
  return j;
}

FeaturizerSpec featurizer_from_json(const json& j) {
  FeaturizerSpec spec;
  spec.mode = parse_featurizer_mode(j.at("mode").get<std::string>());
  spec.window = j.at("window").get<int>();
  return spec;
}

json matrix_to_json(const FeatureMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

FeatureMatrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) {
    fail(ErrorCode::format, "expected a nonempty array of feature rows");
  }
  const std::size_t d = rows.front().size();
  FeatureMatrix m(rows.size(), d);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const json& row = rows[i];
    if (row.size() != d) {
      fail(ErrorCode::format, "ragged feature rows in model file");
    }
    for (std::size_t j = 0; j < d; ++j) m.at(i, j) = row[j].get<double>();
  }
  return m;
}

json kernel_to_json(const KernelParams& p) {
  json j;
  j["kind"] = kernel_kind_name(p.kind);
  j["gamma"] = p.gamma;
  j["coef0"] = p.coef0;
  j["degree"] = p.degree;
  return j;
}

KernelParams kernel_from_json(const json& j) {
  KernelParams p;
  p.kind = parse_kernel_kind(j.at("kind").get<std::string>());
  p.gamma = j.at("gamma").get<double>();
  p.coef0 = j.at("coef0").get<double>();
  p.degree = j.at("degree").get<int>();
  return p;
}

}  // namespace

std::string model_to_json(const ClassifierModel& model) {
  json j;
  j["format"] = "bcseg-model";
  j["version"] = 1;
  j["kind"] = classifier_kind_name(model.kind);
  j["featurizer"] = featurizer_to_json(model.featurizer);
  j["num_classes"] = model.num_classes;
  if (!model.class_names.empty()) j["class_names"] = model.class_names;

  if (const auto* dm = std::get_if<DiscriminantModel>(&model.impl)) {
    json d;
    d["priors"] = dm->priors;
    d["means"] = dm->means;
    d["covariances"] = dm->covariances;
    d["ridge"] = dm->ridge;
    d["dim"] = dm->dim;
    j["discriminant"] = std::move(d);
  } else if (const auto* km = std::get_if<KnnModel>(&model.impl)) {
    json d;
    d["k"] = km->k;
    d["train"] = matrix_to_json(km->train);
    d["labels"] = km->labels;
    j["knn"] = std::move(d);
  } else {
    const SvmModel& sm = std::get<SvmModel>(model.impl);
    json d;
    d["mode"] = svm_mode_name(sm.config.mode);
    d["cost"] = sm.config.cost;
    d["epochs"] = sm.config.epochs;
    d["seed"] = sm.config.seed;
    d["dual_cap"] = sm.config.dual_cap;
    d["dual_tol"] = sm.config.dual_tol;
    d["kernel"] = kernel_to_json(sm.config.kernel);
    d["dim"] = sm.dim;
    json machines = json::array();
    for (const BinarySvm& m : sm.machines) {
      json mj;
      if (m.mode == SvmMode::linear_primal) {
        mj["w"] = m.w;
        mj["bias"] = m.bias;
      } else {
        mj["support_vectors"] = matrix_to_json(m.support_vectors);
        mj["coef"] = m.coef;
        mj["rho"] = m.rho;
        mj["kernel"] = kernel_to_json(m.kernel);
      }
      mj["converged"] = m.converged;
      mj["iterations"] = m.iterations;
      machines.push_back(std::move(mj));
    }
    d["machines"] = std::move(machines);
    j["svm"] = std::move(d);
  }
  return j.dump(2) + "\n";
}

ClassifierModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::format, std::string("model file is not valid JSON: ") +
                                e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "bcseg-model") {
      fail(ErrorCode::format, "not a bcseg model file");
    }
    ClassifierModel model;
    model.kind = parse_classifier_kind(j.at("kind").get<std::string>());
    model.featurizer = featurizer_from_json(j.at("featurizer"));
    model.num_classes = j.at("num_classes").get<int>();
    if (j.contains("class_names")) {
      model.class_names = j["class_names"].get<std::vector<std::string>>();
    }

    if (model.kind == ClassifierKind::lda || model.kind == ClassifierKind::qda) {
      const json& d = j.at("discriminant");
      DiscriminantModel dm;
      dm.kind = model.kind == ClassifierKind::lda ? DiscriminantKind::lda
                                                  : DiscriminantKind::qda;
      dm.num_classes = model.num_classes;
      dm.dim = d.at("dim").get<int>();
      dm.priors = d.at("priors").get<std::vector<double>>();
      dm.means = d.at("means").get<std::vector<std::vector<double>>>();
      dm.covariances =
          d.at("covariances").get<std::vector<std::vector<double>>>();
      dm.ridge = d.at("ridge").get<std::vector<double>>();
      dm.finalize();
      model.impl = std::move(dm);
    } else if (model.kind == ClassifierKind::knn) {
      const json& d = j.at("knn");
      KnnModel km;
      km.k = d.at("k").get<int>();
      km.num_classes = model.num_classes;
      km.train = matrix_from_json(d.at("train"));
      km.labels = d.at("labels").get<std::vector<std::int32_t>>();
      if (km.labels.size() != km.train.rows) {
        fail(ErrorCode::format, "label count does not match training rows");
      }
      model.impl = std::move(km);
    } else {
      const json& d = j.at("svm");
      SvmModel sm;
      sm.config.mode = parse_svm_mode(d.at("mode").get<std::string>());
      sm.config.cost = d.at("cost").get<double>();
      sm.config.epochs = d.at("epochs").get<int>();
      sm.config.seed = d.at("seed").get<std::uint64_t>();
      sm.config.dual_cap = d.at("dual_cap").get<std::size_t>();
      sm.config.dual_tol = d.at("dual_tol").get<double>();
      sm.config.kernel = kernel_from_json(d.at("kernel"));
      sm.num_classes = model.num_classes;
      sm.dim = d.at("dim").get<int>();
      for (const json& mj : d.at("machines")) {
        BinarySvm m;
        m.mode = sm.config.mode;
        if (m.mode == SvmMode::linear_primal) {
          m.w = mj.at("w").get<std::vector<double>>();
          m.bias = mj.at("bias").get<double>();
        } else {
          m.support_vectors = matrix_from_json(mj.at("support_vectors"));
          m.coef = mj.at("coef").get<std::vector<double>>();
          m.rho = mj.at("rho").get<double>();
          m.kernel = kernel_from_json(mj.at("kernel"));
        }
        m.converged = mj.at("converged").get<bool>();
        m.iterations = mj.at("iterations").get<long>();
        sm.converged = sm.converged && m.converged;
        sm.machines.push_back(std::move(m));
      }
      if (static_cast<int>(sm.machines.size()) != sm.num_classes) {
        fail(ErrorCode::format, "machine count does not match num_classes");
      }
      model.converged = sm.converged;
      model.impl = std::move(sm);
    }
    return model;
  } catch (const json::exception& e) {
    fail(ErrorCode::format,
         std::string("model file is missing fields: ") + e.what());
  }
}

void save_model(const ClassifierModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
  out << model_to_json(model);
  if (!out) fail(ErrorCode::io, "short write to '" + path + "'");
}

ClassifierModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace bcseg
