#include "sweep.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "error.hpp"
#include "parallel.hpp"
#include "text_num.hpp"

namespace bcseg {

SegmentRun run_segmentation(const GrayImage& img, const LabelMask& truth,
                            const std::optional<PrefilterOptions>& pre,
                            const ClassifierConfig& classifier,
                            double train_fraction, std::uint64_t seed,
                            int threads) {
  if (img.width() != truth.width() || img.height() != truth.height()) {
    fail(ErrorCode::invalid_argument, "image and mask shapes differ");
  }
  std::optional<PrefilterResult> filtered;
  const GrayImage* working = &img;
  if (pre.has_value()) {
    PrefilterOptions opts = *pre;
    opts.threads = threads;
    filtered = prefilter_pipeline(img, opts);
    working = &filtered->image;
  }
  TrainOutcome outcome =
      train_on_image(*working, truth, classifier, train_fraction, seed, threads);
  LabelMask predicted = segment_image(*working, outcome.model, threads);
  ConfusionMatrix cm = confusion(predicted, truth);
  MetricReport report = scalar_metrics(cm);
  return SegmentRun{std::move(filtered),  std::move(outcome.model),
                    std::move(predicted), std::move(cm),
                    std::move(report),    outcome.fit_seconds};
}

SweepResult run_sweep(const GrayImage& img, const LabelMask& truth,
                      const SweepConfig& cfg) {
  if (cfg.grid.empty()) {
    fail(ErrorCode::invalid_argument, "sweep grid is empty");
  }
  for (std::size_t j = 1; j < cfg.grid.size(); ++j) {
    if (!(cfg.grid[j] > cfg.grid[j - 1])) {
      fail(ErrorCode::invalid_argument,
           "sweep grid must be strictly increasing");
    }
  }

  SweepResult result;
  result.num_classes = truth.num_classes();
  try {
    LambdaFitOptions mle = cfg.mle;
    mle.threads = cfg.threads;
    result.mle_lambda =
        fit_lambda(vectorize(img), cfg.shift, mle).lambda_hat;
  } catch (const Error&) {
    result.mle_lambda.reset();
  }

  result.rows.resize(cfg.grid.size());
  // Grid points run in parallel; everything inside a point stays serial so a
  // row's bytes never depend on the thread count.
  parallel_for(cfg.grid.size(), cfg.threads,
               [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      SweepRow& row = result.rows[j];
      row.lambda = cfg.grid[j];
      try {
        PrefilterOptions pre;
        pre.lambda = cfg.grid[j];
        pre.shift = cfg.shift;
        pre.range = cfg.range;
        SegmentRun run = run_segmentation(img, truth, pre, cfg.classifier,
                                          cfg.train_fraction, cfg.seed, 1);
        row.ok = true;
        row.kappa = run.report.kappa;
        row.precision = run.report.macro_precision;
        row.accuracy = run.report.accuracy;
        row.recall = run.report.recall;
        row.cm = std::move(run.cm);
        row.fit_seconds = run.fit_seconds;
      } catch (const Error& e) {
        row.ok = false;
        row.error = error_code_name(e.code());
      }
    }
  });

  // Lowest-lambda tie-break comes free from the ascending grid order with a
  // strict comparison.
  const SweepRow* best_kappa = nullptr;
  const SweepRow* best_precision = nullptr;
  for (const SweepRow& row : result.rows) {
    if (!row.ok) continue;
    if (best_kappa == nullptr || row.kappa > best_kappa->kappa) {
      best_kappa = &row;
    }
    if (best_precision == nullptr ||
        row.precision > best_precision->precision) {
      best_precision = &row;
    }
  }
  if (best_kappa != nullptr) result.argmax_kappa = best_kappa->lambda;
  if (best_precision != nullptr) {
    result.argmax_precision = best_precision->lambda;
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  const int k_count = result.num_classes;
  std::string csv = "lambda,kappa,precision,accuracy";
  for (int k = 0; k < k_count; ++k) {
    csv += ",recall_" + std::to_string(k);
  }
  for (int t = 0; t < k_count; ++t) {
    for (int p = 0; p < k_count; ++p) {
      csv += ",cm_" + std::to_string(t) + "_" + std::to_string(p);
    }
  }
  csv += ",status\n";
  for (const SweepRow& row : result.rows) {
    csv += format_double(row.lambda);
    if (row.ok) {
      csv += ',';
      csv += format_double(row.kappa);
      csv += ',';
      csv += format_double(row.precision);
      csv += ',';
      csv += format_double(row.accuracy);
      for (int k = 0; k < k_count; ++k) {
        csv += ',';
        csv += format_double(row.recall[k]);
      }
      for (int t = 0; t < k_count; ++t) {
        for (int p = 0; p < k_count; ++p) {
          csv += ',';
          csv += std::to_string(row.cm.at(t, p));
        }
      }
      csv += ",ok\n";
    } else {
      // Empty metric cells keep the column count; only the status explains.
      csv.append(static_cast<std::size_t>(3 + k_count + k_count * k_count),
                 ',');
      csv += ",error:" + row.error + "\n";
    }
  }
  return csv;
}

SweepResult sweep_from_csv(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    if (end > pos) lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  if (lines.empty()) fail(ErrorCode::format, "empty sweep CSV");

  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    return cells;
  };

  const std::vector<std::string> header = split(lines[0]);
  int k_count = 0;
  for (const std::string& cell : header) {
    if (cell.rfind("recall_", 0) == 0) ++k_count;
  }
  const std::size_t expected = 4 + static_cast<std::size_t>(k_count) +
                               static_cast<std::size_t>(k_count) * k_count + 1;
  if (k_count == 0 || header.size() != expected || header[0] != "lambda") {
    fail(ErrorCode::format, "unrecognized sweep CSV header");
  }

  SweepResult result;
  result.num_classes = k_count;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> cells = split(lines[r]);
    if (cells.size() != expected) {
      fail(ErrorCode::format,
           "sweep CSV row " + std::to_string(r) + " has " +
               std::to_string(cells.size()) + " cells, expected " +
               std::to_string(expected));
    }
    SweepRow row;
    row.lambda = parse_double(cells[0]);
    const std::string& status = cells.back();
    if (status == "ok") {
      row.ok = true;
      row.kappa = parse_double(cells[1]);
      row.precision = parse_double(cells[2]);
      row.accuracy = parse_double(cells[3]);
      row.recall.resize(k_count);
      for (int k = 0; k < k_count; ++k) {
        row.recall[k] = parse_double(cells[4 + k]);
      }
      row.cm = ConfusionMatrix(k_count);
      for (int t = 0; t < k_count; ++t) {
        for (int p = 0; p < k_count; ++p) {
          row.cm.at(t, p) = static_cast<std::uint64_t>(
              parse_int(cells[4 + k_count + t * k_count + p]));
        }
      }
    } else if (status.rfind("error:", 0) == 0) {
      row.ok = false;
      row.error = status.substr(6);
    } else {
      fail(ErrorCode::format, "unrecognized row status '" + status + "'");
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string sweep_to_plot_csv(const SweepResult& result) {
  std::string csv = "lambda,metric,value\n";
  for (const SweepRow& row : result.rows) {
    if (!row.ok) continue;
    const std::string lam = format_double(row.lambda);
    csv += lam + ",kappa," + format_double(row.kappa) + "\n";
    csv += lam + ",precision," + format_double(row.precision) + "\n";
    csv += lam + ",accuracy," + format_double(row.accuracy) + "\n";
    for (std::size_t k = 0; k < row.recall.size(); ++k) {
      csv += lam + ",recall_" + std::to_string(k) + "," +
             format_double(row.recall[k]) + "\n";
    }
  }
  return csv;
}

std::string sweep_annotations_json(const SweepResult& result) {
  nlohmann::json j;
  j["format"] = "bcseg-sweep-annotations";
  if (result.mle_lambda.has_value()) {
    j["mle_lambda"] = *result.mle_lambda;
  } else {
    j["mle_lambda"] = nullptr;
  }
  if (result.argmax_kappa.has_value()) {
    j["argmax_kappa_lambda"] = *result.argmax_kappa;
  } else {
    j["argmax_kappa_lambda"] = nullptr;
  }
  if (result.argmax_precision.has_value()) {
    j["argmax_precision_lambda"] = *result.argmax_precision;
  } else {
    j["argmax_precision_lambda"] = nullptr;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : result.rows) {
    nlohmann::json rj;
    rj["lambda"] = row.lambda;
    rj["status"] = row.ok ? "ok" : "error:" + row.error;
    rj["fit_seconds"] = row.fit_seconds;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorCode::io, "short write to '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace bcseg
