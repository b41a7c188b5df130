#include "refpred/pipeline/report.hpp"

#include "refpred/error.hpp"

namespace refpred::pipeline {

double ConfusionMatrix::precision() const noexcept {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double ConfusionMatrix::recall() const noexcept {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double ConfusionMatrix::accuracy() const noexcept {
  return total() == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total());
}

ConfusionMatrix confusion(const ml::Labels& truth, const ml::Labels& predicted) {
  if (truth.size() != predicted.size()) throw Error("prediction count does not match label count");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1) {
      (predicted[i] == 1 ? cm.tp : cm.fn) += 1;
    } else {
      (predicted[i] == 1 ? cm.fp : cm.tn) += 1;
    }
  }
  return cm;
}

FoldResult fold_result(const ConfusionMatrix& cm) { return {cm, cm.precision(), cm.recall(), cm.accuracy()}; }

void EvaluationReport::compute_means() {
  mean_precision = mean_recall = mean_accuracy = 0.0;
  if (folds.empty()) return;
  for (const auto& f : folds) {
    mean_precision += f.precision;
    mean_recall += f.recall;
    mean_accuracy += f.accuracy;
  }
  const auto n = static_cast<double>(folds.size());
  mean_precision /= n;
  mean_recall /= n;
  mean_accuracy /= n;
}

nlohmann::ordered_json EvaluationReport::to_json() const {
  using oj = nlohmann::ordered_json;
  oj j;
  j["protocol"] = protocol;
  j["algorithm"] = algorithm;
  j["refactoring"] = refactoring;
  j["dataset"] = dataset;
  j["catalog_hash"] = catalog_hash;
  j["seed"] = seed;
  j["rows_before_balancing"] = rows_before_balancing;
  j["positives"] = positives;
  j["negatives"] = negatives;
  j["best_hyperparameters"] = best_hyperparameters;
  oj folds_json = oj::array();
  for (const auto& f : folds) {
    oj fj;
    fj["confusion"] = {{"tp", f.confusion.tp}, {"fp", f.confusion.fp}, {"tn", f.confusion.tn}, {"fn", f.confusion.fn}};
    fj["precision"] = f.precision;
    fj["recall"] = f.recall;
    fj["accuracy"] = f.accuracy;
    folds_json.push_back(std::move(fj));
  }
  j["folds"] = std::move(folds_json);
  j["mean"] = {{"precision", mean_precision}, {"recall", mean_recall}, {"accuracy", mean_accuracy}};
  oj log = oj::array();
  for (const auto& e : search_log) {
    oj ej;
    ej["index"] = e.index;
    ej["hyperparameters"] = e.hyperparameters;
    if (e.failed) {
      ej["error"] = e.error;
    } else {
      ej["mean_accuracy"] = e.mean_accuracy;
    }
    log.push_back(std::move(ej));
  }
  j["search_log"] = std::move(log);
  return j;
}

EvaluationReport EvaluationReport::from_json(const nlohmann::json& j) {
  EvaluationReport r;
  try {
    r.protocol = j.at("protocol").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.refactoring = j.at("refactoring").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.catalog_hash = j.at("catalog_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.rows_before_balancing = j.at("rows_before_balancing").get<std::int64_t>();
    r.positives = j.at("positives").get<std::int64_t>();
    r.negatives = j.at("negatives").get<std::int64_t>();
    r.best_hyperparameters = j.at("best_hyperparameters");
    for (const auto& fj : j.at("folds")) {
      FoldResult f;
      const auto& c = fj.at("confusion");
      f.confusion = {c.at("tp").get<std::int64_t>(), c.at("fp").get<std::int64_t>(), c.at("tn").get<std::int64_t>(),
                     c.at("fn").get<std::int64_t>()};
      f.precision = fj.at("precision").get<double>();
      f.recall = fj.at("recall").get<double>();
      f.accuracy = fj.at("accuracy").get<double>();
      r.folds.push_back(f);
    }
    r.mean_precision = j.at("mean").at("precision").get<double>();
    r.mean_recall = j.at("mean").at("recall").get<double>();
    r.mean_accuracy = j.at("mean").at("accuracy").get<double>();
    for (const auto& ej : j.at("search_log")) {
      SearchLogEntry e;
      e.index = ej.at("index").get<std::size_t>();
      e.hyperparameters = ej.at("hyperparameters");
      if (ej.contains("error")) {
        e.failed = true;
        e.error = ej.at("error").get<std::string>();
      } else {
        e.mean_accuracy = ej.at("mean_accuracy").get<double>();
      }
      r.search_log.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IOFailure(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string EvaluationReport::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace refpred::pipeline
