#include "refpred/ml/model.hpp"

#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "refpred/error.hpp"

namespace refpred::ml {

Estimator fit_estimator(const Hyperparameters& hp, const Matrix& X, const Labels& y, std::uint64_t seed) {
  check_labels(X, y);
  check_both_classes(y);
  validate(hp);
  if (!looks_scaled(X)) spdlog::warn("features are not scaled to [0, 1]");
  return std::visit(
      [&](const auto& p) -> Estimator {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LogisticRegressionParams>) {
          return LogisticRegression::fit(X, y, p);
        } else if constexpr (std::is_same_v<T, NaiveBayesParams>) {
          return GaussianNaiveBayes::fit(X, y, p);
        } else if constexpr (std::is_same_v<T, LinearSvmParams>) {
          return LinearSvm::fit(X, y, p, seed);
        } else if constexpr (std::is_same_v<T, DecisionTreeParams>) {
          return DecisionTree::fit(X, y, p.tree, seed);
        } else if constexpr (std::is_same_v<T, RandomForestParams>) {
          return RandomForest::fit(X, y, p, seed);
        } else {
          return NeuralNetwork::fit(X, y, p, seed);
        }
      },
      hp);
}

Algorithm algorithm_of(const Estimator& e) { return static_cast<Algorithm>(e.index()); }

Vector predict_proba(const Estimator& e, const Matrix& X) {
  return std::visit([&](const auto& m) -> Vector { return m.predict_proba(X); }, e);
}

Labels predict(const Estimator& e, const Matrix& X) {
  Vector score;
  double cut = 0.5;
  if (const auto* svm = std::get_if<LinearSvm>(&e)) {
    score = svm->decision_function(X);
    cut = 0.0;
  } else {
    score = predict_proba(e, X);
  }
  Labels out(static_cast<std::size_t>(score.size()));
  for (Eigen::Index i = 0; i < score.size(); ++i) out[static_cast<std::size_t>(i)] = score(i) > cut ? 1 : 0;
  return out;
}

Vector feature_importance(const Estimator& e) {
  return std::visit(
      [](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GaussianNaiveBayes> || std::is_same_v<T, NeuralNetwork>) {
          throw UnsupportedAlgorithm("feature importance is not defined for " +
                                     std::string(algorithm_name(std::is_same_v<T, GaussianNaiveBayes>
                                                                    ? Algorithm::NaiveBayes
                                                                    : Algorithm::NeuralNetwork)));
        } else {
          return m.feature_importance();
        }
      },
      e);
}

TrainedModel TrainedModel::train(const Hyperparameters& hp, const Matrix& X, const Labels& y, std::uint64_t seed,
                                 std::string catalog_hash, std::optional<RefactoringType> refactoring,
                                 const MinMaxScaler* scaler) {
  MinMaxScaler s = scaler ? *scaler : MinMaxScaler::fit(X);
  auto est = fit_estimator(hp, s.transform(X), y, seed);
  return TrainedModel(hp, std::move(s), std::move(catalog_hash), refactoring, seed, std::move(est));
}

Vector TrainedModel::predict_proba(const Matrix& X) const { return ml::predict_proba(estimator_, scaler_.transform(X)); }

Labels TrainedModel::predict(const Matrix& X) const { return ml::predict(estimator_, scaler_.transform(X)); }

nlohmann::ordered_json TrainedModel::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "refpred-model";
  j["version"] = kModelFormatVersion;
  j["algorithm"] = algorithm_id(algorithm());
  j["refactoring"] = refactoring_ ? nlohmann::ordered_json(to_string(*refactoring_)) : nlohmann::ordered_json();
  j["catalog_hash"] = catalog_hash_;
  j["seed"] = seed_;
  j["hyperparameters"] = ml::to_json(hp_);
  j["scaler"] = scaler_.to_json();
  j["parameters"] = std::visit([](const auto& m) { return m.to_json(); }, estimator_);
  return j;
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "refpred-model") throw Error("not a model file");
    if (j.at("version").get<int>() != kModelFormatVersion) throw Error("unsupported model format version");
    const auto algo = algorithm_from_string(j.at("algorithm").get<std::string>());
    auto hp = hyperparameters_from_json(algo, j.at("hyperparameters"));
    std::optional<RefactoringType> refactoring;
    if (!j.at("refactoring").is_null()) refactoring = refactoring_from_string(j.at("refactoring").get<std::string>());
    const auto& params = j.at("parameters");
    Estimator est;
    switch (algo) {
      case Algorithm::LogisticRegression: est = LogisticRegression::from_json(params); break;
      case Algorithm::NaiveBayes: est = GaussianNaiveBayes::from_json(params); break;
      case Algorithm::LinearSvm: est = LinearSvm::from_json(params); break;
      case Algorithm::DecisionTree: est = DecisionTree::from_json(params); break;
      case Algorithm::RandomForest: est = RandomForest::from_json(params); break;
      case Algorithm::NeuralNetwork: est = NeuralNetwork::from_json(params); break;
    }
    return TrainedModel(std::move(hp), MinMaxScaler::from_json(j.at("scaler")), j.at("catalog_hash").get<std::string>(),
                        refactoring, j.at("seed").get<std::uint64_t>(), std::move(est));
  } catch (const nlohmann::json::exception& e) {
    throw IOFailure(std::string("malformed model: ") + e.what());
  }
}

void TrainedModel::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IOFailure("cannot write " + file.string());
  out << to_json().dump() << '\n';
  if (!out.flush()) throw IOFailure("cannot write " + file.string());
}

TrainedModel TrainedModel::load(const std::filesystem::path& file, const std::optional<std::string>& expected_catalog) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IOFailure("cannot read model " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw IOFailure("malformed model " + file.string() + ": " + e.what());
  }
  auto model = from_json(j);
  if (expected_catalog && *expected_catalog != model.catalog_hash()) {
    throw CatalogMismatch("model " + file.string() + " was trained on catalog " + model.catalog_hash() +
                          ", dataset uses " + *expected_catalog);
  }
  return model;
}

}  // namespace refpred::ml
