#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "refpred/domain.hpp"
#include "refpred/ml/dataset.hpp"
#include "refpred/ml/decision_tree.hpp"
#include "refpred/ml/hyperparameters.hpp"
#include "refpred/ml/linear_svm.hpp"
#include "refpred/ml/logistic_regression.hpp"
#include "refpred/ml/naive_bayes.hpp"
#include "refpred/ml/neural_network.hpp"
#include "refpred/ml/scaler.hpp"

namespace refpred::ml {

// Alternative order matches Algorithm.
using Estimator =
    std::variant<LogisticRegression, GaussianNaiveBayes, LinearSvm, DecisionTree, RandomForest, NeuralNetwork>;

// Fits on already scaled features. Logs a warning when X is not in [0, 1].
// Throws NonBinaryLabels, SingleClass.
Estimator fit_estimator(const Hyperparameters& hp, const Matrix& X, const Labels& y, std::uint64_t seed);
Vector predict_proba(const Estimator& e, const Matrix& X);
// Threshold 0.5 on the probability; the SVM uses the sign of its decision
// value and the forest the majority of votes.
Labels predict(const Estimator& e, const Matrix& X);
// Throws UnsupportedAlgorithm for naive Bayes and the network.
Vector feature_importance(const Estimator& e);
Algorithm algorithm_of(const Estimator& e);

inline constexpr int kModelFormatVersion = 1;

// A fitted estimator together with the scaler and provenance needed to apply
// it to raw feature vectors.
class TrainedModel {
 public:
  // Fits the scaler on X (or uses `scaler` when given) and the estimator on
  // the scaled rows.
  static TrainedModel train(const Hyperparameters& hp, const Matrix& X, const Labels& y, std::uint64_t seed,
                            std::string catalog_hash, std::optional<RefactoringType> refactoring,
                            const MinMaxScaler* scaler = nullptr);

  // Raw (unscaled) features in.
  Vector predict_proba(const Matrix& X) const;
  Labels predict(const Matrix& X) const;
  Vector feature_importance() const { return ml::feature_importance(estimator_); }

  Algorithm algorithm() const { return algorithm_of(hp_); }
  const Hyperparameters& hyperparameters() const noexcept { return hp_; }
  const MinMaxScaler& scaler() const noexcept { return scaler_; }
  const std::string& catalog_hash() const noexcept { return catalog_hash_; }
  std::optional<RefactoringType> refactoring() const noexcept { return refactoring_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Estimator& estimator() const noexcept { return estimator_; }

  nlohmann::ordered_json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);

  void save(const std::filesystem::path& file) const;
  // Throws IOFailure, or CatalogMismatch when `expected_catalog` is given and
  // differs from the stored hash.
  static TrainedModel load(const std::filesystem::path& file,
                           const std::optional<std::string>& expected_catalog = std::nullopt);

 private:
  TrainedModel(Hyperparameters hp, MinMaxScaler scaler, std::string catalog_hash,
               std::optional<RefactoringType> refactoring, std::uint64_t seed, Estimator estimator)
      : hp_(std::move(hp)),
        scaler_(std::move(scaler)),
        catalog_hash_(std::move(catalog_hash)),
        refactoring_(refactoring),
        seed_(seed),
        estimator_(std::move(estimator)) {}

  Hyperparameters hp_;
  MinMaxScaler scaler_;
  std::string catalog_hash_;
  std::optional<RefactoringType> refactoring_;
  std::uint64_t seed_ = 0;
  Estimator estimator_;
};

}  // namespace refpred::ml
