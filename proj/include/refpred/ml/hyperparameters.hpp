#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "refpred/rng.hpp"

namespace refpred::ml {

enum class Algorithm { LogisticRegression, NaiveBayes, LinearSvm, DecisionTree, RandomForest, NeuralNetwork };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::LogisticRegression, Algorithm::NaiveBayes,
                                               Algorithm::LinearSvm,          Algorithm::DecisionTree,
                                               Algorithm::RandomForest,       Algorithm::NeuralNetwork};

// Short ids: lr, nb, svm, dt, rf, nn.
std::string_view algorithm_id(Algorithm a);
std::string_view algorithm_name(Algorithm a);
// Accepts the id or the full name, case-insensitively. Throws UnsupportedAlgorithm.
Algorithm algorithm_from_string(std::string_view text);
bool supports_importance(Algorithm a);

enum class Criterion { Gini, Entropy };
enum class Splitter { Best, Random };
enum class MaxFeatures { Sqrt, Log2, All };

std::string_view to_string(Criterion c);
std::string_view to_string(Splitter s);
std::string_view to_string(MaxFeatures m);
// Number of candidate features per split for `n` features (at least 1).
std::size_t resolve_max_features(MaxFeatures m, std::size_t n);

struct LogisticRegressionParams {
  double C = 1.0;
  double tolerance = 1e-8;  // on the max-norm of the gradient
  int max_iterations = 100;
  bool operator==(const LogisticRegressionParams&) const = default;
};

struct NaiveBayesParams {
  double var_smoothing = 1e-9;
  bool operator==(const NaiveBayesParams&) const = default;
};

struct LinearSvmParams {
  double C = 1.0;
  double tolerance = 1e-4;
  int max_iterations = 1000;  // passes over the data
  bool operator==(const LinearSvmParams&) const = default;
};

struct TreeParams {
  std::optional<int> max_depth;  // unlimited when empty
  MaxFeatures max_features = MaxFeatures::All;
  int min_samples_split = 2;
  Splitter splitter = Splitter::Best;
  Criterion criterion = Criterion::Gini;
  bool operator==(const TreeParams&) const = default;
};

struct DecisionTreeParams {
  TreeParams tree;
  bool operator==(const DecisionTreeParams&) const = default;
};

struct RandomForestParams {
  TreeParams tree{std::nullopt, MaxFeatures::Sqrt, 2, Splitter::Best, Criterion::Gini};
  bool bootstrap = true;
  int n_estimators = 100;
  bool operator==(const RandomForestParams&) const = default;
};

// Dense 128 -> 64 -> 1 network; only the training schedule is tunable.
struct NeuralNetworkParams {
  int epochs = 1000;
  double keep_probability = 0.8;
  int batch_size = 32;
  double learning_rate = 1e-3;
  bool operator==(const NeuralNetworkParams&) const = default;
};

inline constexpr int kHidden1 = 128;
inline constexpr int kHidden2 = 64;

using Hyperparameters = std::variant<LogisticRegressionParams, NaiveBayesParams, LinearSvmParams, DecisionTreeParams,
                                     RandomForestParams, NeuralNetworkParams>;

Algorithm algorithm_of(const Hyperparameters& hp);
Hyperparameters default_hyperparameters(Algorithm a);

nlohmann::json to_json(const Hyperparameters& hp);
// Throws Error on unknown keys or out-of-range values.
Hyperparameters hyperparameters_from_json(Algorithm a, const nlohmann::json& j);
// Throws Error when a value lies outside the search space.
void validate(const Hyperparameters& hp);

// Search space bounds.
struct SearchSpace {
  double c_min = 1e-3, c_max = 1e3;                       // log-uniform
  double var_smoothing_min = 1e-12, var_smoothing_max = 1e-1;  // log-uniform
  int depth_min = 3, depth_max = 24;                      // plus "unlimited"
  int min_split_min = 2, min_split_max = 11;
  int estimators_min = 10, estimators_max = 200;
  int nn_epochs = 1000;
};

// Draws one point. Consumes a fixed number of values per algorithm so that
// the sequence of draws is reproducible.
Hyperparameters sample_hyperparameters(Algorithm a, Rng& rng, const SearchSpace& space = {});

}  // namespace refpred::ml
