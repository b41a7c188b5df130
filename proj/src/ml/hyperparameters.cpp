#include "refpred/ml/hyperparameters.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "refpred/error.hpp"

namespace refpred::ml {

namespace {

using nlohmann::json;

std::string lowered(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(rng.uniform(std::log(lo), std::log(hi))); }

template <typename E>
E enum_from(std::string_view text, std::span<const E> values) {
  for (auto v : values) {
    if (to_string(v) == text) return v;
  }
  throw Error("unknown value '" + std::string(text) + "'");
}

constexpr Criterion kCriteria[] = {Criterion::Gini, Criterion::Entropy};
constexpr Splitter kSplitters[] = {Splitter::Best, Splitter::Random};
constexpr MaxFeatures kMaxFeatures[] = {MaxFeatures::Sqrt, MaxFeatures::Log2, MaxFeatures::All};

json tree_json(const TreeParams& t) {
  json j;
  j["max_depth"] = t.max_depth ? json(*t.max_depth) : json(nullptr);
  j["max_features"] = to_string(t.max_features);
  j["min_samples_split"] = t.min_samples_split;
  j["splitter"] = to_string(t.splitter);
  j["criterion"] = to_string(t.criterion);
  return j;
}

TreeParams tree_from(const json& j) {
  TreeParams t;
  if (j.contains("max_depth") && !j.at("max_depth").is_null()) t.max_depth = j.at("max_depth").get<int>();
  if (j.contains("max_features")) t.max_features = enum_from<MaxFeatures>(j.at("max_features").get<std::string>(), kMaxFeatures);
  if (j.contains("min_samples_split")) t.min_samples_split = j.at("min_samples_split").get<int>();
  if (j.contains("splitter")) t.splitter = enum_from<Splitter>(j.at("splitter").get<std::string>(), kSplitters);
  if (j.contains("criterion")) t.criterion = enum_from<Criterion>(j.at("criterion").get<std::string>(), kCriteria);
  return t;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error("hyperparameters must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      throw Error("unknown hyperparameter '" + k + "'");
    }
  }
}

void check_tree(const TreeParams& t) {
  if (t.max_depth && *t.max_depth < 1) throw Error("max_depth must be at least 1");
  if (t.min_samples_split < 2) throw Error("min_samples_split must be at least 2");
}

}  // namespace

std::string_view algorithm_id(Algorithm a) {
  switch (a) {
    case Algorithm::LogisticRegression: return "lr";
    case Algorithm::NaiveBayes: return "nb";
    case Algorithm::LinearSvm: return "svm";
    case Algorithm::DecisionTree: return "dt";
    case Algorithm::RandomForest: return "rf";
    case Algorithm::NeuralNetwork: return "nn";
  }
  return "lr";
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::LogisticRegression: return "Logistic Regression";
    case Algorithm::NaiveBayes: return "Naive Bayes";
    case Algorithm::LinearSvm: return "Support Vector Machine";
    case Algorithm::DecisionTree: return "Decision Tree";
    case Algorithm::RandomForest: return "Random Forest";
    case Algorithm::NeuralNetwork: return "Neural Network";
  }
  return "";
}

Algorithm algorithm_from_string(std::string_view text) {
  const auto t = lowered(text);
  for (auto a : kAllAlgorithms) {
    if (t == lowered(algorithm_id(a)) || t == lowered(algorithm_name(a))) return a;
  }
  if (t == "svc" || t == "linearsvm") return Algorithm::LinearSvm;
  if (t == "mlp" || t == "neuralnetworks") return Algorithm::NeuralNetwork;
  throw UnsupportedAlgorithm("unknown algorithm '" + std::string(text) + "'");
}

bool supports_importance(Algorithm a) {
  return a == Algorithm::LogisticRegression || a == Algorithm::LinearSvm || a == Algorithm::DecisionTree ||
         a == Algorithm::RandomForest;
}

std::string_view to_string(Criterion c) { return c == Criterion::Gini ? "gini" : "entropy"; }
std::string_view to_string(Splitter s) { return s == Splitter::Best ? "best" : "random"; }
std::string_view to_string(MaxFeatures m) {
  switch (m) {
    case MaxFeatures::Sqrt: return "sqrt";
    case MaxFeatures::Log2: return "log2";
    case MaxFeatures::All: return "all";
  }
  return "all";
}

std::size_t resolve_max_features(MaxFeatures m, std::size_t n) {
  std::size_t k = n;
  if (m == MaxFeatures::Sqrt) k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  if (m == MaxFeatures::Log2) k = static_cast<std::size_t>(std::log2(static_cast<double>(std::max<std::size_t>(n, 1))));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

Algorithm algorithm_of(const Hyperparameters& hp) { return static_cast<Algorithm>(hp.index()); }

Hyperparameters default_hyperparameters(Algorithm a) {
  switch (a) {
    case Algorithm::LogisticRegression: return LogisticRegressionParams{};
    case Algorithm::NaiveBayes: return NaiveBayesParams{};
    case Algorithm::LinearSvm: return LinearSvmParams{};
    case Algorithm::DecisionTree: return DecisionTreeParams{};
    case Algorithm::RandomForest: return RandomForestParams{};
    case Algorithm::NeuralNetwork: return NeuralNetworkParams{};
  }
  return LogisticRegressionParams{};
}

nlohmann::json to_json(const Hyperparameters& hp) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        json j;
        if constexpr (std::is_same_v<T, LogisticRegressionParams>) {
          j["C"] = p.C;
          j["tolerance"] = p.tolerance;
          j["max_iterations"] = p.max_iterations;
        } else if constexpr (std::is_same_v<T, NaiveBayesParams>) {
          j["var_smoothing"] = p.var_smoothing;
        } else if constexpr (std::is_same_v<T, LinearSvmParams>) {
          j["C"] = p.C;
          j["kernel"] = "linear";
          j["tolerance"] = p.tolerance;
          j["max_iterations"] = p.max_iterations;
        } else if constexpr (std::is_same_v<T, DecisionTreeParams>) {
          j = tree_json(p.tree);
        } else if constexpr (std::is_same_v<T, RandomForestParams>) {
          j = tree_json(p.tree);
          j["bootstrap"] = p.bootstrap;
          j["n_estimators"] = p.n_estimators;
        } else {
          j["layers"] = {kHidden1, kHidden2, 1};
          j["epochs"] = p.epochs;
          j["keep_probability"] = p.keep_probability;
          j["batch_size"] = p.batch_size;
          j["learning_rate"] = p.learning_rate;
        }
        return j;
      },
      hp);
}

Hyperparameters hyperparameters_from_json(Algorithm a, const nlohmann::json& j) {
  Hyperparameters out;
  try {
    switch (a) {
      case Algorithm::LogisticRegression: {
        check_keys(j, {"C", "tolerance", "max_iterations"});
        LogisticRegressionParams p;
        p.C = j.value("C", p.C);
        p.tolerance = j.value("tolerance", p.tolerance);
        p.max_iterations = j.value("max_iterations", p.max_iterations);
        out = p;
        break;
      }
      case Algorithm::NaiveBayes: {
        check_keys(j, {"var_smoothing"});
        NaiveBayesParams p;
        p.var_smoothing = j.value("var_smoothing", p.var_smoothing);
        out = p;
        break;
      }
      case Algorithm::LinearSvm: {
        check_keys(j, {"C", "kernel", "tolerance", "max_iterations"});
        if (j.contains("kernel") && j.at("kernel") != "linear") throw Error("only the linear kernel is supported");
        LinearSvmParams p;
        p.C = j.value("C", p.C);
        p.tolerance = j.value("tolerance", p.tolerance);
        p.max_iterations = j.value("max_iterations", p.max_iterations);
        out = p;
        break;
      }
      case Algorithm::DecisionTree: {
        check_keys(j, {"max_depth", "max_features", "min_samples_split", "splitter", "criterion"});
        out = DecisionTreeParams{tree_from(j)};
        break;
      }
      case Algorithm::RandomForest: {
        check_keys(j, {"max_depth", "max_features", "min_samples_split", "splitter", "criterion", "bootstrap",
                       "n_estimators"});
        RandomForestParams p;
        p.tree = tree_from(j);
        if (!j.contains("max_features")) p.tree.max_features = MaxFeatures::Sqrt;
        p.bootstrap = j.value("bootstrap", p.bootstrap);
        p.n_estimators = j.value("n_estimators", p.n_estimators);
        out = p;
        break;
      }
      case Algorithm::NeuralNetwork: {
        check_keys(j, {"layers", "epochs", "keep_probability", "batch_size", "learning_rate"});
        if (j.contains("layers") && j.at("layers") != json({kHidden1, kHidden2, 1})) {
          throw Error("the network layout is fixed at 128-64-1");
        }
        NeuralNetworkParams p;
        p.epochs = j.value("epochs", p.epochs);
        p.keep_probability = j.value("keep_probability", p.keep_probability);
        p.batch_size = j.value("batch_size", p.batch_size);
        p.learning_rate = j.value("learning_rate", p.learning_rate);
        out = p;
        break;
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("bad hyperparameters: ") + e.what());
  }
  validate(out);
  return out;
}

void validate(const Hyperparameters& hp) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LogisticRegressionParams> || std::is_same_v<T, LinearSvmParams>) {
          if (!(p.C > 0.0)) throw Error("C must be positive");
          if (p.max_iterations < 1) throw Error("max_iterations must be positive");
        } else if constexpr (std::is_same_v<T, NaiveBayesParams>) {
          if (!(p.var_smoothing >= 0.0)) throw Error("var_smoothing must be non-negative");
        } else if constexpr (std::is_same_v<T, DecisionTreeParams>) {
          check_tree(p.tree);
        } else if constexpr (std::is_same_v<T, RandomForestParams>) {
          check_tree(p.tree);
          if (p.n_estimators < 1) throw Error("n_estimators must be at least 1");
        } else {
          if (p.epochs < 1) throw Error("epochs must be positive");
          if (!(p.keep_probability > 0.0 && p.keep_probability <= 1.0)) {
            throw Error("keep_probability must lie in (0, 1]");
          }
          if (p.batch_size < 1) throw Error("batch_size must be positive");
          if (!(p.learning_rate > 0.0)) throw Error("learning_rate must be positive");
        }
      },
      hp);
}

Hyperparameters sample_hyperparameters(Algorithm a, Rng& rng, const SearchSpace& s) {
  auto sample_tree = [&](TreeParams& t) {
    const auto depth = rng.integer(s.depth_min, s.depth_max + 1);  // depth_max + 1 stands for unlimited
    t.max_depth = depth > s.depth_max ? std::nullopt : std::optional<int>(static_cast<int>(depth));
    t.max_features = kMaxFeatures[rng.index(3)];
    t.min_samples_split = static_cast<int>(rng.integer(s.min_split_min, s.min_split_max));
    t.splitter = kSplitters[rng.index(2)];
    t.criterion = kCriteria[rng.index(2)];
  };
  switch (a) {
    case Algorithm::LogisticRegression: {
      LogisticRegressionParams p;
      p.C = log_uniform(rng, s.c_min, s.c_max);
      return p;
    }
    case Algorithm::NaiveBayes: {
      NaiveBayesParams p;
      p.var_smoothing = log_uniform(rng, s.var_smoothing_min, s.var_smoothing_max);
      return p;
    }
    case Algorithm::LinearSvm: {
      LinearSvmParams p;
      p.C = log_uniform(rng, s.c_min, s.c_max);
      return p;
    }
    case Algorithm::DecisionTree: {
      DecisionTreeParams p;
      sample_tree(p.tree);
      return p;
    }
    case Algorithm::RandomForest: {
      RandomForestParams p;
      sample_tree(p.tree);
      p.bootstrap = rng.index(2) == 1;
      p.n_estimators = static_cast<int>(rng.integer(s.estimators_min, s.estimators_max));
      return p;
    }
    case Algorithm::NeuralNetwork: {
      NeuralNetworkParams p;
      p.epochs = s.nn_epochs;
      return p;
    }
  }
  return default_hyperparameters(a);
}

}  // namespace refpred::ml
