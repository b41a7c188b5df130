#pragma once

#include <array>

#include <json.hpp>

#include "refpred/ml/dataset.hpp"
#include "refpred/ml/hyperparameters.hpp"

namespace refpred::ml {

// Gaussian naive Bayes. Per-class means and (population) variances; every
// variance is increased by var_smoothing times the largest feature variance
// of the whole training set.
class GaussianNaiveBayes {
 public:
  static GaussianNaiveBayes fit(const Matrix& X, const Labels& y, const NaiveBayesParams& p);

  // log P(c) + sum_j log N(x_j; mu_cj, var_cj), one column per class.
  Matrix joint_log_likelihood(const Matrix& X) const;
  // P(class 1 | x).
  Vector predict_proba(const Matrix& X) const;

  const Matrix& means() const noexcept { return mean_; }          // 2 x d
  const Matrix& variances() const noexcept { return var_; }       // 2 x d, smoothing included
  const std::array<double, 2>& priors() const noexcept { return prior_; }

  nlohmann::json to_json() const;
  static GaussianNaiveBayes from_json(const nlohmann::json& j);

 private:
  Matrix mean_;
  Matrix var_;
  std::array<double, 2> prior_{0.5, 0.5};
};

}  // namespace refpred::ml
