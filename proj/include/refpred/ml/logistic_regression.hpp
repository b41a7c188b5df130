#pragma once

#include <json.hpp>

#include "refpred/ml/dataset.hpp"
#include "refpred/ml/hyperparameters.hpp"

namespace refpred::ml {

double sigmoid(double z);
// log(1 + exp(z)) without overflow.
double softplus(double z);

// L2-regularised logistic regression,
//   min  0.5 * |w|^2 + C * sum_i log(1 + exp(-s_i (w.x_i + b))),   s_i = 2y_i - 1
// with an unpenalised intercept, solved by Newton's method with backtracking.
class LogisticRegression {
 public:
  static LogisticRegression fit(const Matrix& X, const Labels& y, const LogisticRegressionParams& p);

  // Objective at theta = [w; b]. Writes the gradient when `grad` is given.
  static double objective(const Vector& theta, const Matrix& X, const Labels& y, double C, Vector* grad);

  Vector decision_function(const Matrix& X) const;
  Vector predict_proba(const Matrix& X) const;
  Vector feature_importance() const { return w_.cwiseAbs(); }

  const Vector& coefficients() const noexcept { return w_; }
  double intercept() const noexcept { return b_; }
  int iterations() const noexcept { return iterations_; }

  nlohmann::json to_json() const;
  static LogisticRegression from_json(const nlohmann::json& j);

  LogisticRegression() = default;
  LogisticRegression(Vector w, double b) : w_(std::move(w)), b_(b) {}

 private:
  Vector w_;
  double b_ = 0.0;
  int iterations_ = 0;
};

}  // namespace refpred::ml
