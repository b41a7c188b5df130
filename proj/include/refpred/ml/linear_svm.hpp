#pragma once

#include <cstdint>

#include <json.hpp>

#include "refpred/ml/dataset.hpp"
#include "refpred/ml/hyperparameters.hpp"

namespace refpred::ml {

// Linear soft-margin SVM,
//   min  0.5 * (|w|^2 + b^2) + C * sum_i max(0, 1 - s_i (w.x_i + b))
// solved by dual coordinate descent (the bias is an extra constant feature).
// Probabilities come from a sigmoid fitted to the training decision values
// (Platt scaling).
class LinearSvm {
 public:
  static LinearSvm fit(const Matrix& X, const Labels& y, const LinearSvmParams& p, std::uint64_t seed);

  Vector decision_function(const Matrix& X) const;
  Vector predict_proba(const Matrix& X) const;
  Vector feature_importance() const { return w_.cwiseAbs(); }

  const Vector& coefficients() const noexcept { return w_; }
  double intercept() const noexcept { return b_; }
  double platt_a() const noexcept { return a_; }
  double platt_b() const noexcept { return pb_; }

  nlohmann::json to_json() const;
  static LinearSvm from_json(const nlohmann::json& j);

 private:
  Vector w_;
  double b_ = 0.0;
  double a_ = -1.0;  // P(1|f) = 1 / (1 + exp(a f + pb))
  double pb_ = 0.0;
};

// Fits P(1|f) = 1 / (1 + exp(A f + B)) by Newton's method on the regularised
// targets of Platt (1999). Returns {A, B}.
std::pair<double, double> platt_calibrate(const Vector& decision, const Labels& y);

}  // namespace refpred::ml
