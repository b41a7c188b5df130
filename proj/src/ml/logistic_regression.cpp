#include "refpred/ml/logistic_regression.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "refpred/error.hpp"

namespace refpred::ml {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double LogisticRegression::objective(const Vector& theta, const Matrix& X, const Labels& y, double C, Vector* grad) {
  const auto d = X.cols();
  const auto w = theta.head(d);
  const double b = theta(d);
  const Vector z = (X * w).array() + b;
  double loss = 0.5 * w.squaredNorm();
  Vector residual(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double s = y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    loss += C * softplus(-s * z(i));
    residual(i) = sigmoid(z(i)) - y[static_cast<std::size_t>(i)];
  }
  if (grad) {
    grad->resize(d + 1);
    grad->head(d) = w + C * (X.transpose() * residual);
    (*grad)(d) = C * residual.sum();
  }
  return loss;
}

LogisticRegression LogisticRegression::fit(const Matrix& X, const Labels& y, const LogisticRegressionParams& p) {
  check_labels(X, y);
  const auto d = X.cols();
  const auto n = X.rows();
  Vector theta = Vector::Zero(d + 1);
  Vector grad;
  double f = objective(theta, X, y, p.C, &grad);
  const double g0 = std::max(1.0, grad.lpNorm<Eigen::Infinity>());

  LogisticRegression model;
  int it = 0;
  for (; it < p.max_iterations; ++it) {
    if (grad.lpNorm<Eigen::Infinity>() <= p.tolerance * g0) break;
    const Vector z = (X * theta.head(d)).array() + theta(d);
    Vector weight(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = sigmoid(z(i));
      weight(i) = s * (1.0 - s);
    }
    Matrix Xb(n, d + 1);
    Xb.leftCols(d) = X;
    Xb.col(d).setOnes();
    Matrix H = p.C * (Xb.transpose() * weight.asDiagonal() * Xb);
    H.topLeftCorner(d, d).diagonal().array() += 1.0;
    H(d, d) += 1e-12;
    const Vector step = H.ldlt().solve(-grad);

    // Armijo backtracking
    const double slope = grad.dot(step);
    double t = 1.0;
    Vector next = theta + step;
    Vector next_grad;
    double next_f = objective(next, X, y, p.C, &next_grad);
    while (next_f > f + 1e-4 * t * slope && t > 1e-10) {
      t *= 0.5;
      next = theta + t * step;
      next_f = objective(next, X, y, p.C, &next_grad);
    }
    if (!(next_f <= f)) break;
    const bool stalled = f - next_f <= 1e-15 * std::max(1.0, std::abs(f));
    theta = std::move(next);
    grad = std::move(next_grad);
    f = next_f;
    if (stalled) break;
  }
  if (it == p.max_iterations) spdlog::debug("logistic regression stopped after {} iterations", it);
  model.w_ = theta.head(d);
  model.b_ = theta(d);
  model.iterations_ = it;
  return model;
}

Vector LogisticRegression::decision_function(const Matrix& X) const {
  if (X.cols() != w_.size()) throw Error("feature count does not match the model");
  return (X * w_).array() + b_;
}

Vector LogisticRegression::predict_proba(const Matrix& X) const {
  return decision_function(X).unaryExpr([](double z) { return sigmoid(z); });
}

nlohmann::json LogisticRegression::to_json() const {
  return {{"coefficients", std::vector<double>(w_.data(), w_.data() + w_.size())}, {"intercept", b_}};
}

LogisticRegression LogisticRegression::from_json(const nlohmann::json& j) {
  const auto w = j.at("coefficients").get<std::vector<double>>();
  return LogisticRegression(Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size())),
                            j.at("intercept").get<double>());
}

}  // namespace refpred::ml
