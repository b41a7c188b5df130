#include "refpred/ml/naive_bayes.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "refpred/error.hpp"

namespace refpred::ml {

namespace {

std::vector<double> flat(const Matrix& m) {
  std::vector<double> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

Matrix unflat(const std::vector<double>& v, Eigen::Index rows) {
  const auto cols = rows ? static_cast<Eigen::Index>(v.size()) / rows : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

}  // namespace

GaussianNaiveBayes GaussianNaiveBayes::fit(const Matrix& X, const Labels& y, const NaiveBayesParams& p) {
  check_labels(X, y);
  check_both_classes(y);
  const auto d = X.cols();

  const Vector overall_mean = X.colwise().mean().transpose();
  const double max_var =
      d == 0 ? 0.0 : ((X.rowwise() - overall_mean.transpose()).array().square().colwise().mean()).maxCoeff();
  const double epsilon = p.var_smoothing * max_var;

  GaussianNaiveBayes model;
  model.mean_ = Matrix::Zero(2, d);
  model.var_ = Matrix::Zero(2, d);
  std::array<double, 2> n{0.0, 0.0};
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    model.mean_.row(c) += X.row(i);
    n[static_cast<std::size_t>(c)] += 1.0;
  }
  for (int c = 0; c < 2; ++c) model.mean_.row(c) /= n[static_cast<std::size_t>(c)];
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    model.var_.row(c).array() += (X.row(i) - model.mean_.row(c)).array().square();
  }
  for (int c = 0; c < 2; ++c) {
    model.var_.row(c) /= n[static_cast<std::size_t>(c)];
    model.var_.row(c).array() += epsilon;
    // a constant feature with no smoothing would give a zero variance
    model.var_.row(c) = model.var_.row(c).cwiseMax(std::numeric_limits<double>::min());
  }
  const double total = n[0] + n[1];
  model.prior_ = {n[0] / total, n[1] / total};
  return model;
}

Matrix GaussianNaiveBayes::joint_log_likelihood(const Matrix& X) const {
  if (X.cols() != mean_.cols()) throw Error("feature count does not match the model");
  Matrix out(X.rows(), 2);
  for (int c = 0; c < 2; ++c) {
    double norm = 0.0;
    for (Eigen::Index j = 0; j < var_.cols(); ++j) norm += std::log(2.0 * std::numbers::pi * var_(c, j));
    const double log_prior = std::log(prior_[static_cast<std::size_t>(c)]);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double quad = ((X.row(i) - mean_.row(c)).array().square() / var_.row(c).array()).sum();
      out(i, c) = log_prior - 0.5 * norm - 0.5 * quad;
    }
  }
  return out;
}

Vector GaussianNaiveBayes::predict_proba(const Matrix& X) const {
  const Matrix jll = joint_log_likelihood(X);
  Vector p(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    // P(1|x) = 1 / (1 + exp(l0 - l1))
    const double diff = jll(i, 0) - jll(i, 1);
    p(i) = diff >= 0 ? std::exp(-diff) / (1.0 + std::exp(-diff)) : 1.0 / (1.0 + std::exp(diff));
  }
  return p;
}

nlohmann::json GaussianNaiveBayes::to_json() const {
  return {{"features", mean_.cols()}, {"means", flat(mean_)}, {"variances", flat(var_)}, {"priors", prior_}};
}

GaussianNaiveBayes GaussianNaiveBayes::from_json(const nlohmann::json& j) {
  GaussianNaiveBayes m;
  m.mean_ = unflat(j.at("means").get<std::vector<double>>(), 2);
  m.var_ = unflat(j.at("variances").get<std::vector<double>>(), 2);
  m.prior_ = j.at("priors").get<std::array<double, 2>>();
  return m;
}

}  // namespace refpred::ml
