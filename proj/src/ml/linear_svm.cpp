#include "refpred/ml/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <spdlog/spdlog.h>

#include "refpred/error.hpp"
#include "refpred/rng.hpp"

namespace refpred::ml {

std::pair<double, double> platt_calibrate(const Vector& f, const Labels& y) {
  const auto n = f.size();
  double prior1 = 0, prior0 = 0;
  for (int v : y) (v == 1 ? prior1 : prior0) += 1.0;
  const double hi = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo = 1.0 / (prior0 + 2.0);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] == 1 ? hi : lo;

  double A = 0.0, B = std::log((prior0 + 1.0) / (prior1 + 1.0));
  auto fval = [&](double a, double b) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double fa = f(i) * a + b;
      const double ti = t[static_cast<std::size_t>(i)];
      v += fa >= 0 ? ti * fa + std::log1p(std::exp(-fa)) : (ti - 1.0) * fa + std::log1p(std::exp(fa));
    }
    return v;
  };
  constexpr double kSigma = 1e-12;
  double value = fval(A, B);
  for (int it = 0; it < 100; ++it) {
    double h11 = kSigma, h22 = kSigma, h21 = 0, g1 = 0, g2 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double fa = f(i) * A + B;
      double p, q;
      if (fa >= 0) {
        p = std::exp(-fa) / (1.0 + std::exp(-fa));
        q = 1.0 / (1.0 + std::exp(-fa));
      } else {
        p = 1.0 / (1.0 + std::exp(fa));
        q = std::exp(fa) / (1.0 + std::exp(fa));
      }
      const double d2 = p * q;
      h11 += f(i) * f(i) * d2;
      h22 += d2;
      h21 += f(i) * d2;
      const double d1 = t[static_cast<std::size_t>(i)] - p;
      g1 += f(i) * d1;
      g2 += d1;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double step = 1.0;
    bool moved = false;
    while (step >= 1e-10) {
      const double nA = A + step * dA, nB = B + step * dB;
      const double nv = fval(nA, nB);
      if (nv < value + 1e-4 * step * gd) {
        A = nA;
        B = nB;
        value = nv;
        moved = true;
        break;
      }
      step /= 2.0;
    }
    if (!moved) break;
  }
  return {A, B};
}

LinearSvm LinearSvm::fit(const Matrix& X, const Labels& y, const LinearSvmParams& p, std::uint64_t seed) {
  check_labels(X, y);
  check_both_classes(y);
  const auto n = X.rows();
  const auto d = X.cols();

  Vector w = Vector::Zero(d);
  double b = 0.0;
  Vector alpha = Vector::Zero(n);
  Vector qii(n);
  for (Eigen::Index i = 0; i < n; ++i) qii(i) = X.row(i).squaredNorm() + 1.0;

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, "svm"));
  const double U = p.C;

  int epoch = 0;
  for (; epoch < p.max_iterations; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double max_pg = -HUGE_VAL, min_pg = HUGE_VAL;
    for (auto idx : order) {
      const auto i = static_cast<Eigen::Index>(idx);
      const double s = y[idx] == 1 ? 1.0 : -1.0;
      const double G = s * (X.row(i).dot(w) + b) - 1.0;
      double pg = G;
      if (alpha(i) <= 0.0) {
        pg = std::min(G, 0.0);
      } else if (alpha(i) >= U) {
        pg = std::max(G, 0.0);
      }
      max_pg = std::max(max_pg, pg);
      min_pg = std::min(min_pg, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha(i);
        alpha(i) = std::clamp(old - G / qii(i), 0.0, U);
        const double delta = (alpha(i) - old) * s;
        w += delta * X.row(i).transpose();
        b += delta;
      }
    }
    if (max_pg - min_pg <= p.tolerance) break;
  }
  if (epoch == p.max_iterations) spdlog::debug("linear SVM stopped after {} passes", epoch);

  LinearSvm model;
  model.w_ = std::move(w);
  model.b_ = b;
  std::tie(model.a_, model.pb_) = platt_calibrate(model.decision_function(X), y);
  return model;
}

Vector LinearSvm::decision_function(const Matrix& X) const {
  if (X.cols() != w_.size()) throw Error("feature count does not match the model");
  return (X * w_).array() + b_;
}

Vector LinearSvm::predict_proba(const Matrix& X) const {
  const Vector f = decision_function(X);
  Vector out(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double fa = f(i) * a_ + pb_;
    out(i) = fa >= 0 ? std::exp(-fa) / (1.0 + std::exp(-fa)) : 1.0 / (1.0 + std::exp(fa));
  }
  return out;
}

nlohmann::json LinearSvm::to_json() const {
  return {{"coefficients", std::vector<double>(w_.data(), w_.data() + w_.size())},
          {"intercept", b_},
          {"platt", {a_, pb_}}};
}

LinearSvm LinearSvm::from_json(const nlohmann::json& j) {
  LinearSvm m;
  const auto w = j.at("coefficients").get<std::vector<double>>();
  m.w_ = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
  m.b_ = j.at("intercept").get<double>();
  const auto platt = j.at("platt").get<std::vector<double>>();
  if (platt.size() != 2) throw Error("malformed calibration parameters");
  m.a_ = platt[0];
  m.pb_ = platt[1];
  return m;
}

}  // namespace refpred::ml
