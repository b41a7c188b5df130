#include "refpred/ml/scaler.hpp"

#include "refpred/error.hpp"

namespace refpred::ml {

MinMaxScaler MinMaxScaler::fit(const Matrix& X) {
  if (X.rows() == 0) throw Error("cannot fit a scaler on zero rows");
  return MinMaxScaler(X.colwise().minCoeff().transpose(), X.colwise().maxCoeff().transpose());
}

Matrix MinMaxScaler::transform(const Matrix& X) const {
  if (X.cols() != min_.size()) {
    throw CatalogMismatch("scaler fitted on " + std::to_string(min_.size()) + " features, got " +
                          std::to_string(X.cols()));
  }
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double range = max_(j) - min_(j);
    if (range > 0.0) {
      out.col(j) = (X.col(j).array() - min_(j)) / range;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

nlohmann::json MinMaxScaler::to_json() const {
  return {{"min", std::vector<double>(min_.data(), min_.data() + min_.size())},
          {"max", std::vector<double>(max_.data(), max_.data() + max_.size())}};
}

MinMaxScaler MinMaxScaler::from_json(const nlohmann::json& j) {
  const auto lo = j.at("min").get<std::vector<double>>();
  const auto hi = j.at("max").get<std::vector<double>>();
  if (lo.size() != hi.size()) throw Error("scaler bounds differ in length");
  return MinMaxScaler(Eigen::Map<const Vector>(lo.data(), static_cast<Eigen::Index>(lo.size())),
                      Eigen::Map<const Vector>(hi.data(), static_cast<Eigen::Index>(hi.size())));
}

bool looks_scaled(const Matrix& X, double eps) {
  if (X.size() == 0) return true;
  return X.minCoeff() >= -eps && X.maxCoeff() <= 1.0 + eps;
}

}  // namespace refpred::ml
