#pragma once

#include <json.hpp>

#include "refpred/ml/dataset.hpp"

namespace refpred::ml {

// Per-feature min-max scaling to [0, 1]. Features that are constant in the
// fitting data map to 0. Values outside the fitted range are not clipped.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  MinMaxScaler(Vector min, Vector max) : min_(std::move(min)), max_(std::move(max)) {}

  static MinMaxScaler fit(const Matrix& X);

  Matrix transform(const Matrix& X) const;
  bool fitted() const noexcept { return min_.size() > 0; }
  const Vector& min() const noexcept { return min_; }
  const Vector& max() const noexcept { return max_; }

  nlohmann::json to_json() const;
  static MinMaxScaler from_json(const nlohmann::json& j);

  bool operator==(const MinMaxScaler& o) const { return min_ == o.min_ && max_ == o.max_; }

 private:
  Vector min_;
  Vector max_;
};

// True when every value lies in [-eps, 1 + eps].
bool looks_scaled(const Matrix& X, double eps = 1e-9);

}  // namespace refpred::ml
