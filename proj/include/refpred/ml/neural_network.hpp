#pragma once

#include <cstdint>

#include <json.hpp>

#include "refpred/ml/dataset.hpp"
#include "refpred/ml/hyperparameters.hpp"

namespace refpred::ml {

// Dense d -> 128 -> 64 -> 1 network with rectifier hidden units, a logistic
// output and inverted dropout after each hidden layer. Trained on mean binary
// cross-entropy with Adam over shuffled mini-batches; weights start from
// Glorot-uniform draws, biases from zero.
class NeuralNetwork {
 public:
  struct DropoutMasks {
    Matrix hidden1;  // rows x 128, entries 0 or 1
    Matrix hidden2;  // rows x 64
  };

  explicit NeuralNetwork(std::size_t inputs = 0);

  static NeuralNetwork fit(const Matrix& X, const Labels& y, const NeuralNetworkParams& p, std::uint64_t seed);

  // Random initial weights for `inputs` features.
  static NeuralNetwork initialise(std::size_t inputs, std::uint64_t seed);

  // Mean cross-entropy over X. With masks, dropout uses them (scaled by
  // 1 / keep); without, no dropout is applied. Writes the gradient with
  // respect to parameters() when `grad` is given.
  double loss_and_gradient(const Matrix& X, const Labels& y, Vector* grad, const DropoutMasks* masks = nullptr,
                           double keep = 1.0) const;

  Vector predict_proba(const Matrix& X) const;

  // W1, b1, W2, b2, W3, b3 flattened column-major.
  Vector parameters() const;
  void set_parameters(const Vector& theta);
  std::size_t parameter_count() const;
  std::size_t inputs() const noexcept { return static_cast<std::size_t>(w1_.rows()); }

  nlohmann::json to_json() const;
  static NeuralNetwork from_json(const nlohmann::json& j);

 private:
  Matrix w1_;  // d x 128
  Vector b1_;
  Matrix w2_;  // 128 x 64
  Vector b2_;
  Matrix w3_;  // 64 x 1
  double b3_ = 0.0;
};

}  // namespace refpred::ml
