#include "refpred/ml/neural_network.hpp"

#include <cmath>
#include <numeric>

#include "refpred/error.hpp"
#include "refpred/ml/logistic_regression.hpp"
#include "refpred/rng.hpp"

namespace refpred::ml {

namespace {

void glorot(Matrix& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = rng.uniform(-limit, limit);
  }
}

std::vector<double> as_vector(const Matrix& m) { return std::vector<double>(m.data(), m.data() + m.size()); }

Matrix as_matrix(const std::vector<double>& v, Eigen::Index rows, Eigen::Index cols) {
  if (static_cast<Eigen::Index>(v.size()) != rows * cols) throw Error("malformed network weights");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

}  // namespace

NeuralNetwork::NeuralNetwork(std::size_t inputs)
    : w1_(Matrix::Zero(static_cast<Eigen::Index>(inputs), kHidden1)),
      b1_(Vector::Zero(kHidden1)),
      w2_(Matrix::Zero(kHidden1, kHidden2)),
      b2_(Vector::Zero(kHidden2)),
      w3_(Matrix::Zero(kHidden2, 1)) {}

NeuralNetwork NeuralNetwork::initialise(std::size_t inputs, std::uint64_t seed) {
  NeuralNetwork net(inputs);
  Rng rng(derive_seed(seed, "nn-init"));
  glorot(net.w1_, rng);
  glorot(net.w2_, rng);
  glorot(net.w3_, rng);
  return net;
}

std::size_t NeuralNetwork::parameter_count() const {
  return static_cast<std::size_t>(w1_.size() + b1_.size() + w2_.size() + b2_.size() + w3_.size() + 1);
}

Vector NeuralNetwork::parameters() const {
  Vector theta(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index o = 0;
  auto put = [&](const auto& m) {
    theta.segment(o, m.size()) = Eigen::Map<const Vector>(m.data(), m.size());
    o += m.size();
  };
  put(w1_);
  put(b1_);
  put(w2_);
  put(b2_);
  put(w3_);
  theta(o) = b3_;
  return theta;
}

void NeuralNetwork::set_parameters(const Vector& theta) {
  if (theta.size() != static_cast<Eigen::Index>(parameter_count())) throw Error("parameter vector has wrong size");
  Eigen::Index o = 0;
  auto take = [&](auto& m) {
    Eigen::Map<Vector>(m.data(), m.size()) = theta.segment(o, m.size());
    o += m.size();
  };
  take(w1_);
  take(b1_);
  take(w2_);
  take(b2_);
  take(w3_);
  b3_ = theta(o);
}

double NeuralNetwork::loss_and_gradient(const Matrix& X, const Labels& y, Vector* grad, const DropoutMasks* masks,
                                        double keep) const {
  const auto m = X.rows();
  const double scale = masks ? 1.0 / keep : 1.0;

  const Matrix z1 = (X * w1_).rowwise() + b1_.transpose();
  Matrix a1 = z1.cwiseMax(0.0);
  if (masks) a1 = a1.cwiseProduct(masks->hidden1) * scale;
  const Matrix z2 = (a1 * w2_).rowwise() + b2_.transpose();
  Matrix a2 = z2.cwiseMax(0.0);
  if (masks) a2 = a2.cwiseProduct(masks->hidden2) * scale;
  const Vector z3 = (a2 * w3_).col(0).array() + b3_;

  double loss = 0.0;
  Vector dz3(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double yi = y[static_cast<std::size_t>(i)];
    loss += softplus(z3(i)) - yi * z3(i);
    dz3(i) = (sigmoid(z3(i)) - yi) / static_cast<double>(m);
  }
  loss /= static_cast<double>(m);
  if (!grad) return loss;

  const Matrix dw3 = a2.transpose() * dz3;
  const double db3 = dz3.sum();
  Matrix da2 = dz3 * w3_.transpose();
  if (masks) da2 = da2.cwiseProduct(masks->hidden2) * scale;
  const Matrix dz2 = da2.cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
  const Matrix dw2 = a1.transpose() * dz2;
  const Vector db2 = dz2.colwise().sum().transpose();
  Matrix da1 = dz2 * w2_.transpose();
  if (masks) da1 = da1.cwiseProduct(masks->hidden1) * scale;
  const Matrix dz1 = da1.cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  const Matrix dw1 = X.transpose() * dz1;
  const Vector db1 = dz1.colwise().sum().transpose();

  grad->resize(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index o = 0;
  auto put = [&](const auto& g) {
    grad->segment(o, g.size()) = Eigen::Map<const Vector>(g.data(), g.size());
    o += g.size();
  };
  put(dw1);
  put(db1);
  put(dw2);
  put(db2);
  put(dw3);
  (*grad)(o) = db3;
  return loss;
}

NeuralNetwork NeuralNetwork::fit(const Matrix& X, const Labels& y, const NeuralNetworkParams& p, std::uint64_t seed) {
  check_labels(X, y);
  if (X.rows() == 0) throw Error("cannot train on zero rows");
  auto net = initialise(static_cast<std::size_t>(X.cols()), seed);
  Rng rng(derive_seed(seed, "nn-train"));

  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  Vector theta = net.parameters();
  Vector m1 = Vector::Zero(theta.size());
  Vector m2 = Vector::Zero(theta.size());
  Vector grad;
  double b1t = 1.0, b2t = 1.0;

  const auto n = static_cast<std::size_t>(X.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(p.batch_size);

  for (int epoch = 0; epoch < p.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += batch) {
      const auto len = std::min(batch, n - start);
      const std::span<const std::size_t> idx(order.data() + start, len);
      const Matrix xb = select_rows(X, idx);
      const Labels yb = select(y, idx);

      DropoutMasks masks{Matrix(static_cast<Eigen::Index>(len), kHidden1),
                         Matrix(static_cast<Eigen::Index>(len), kHidden2)};
      for (auto* mm : {&masks.hidden1, &masks.hidden2}) {
        for (Eigen::Index c = 0; c < mm->cols(); ++c) {
          for (Eigen::Index r = 0; r < mm->rows(); ++r) (*mm)(r, c) = rng.uniform() < p.keep_probability ? 1.0 : 0.0;
        }
      }
      net.set_parameters(theta);
      net.loss_and_gradient(xb, yb, &grad, &masks, p.keep_probability);

      b1t *= kBeta1;
      b2t *= kBeta2;
      m1 = kBeta1 * m1 + (1.0 - kBeta1) * grad;
      m2 = kBeta2 * m2 + (1.0 - kBeta2) * grad.cwiseProduct(grad);
      const double lr = p.learning_rate * std::sqrt(1.0 - b2t) / (1.0 - b1t);
      theta.array() -= lr * m1.array() / (m2.array().sqrt() + kEps);
    }
  }
  net.set_parameters(theta);
  return net;
}

Vector NeuralNetwork::predict_proba(const Matrix& X) const {
  if (X.cols() != w1_.rows()) throw Error("feature count does not match the model");
  const Matrix a1 = ((X * w1_).rowwise() + b1_.transpose()).cwiseMax(0.0);
  const Matrix a2 = ((a1 * w2_).rowwise() + b2_.transpose()).cwiseMax(0.0);
  const Vector z3 = (a2 * w3_).col(0).array() + b3_;
  return z3.unaryExpr([](double z) { return sigmoid(z); });
}

nlohmann::json NeuralNetwork::to_json() const {
  return {{"inputs", w1_.rows()},   {"w1", as_vector(w1_)}, {"b1", as_vector(b1_)}, {"w2", as_vector(w2_)},
          {"b2", as_vector(b2_)}, {"w3", as_vector(w3_)}, {"b3", b3_}};
}

NeuralNetwork NeuralNetwork::from_json(const nlohmann::json& j) {
  const auto d = j.at("inputs").get<Eigen::Index>();
  NeuralNetwork net(static_cast<std::size_t>(d));
  net.w1_ = as_matrix(j.at("w1").get<std::vector<double>>(), d, kHidden1);
  net.b1_ = as_matrix(j.at("b1").get<std::vector<double>>(), kHidden1, 1);
  net.w2_ = as_matrix(j.at("w2").get<std::vector<double>>(), kHidden1, kHidden2);
  net.b2_ = as_matrix(j.at("b2").get<std::vector<double>>(), kHidden2, 1);
  net.w3_ = as_matrix(j.at("w3").get<std::vector<double>>(), kHidden2, 1);
  net.b3_ = j.at("b3").get<double>();
  return net;
}

}  // namespace refpred::ml
