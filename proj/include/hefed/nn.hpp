// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// Dense multilayer perceptron with hand-derived backpropagation.
//
// Activations are stored column-per-sample: a batch of B inputs of width d is
// a d x B matrix. Gradients returned by backward() are summed over the batch
// columns; callers fold any 1/B averaging into the upstream gradient.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hefed::nn {

enum class Activation { kLeakyRelu, kSigmoid, kIdentity };

inline constexpr double kLeakySlope = 0.2;
inline constexpr double kProbabilityEpsilon = 1e-12;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
struct Layer {
  MatrixX<Scalar> weight;  // out x in
  VectorX<Scalar> bias;    // out
  Activation activation = Activation::kIdentity;

  Eigen::Index in() const { return weight.cols(); }
  Eigen::Index out() const { return weight.rows(); }
};

template <typename Scalar>
class Mlp {
 public:
  Mlp() = default;

  explicit Mlp(std::vector<Layer<Scalar>> layers) : layers_(std::move(layers)) {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      if (layers_[i].bias.size() != layers_[i].out()) {
        throw DimensionError("layer " + std::to_string(i) + ": bias length mismatch");
      }
      if (i > 0 && layers_[i - 1].out() != layers_[i].in()) {
        throw DimensionError("layer " + std::to_string(i) + ": input width does not chain");
      }
    }
  }

  /// widths = {in, h1, ..., out}; one activation per layer. Weights and biases
  /// are uniform in [-sqrt(1/fan_in), +sqrt(1/fan_in)].
  static Mlp random(std::span<const Eigen::Index> widths,
                    std::span<const Activation> activations, std::uint64_t seed) {
    if (widths.size() < 2 || activations.size() != widths.size() - 1) {
      throw DimensionError("Mlp::random: need one activation per layer");
    }
    std::mt19937_64 rng(seed);
    std::vector<Layer<Scalar>> layers;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
      const Eigen::Index in = widths[i], out = widths[i + 1];
      const double bound = std::sqrt(1.0 / static_cast<double>(in));
      std::uniform_real_distribution<double> dist(-bound, bound);
      Layer<Scalar> layer{MatrixX<Scalar>(out, in), VectorX<Scalar>(out), activations[i]};
      for (Eigen::Index r = 0; r < out; ++r) {
        for (Eigen::Index c = 0; c < in; ++c) layer.weight(r, c) = Scalar(dist(rng));
      }
      for (Eigen::Index r = 0; r < out; ++r) layer.bias(r) = Scalar(dist(rng));
      layers.push_back(std::move(layer));
    }
    return Mlp(std::move(layers));
  }

  const std::vector<Layer<Scalar>>& layers() const { return layers_; }
  std::vector<Layer<Scalar>>& layers() { return layers_; }

  Eigen::Index input_dim() const { return layers_.empty() ? 0 : layers_.front().in(); }
  Eigen::Index output_dim() const { return layers_.empty() ? 0 : layers_.back().out(); }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.out() * l.in() + l.out());
    return n;
  }

  std::vector<Activation> activations() const {
    std::vector<Activation> out;
    for (const auto& l : layers_) out.push_back(l.activation);
    return out;
  }

  bool operator==(const Mlp& other) const {
    if (layers_.size() != other.layers_.size()) return false;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const auto& a = layers_[i];
      const auto& b = other.layers_[i];
      if (a.activation != b.activation || a.weight.rows() != b.weight.rows() ||
          a.weight.cols() != b.weight.cols() || a.weight != b.weight || a.bias != b.bias) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Layer<Scalar>> layers_;
};

template <typename Scalar>
struct ForwardCache {
  std::vector<MatrixX<Scalar>> inputs;   // input to layer i
  std::vector<MatrixX<Scalar>> outputs;  // post-activation of layer i
};

/// Per-layer parameter gradients plus the gradient with respect to the input batch.
template <typename Scalar>
struct GradientSet {
  std::vector<MatrixX<Scalar>> weight;
  std::vector<VectorX<Scalar>> bias;
  MatrixX<Scalar> input;
};

/// Shape list plus the concatenated values, layer order, weight before bias,
/// weights row-major.
template <typename Scalar>
struct ParamVector {
  std::vector<std::vector<Eigen::Index>> shapes;
  VectorX<Scalar> flat;

  std::size_t tensor_count() const { return shapes.size(); }
  static Eigen::Index shape_size(const std::vector<Eigen::Index>& shape) {
    Eigen::Index n = 1;
    for (auto d : shape) n *= d;
    return n;
  }
  std::vector<Eigen::Index> tensor_sizes() const {
    std::vector<Eigen::Index> out;
    for (const auto& s : shapes) out.push_back(shape_size(s));
    return out;
  }
};

namespace detail {

template <typename Derived>
void activate_inplace(Eigen::MatrixBase<Derived>& z, Activation act) {
  using Scalar = typename Derived::Scalar;
  switch (act) {
    case Activation::kLeakyRelu:
      z = z.unaryExpr([](Scalar v) { return v > Scalar(0) ? v : Scalar(kLeakySlope) * v; });
      break;
    case Activation::kSigmoid:
      z = z.unaryExpr([](Scalar v) { return Scalar(1) / (Scalar(1) + std::exp(-v)); });
      break;
    case Activation::kIdentity:
      break;
  }
}

// Derivative expressed through the post-activation value y.
template <typename Scalar>
MatrixX<Scalar> activation_derivative(const MatrixX<Scalar>& y, Activation act) {
  switch (act) {
    case Activation::kLeakyRelu:
      return y.unaryExpr([](Scalar v) { return v > Scalar(0) ? Scalar(1) : Scalar(kLeakySlope); });
    case Activation::kSigmoid:
      return y.array() * (Scalar(1) - y.array());
    case Activation::kIdentity:
      break;
  }
  return MatrixX<Scalar>::Ones(y.rows(), y.cols());
}

}  // namespace detail

template <typename Scalar>
MatrixX<Scalar> forward(const Mlp<Scalar>& m, const MatrixX<Scalar>& x, ForwardCache<Scalar>* cache) {
  if (x.rows() != m.input_dim()) {
    throw DimensionError("forward: input has " + std::to_string(x.rows()) + " rows, network expects " +
                         std::to_string(m.input_dim()));
  }
  if (cache) {
    cache->inputs.clear();
    cache->outputs.clear();
  }
  MatrixX<Scalar> h = x;
  for (const auto& layer : m.layers()) {
    MatrixX<Scalar> z = layer.weight * h;
    z.colwise() += layer.bias;
    detail::activate_inplace(z, layer.activation);
    if (cache) {
      cache->inputs.push_back(std::move(h));
      cache->outputs.push_back(z);
    }
    h = std::move(z);
  }
  return h;
}

template <typename Scalar>
MatrixX<Scalar> forward(const Mlp<Scalar>& m, const MatrixX<Scalar>& x) {
  return forward(m, x, static_cast<ForwardCache<Scalar>*>(nullptr));
}

template <typename Scalar>
VectorX<Scalar> forward(const Mlp<Scalar>& m, const VectorX<Scalar>& x) {
  return forward(m, MatrixX<Scalar>(x)).col(0);
}

/// d_out has the shape of the forward output (out x B).
template <typename Scalar>
GradientSet<Scalar> backward(const Mlp<Scalar>& m, const ForwardCache<Scalar>& cache,
                             const MatrixX<Scalar>& d_out) {
  const auto& layers = m.layers();
  if (cache.inputs.size() != layers.size() || cache.outputs.size() != layers.size()) {
    throw DimensionError("backward: cache does not match network depth");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (cache.inputs[i].rows() != layers[i].in() || cache.outputs[i].rows() != layers[i].out()) {
      throw DimensionError("backward: stale cache at layer " + std::to_string(i));
    }
  }
  if (layers.empty() || d_out.rows() != layers.back().out() ||
      d_out.cols() != cache.outputs.back().cols()) {
    throw DimensionError("backward: upstream gradient shape mismatch");
  }

  GradientSet<Scalar> g;
  g.weight.resize(layers.size());
  g.bias.resize(layers.size());
  MatrixX<Scalar> upstream = d_out;
  for (std::size_t k = layers.size(); k-- > 0;) {
    const MatrixX<Scalar> delta =
        upstream.cwiseProduct(detail::activation_derivative(cache.outputs[k], layers[k].activation));
    g.weight[k] = delta * cache.inputs[k].transpose();
    g.bias[k] = delta.rowwise().sum();
    upstream = layers[k].weight.transpose() * delta;
  }
  g.input = std::move(upstream);
  return g;
}

template <typename Scalar>
void check_congruent(const Mlp<Scalar>& m, const GradientSet<Scalar>& g) {
  const auto& layers = m.layers();
  if (g.weight.size() != layers.size() || g.bias.size() != layers.size()) {
    throw DimensionError("gradient depth does not match network");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (g.weight[i].rows() != layers[i].out() || g.weight[i].cols() != layers[i].in() ||
        g.bias[i].size() != layers[i].out()) {
      throw DimensionError("gradient shape mismatch at layer " + std::to_string(i));
    }
  }
}

/// theta <- theta - lr * g, in place.
template <typename Scalar>
void apply_sgd(Mlp<Scalar>& m, const GradientSet<Scalar>& g, Scalar lr) {
  check_congruent(m, g);
  auto& layers = m.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].weight -= lr * g.weight[i];
    layers[i].bias -= lr * g.bias[i];
  }
}

template <typename Scalar>
Mlp<Scalar> sgd_step(Mlp<Scalar> m, const GradientSet<Scalar>& g, Scalar lr) {
  apply_sgd(m, g, lr);
  return m;
}

struct BceResult {
  double loss;
  double grad;  // d loss / d pred, evaluated at the clamped prediction
};

inline BceResult bce_loss(double pred, int label) {
  const double p = std::clamp(pred, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  const double y = label != 0 ? 1.0 : 0.0;
  const double loss = -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
  const double grad = -y / p + (1.0 - y) / (1.0 - p);
  return {std::max(loss, 0.0), grad};
}

template <typename Scalar>
ParamVector<Scalar> flatten(const Mlp<Scalar>& m) {
  ParamVector<Scalar> pv;
  pv.flat.resize(static_cast<Eigen::Index>(m.parameter_count()));
  Eigen::Index pos = 0;
  for (const auto& l : m.layers()) {
    pv.shapes.push_back({l.out(), l.in()});
    pv.shapes.push_back({l.out()});
    for (Eigen::Index r = 0; r < l.out(); ++r) {
      pv.flat.segment(pos, l.in()) = l.weight.row(r).transpose();
      pos += l.in();
    }
    pv.flat.segment(pos, l.out()) = l.bias;
    pos += l.out();
  }
  return pv;
}

/// Gradient flattened with the same ordering as flatten(m).
template <typename Scalar>
VectorX<Scalar> flatten(const GradientSet<Scalar>& g) {
  Eigen::Index total = 0;
  for (std::size_t i = 0; i < g.weight.size(); ++i) total += g.weight[i].size() + g.bias[i].size();
  VectorX<Scalar> flat(total);
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < g.weight.size(); ++i) {
    for (Eigen::Index r = 0; r < g.weight[i].rows(); ++r) {
      flat.segment(pos, g.weight[i].cols()) = g.weight[i].row(r).transpose();
      pos += g.weight[i].cols();
    }
    flat.segment(pos, g.bias[i].size()) = g.bias[i];
    pos += g.bias[i].size();
  }
  return flat;
}

template <typename Scalar>
Mlp<Scalar> unflatten(const ParamVector<Scalar>& pv, std::span<const Activation> activations) {
  if (pv.shapes.size() != 2 * activations.size()) {
    throw DimensionError("unflatten: expected weight and bias shape per layer");
  }
  Eigen::Index expected = 0;
  for (const auto& s : pv.shapes) expected += ParamVector<Scalar>::shape_size(s);
  if (expected != pv.flat.size()) {
    throw DimensionError("unflatten: flat length " + std::to_string(pv.flat.size()) +
                         " inconsistent with shapes (" + std::to_string(expected) + ")");
  }
  std::vector<Layer<Scalar>> layers;
  Eigen::Index pos = 0;
  for (std::size_t i = 0; i < activations.size(); ++i) {
    const auto& ws = pv.shapes[2 * i];
    const auto& bs = pv.shapes[2 * i + 1];
    if (ws.size() != 2 || bs.size() != 1 || bs[0] != ws[0]) {
      throw DimensionError("unflatten: malformed shapes for layer " + std::to_string(i));
    }
    Layer<Scalar> l{MatrixX<Scalar>(ws[0], ws[1]), VectorX<Scalar>(bs[0]), activations[i]};
    for (Eigen::Index r = 0; r < ws[0]; ++r) {
      l.weight.row(r) = pv.flat.segment(pos, ws[1]).transpose();
      pos += ws[1];
    }
    l.bias = pv.flat.segment(pos, bs[0]);
    pos += bs[0];
    layers.push_back(std::move(l));
  }
  return Mlp<Scalar>(std::move(layers));
}

/// Overwrites m's parameters with pv, keeping m's activations.
template <typename Scalar>
void assign_parameters(Mlp<Scalar>& m, const ParamVector<Scalar>& pv) {
  const auto acts = m.activations();
  Mlp<Scalar> fresh = unflatten(pv, std::span<const Activation>(acts));
  const auto& a = fresh.layers();
  const auto& b = m.layers();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].weight.rows() != b[i].weight.rows() || a[i].weight.cols() != b[i].weight.cols()) {
      throw DimensionError("assign_parameters: shape mismatch at layer " + std::to_string(i));
    }
  }
  m = std::move(fresh);
}

using Mlpd = Mlp<double>;
using ParamVectord = ParamVector<double>;
using GradientSetd = GradientSet<double>;
using MatrixXd = MatrixX<double>;
using VectorXd = VectorX<double>;

}  // namespace hefed::nn
