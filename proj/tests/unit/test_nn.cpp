// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hefed/nn.hpp"

namespace nn = hefed::nn;
using nn::Activation;

namespace {

nn::Mlpd seeded(std::vector<Eigen::Index> widths, std::vector<Activation> acts, std::uint64_t seed) {
  return nn::Mlpd::random(widths, acts, seed);
}

// Straight-line forward pass written without Eigen products.
std::vector<double> naive_forward(const nn::Mlpd& m, std::vector<double> x) {
  for (const auto& l : m.layers()) {
    std::vector<double> y(static_cast<std::size_t>(l.out()));
    for (Eigen::Index r = 0; r < l.out(); ++r) {
      double acc = l.bias(r);
      for (Eigen::Index c = 0; c < l.in(); ++c) acc += l.weight(r, c) * x[static_cast<std::size_t>(c)];
      switch (l.activation) {
        case Activation::kLeakyRelu: acc = acc > 0 ? acc : 0.2 * acc; break;
        case Activation::kSigmoid: acc = 1.0 / (1.0 + std::exp(-acc)); break;
        case Activation::kIdentity: break;
      }
      y[static_cast<std::size_t>(r)] = acc;
    }
    x = std::move(y);
  }
  return x;
}

double batch_bce(const nn::Mlpd& m, const nn::MatrixXd& x, const std::vector<int>& labels) {
  const auto out = nn::forward(m, x);
  double loss = 0;
  for (Eigen::Index i = 0; i < out.cols(); ++i) loss += nn::bce_loss(out(0, i), labels[i]).loss;
  return loss / static_cast<double>(out.cols());
}

}  // namespace

TEST(Forward, IdentityLayerPassesInputThrough) {
  nn::Mlpd m({{nn::MatrixXd::Identity(2, 2), nn::VectorXd::Zero(2), Activation::kIdentity}});
  const nn::VectorXd y = nn::forward(m, nn::VectorXd{{1.0, 2.0}});
  EXPECT_EQ(y(0), 1.0);
  EXPECT_EQ(y(1), 2.0);
}

TEST(Forward, ZeroSigmoidLayerGivesOneHalf) {
  nn::Mlpd m({{nn::MatrixXd::Zero(3, 2), nn::VectorXd(nn::VectorXd::Zero(3)), Activation::kSigmoid}});
  const nn::VectorXd y = nn::forward(m, nn::VectorXd{{-7.0, 12.5}});
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_EQ(y(i), 0.5);
}

TEST(Forward, MatchesNaiveReimplementation) {
  const auto m = seeded({2, 32, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 11);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> x{d(rng), d(rng)};
    const nn::VectorXd y = nn::forward(m, nn::VectorXd{{x[0], x[1]}});
    const auto ref = naive_forward(m, x);
    ASSERT_EQ(y.size(), 1);
    EXPECT_NEAR(y(0), ref[0], 1e-14);
    EXPECT_GT(y(0), 0.0);
    EXPECT_LT(y(0), 1.0);
  }
}

TEST(Forward, RejectsWrongInputWidth) {
  const auto m = seeded({2, 4, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 1);
  EXPECT_THROW(nn::forward(m, nn::VectorXd(nn::VectorXd::Zero(3))), nn::DimensionError);
}

TEST(Mlp, RejectsLayersThatDoNotChain) {
  std::vector<nn::Layer<double>> layers{
      {nn::MatrixXd::Zero(4, 2), nn::VectorXd::Zero(4), Activation::kLeakyRelu},
      {nn::MatrixXd::Zero(1, 3), nn::VectorXd::Zero(1), Activation::kSigmoid}};
  EXPECT_THROW(nn::Mlpd{layers}, nn::DimensionError);
}

TEST(Mlp, ParameterCountFormula) {
  for (const auto& widths : std::vector<std::vector<Eigen::Index>>{{2, 32, 32, 2}, {2, 32, 32, 1}, {5, 3}, {7, 1, 9, 4}}) {
    std::vector<Activation> acts(widths.size() - 1, Activation::kLeakyRelu);
    const auto m = seeded(widths, acts, 5);
    std::size_t expected = 0;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) expected += widths[i] * widths[i + 1] + widths[i + 1];
    EXPECT_EQ(m.parameter_count(), expected);
    EXPECT_EQ(nn::flatten(m).flat.size(), static_cast<Eigen::Index>(expected));
  }
}

TEST(Mlp, InitialisationWithinFanInBound) {
  const auto m = seeded({16, 8, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 9);
  for (const auto& l : m.layers()) {
    const double bound = std::sqrt(1.0 / static_cast<double>(l.in()));
    EXPECT_LE(l.weight.cwiseAbs().maxCoeff(), bound);
    EXPECT_LE(l.bias.cwiseAbs().maxCoeff(), bound);
  }
  EXPECT_EQ(m, seeded({16, 8, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 9));
}

TEST(Bce, AnalyticValues) {
  EXPECT_NEAR(nn::bce_loss(0.5, 1).loss, std::log(2.0), 1e-15);
  EXPECT_NEAR(nn::bce_loss(1.0 - 1e-12, 1).loss, 0.0, 1e-11);
  EXPECT_NEAR(nn::bce_loss(0.8, 1).grad, -1.25, 1e-15);
  EXPECT_NEAR(nn::bce_loss(0.8, 0).grad, 5.0, 1e-12);
}

TEST(Bce, ClampKeepsLossFinite) {
  for (double p : {0.0, 1.0, -3.0, 2.0}) {
    for (int y : {0, 1}) {
      const auto r = nn::bce_loss(p, y);
      EXPECT_TRUE(std::isfinite(r.loss));
      EXPECT_TRUE(std::isfinite(r.grad));
      EXPECT_GE(r.loss, 0.0);
    }
  }
}

TEST(Backward, ZeroUpstreamGivesZeroGradient) {
  const auto m = seeded({2, 8, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 4);
  nn::ForwardCache<double> cache;
  const nn::MatrixXd x = nn::MatrixXd::Random(2, 5);
  nn::forward(m, x, &cache);
  const auto g = nn::backward(m, cache, nn::MatrixXd(nn::MatrixXd::Zero(1, 5)));
  EXPECT_EQ(nn::flatten(g).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Backward, LinearLayerWeightGradientIsInput) {
  nn::Mlpd m({{nn::MatrixXd::Constant(1, 3, 0.3), nn::VectorXd::Constant(1, -0.1), Activation::kIdentity}});
  nn::ForwardCache<double> cache;
  const nn::MatrixXd x{{1.5}, {-2.0}, {0.25}};
  nn::forward(m, x, &cache);
  const auto g = nn::backward(m, cache, nn::MatrixXd(nn::MatrixXd::Ones(1, 1)));
  EXPECT_EQ(g.weight[0](0, 0), 1.5);
  EXPECT_EQ(g.weight[0](0, 1), -2.0);
  EXPECT_EQ(g.weight[0](0, 2), 0.25);
  EXPECT_EQ(g.bias[0](0), 1.0);
}

TEST(Backward, StaleCacheIsRejected) {
  const auto a = seeded({2, 8, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 4);
  const auto b = seeded({2, 6, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 4);
  nn::ForwardCache<double> cache;
  nn::forward(a, nn::MatrixXd(nn::MatrixXd::Random(2, 3)), &cache);
  EXPECT_THROW(nn::backward(b, cache, nn::MatrixXd(nn::MatrixXd::Ones(1, 3))), nn::DimensionError);
}

TEST(Backward, MatchesCentralFiniteDifferences) {
  const auto m = seeded({2, 8, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 21);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> d;
  nn::MatrixXd x(2, 16);
  std::vector<int> labels(16);
  for (Eigen::Index i = 0; i < 16; ++i) {
    x(0, i) = d(rng);
    x(1, i) = d(rng);
    labels[i] = static_cast<int>(i % 2);
  }

  nn::ForwardCache<double> cache;
  const auto out = nn::forward(m, x, &cache);
  nn::MatrixXd upstream(1, 16);
  for (Eigen::Index i = 0; i < 16; ++i) upstream(0, i) = nn::bce_loss(out(0, i), labels[i]).grad / 16.0;
  const nn::VectorXd analytic = nn::flatten(nn::backward(m, cache, upstream));

  const auto acts = m.activations();
  const auto base = nn::flatten(m);
  const double h = 1e-5;
  for (Eigen::Index k = 0; k < base.flat.size(); ++k) {
    auto plus = base, minus = base;
    plus.flat(k) += h;
    minus.flat(k) -= h;
    const double numeric =
        (batch_bce(nn::unflatten(plus, acts), x, labels) - batch_bce(nn::unflatten(minus, acts), x, labels)) / (2 * h);
    EXPECT_LE(std::abs(analytic(k) - numeric) / std::max(1.0, std::abs(numeric)), 1e-4) << "parameter " << k;
  }
}

TEST(Sgd, Arithmetic) {
  nn::Mlpd m({{nn::MatrixXd(nn::MatrixXd::Ones(1, 1)), nn::VectorXd::Ones(1), Activation::kIdentity}});
  nn::GradientSetd g{{nn::MatrixXd::Constant(1, 1, 0.5)}, {nn::VectorXd::Constant(1, 0.5)}, {}};
  EXPECT_EQ(nn::sgd_step(m, g, 0.0), m);
  const auto one = nn::sgd_step(m, g, 0.1);
  EXPECT_DOUBLE_EQ(one.layers()[0].weight(0, 0), 0.95);
  const auto twice = nn::sgd_step(nn::sgd_step(m, g, 0.1), g, 0.1);
  const auto once = nn::sgd_step(m, g, 0.2);
  EXPECT_NEAR(twice.layers()[0].weight(0, 0), once.layers()[0].weight(0, 0), 1e-15);
}

TEST(Sgd, ShapeMismatchThrows) {
  const auto m = seeded({2, 3, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 1);
  nn::GradientSetd g{{nn::MatrixXd::Zero(3, 2)}, {nn::VectorXd(nn::VectorXd::Zero(3))}, {}};
  EXPECT_THROW(nn::sgd_step(m, g, 0.1), nn::DimensionError);
}

TEST(Flatten, GeneratorAndDiscriminatorSizes) {
  const auto g = seeded({2, 32, 32, 2}, {Activation::kLeakyRelu, Activation::kLeakyRelu, Activation::kIdentity}, 1);
  const auto d = seeded({2, 32, 32, 1}, {Activation::kLeakyRelu, Activation::kLeakyRelu, Activation::kSigmoid}, 1);
  const auto pg = nn::flatten(g);
  EXPECT_EQ(pg.flat.size(), 96 + 1056 + 66);
  EXPECT_EQ(pg.tensor_count(), 6u);
  EXPECT_EQ(nn::flatten(d).flat.size(), 1185);
}

TEST(Flatten, OrderIsLayerThenWeightRowMajorThenBias) {
  nn::MatrixXd w{{1, 2, 3}, {4, 5, 6}};
  nn::Mlpd m({{w, nn::VectorXd{{7, 8}}, Activation::kIdentity}});
  const auto pv = nn::flatten(m);
  for (Eigen::Index i = 0; i < 8; ++i) EXPECT_EQ(pv.flat(i), static_cast<double>(i + 1));
}

TEST(Flatten, RoundTripIsBitExact) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const auto m = seeded({3, 17, 5, 2}, {Activation::kLeakyRelu, Activation::kSigmoid, Activation::kIdentity}, seed);
    const auto acts = m.activations();
    EXPECT_EQ(nn::unflatten(nn::flatten(m), acts), m);
  }
}

TEST(Flatten, InconsistentLengthThrows) {
  const auto m = seeded({2, 3, 1}, {Activation::kLeakyRelu, Activation::kSigmoid}, 1);
  auto pv = nn::flatten(m);
  pv.flat.conservativeResize(pv.flat.size() - 1);
  const auto acts = m.activations();
  EXPECT_THROW(nn::unflatten(pv, acts), nn::DimensionError);
}
