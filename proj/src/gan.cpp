// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/gan.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hefed::gan {

namespace {

constexpr std::uint64_t kGeneratorStream = 0x67656e;
constexpr std::uint64_t kDiscriminatorStream = 0x646973;
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kShuffleStream = 2;

nn::Mlpd build(Eigen::Index in, const std::vector<Eigen::Index>& hidden, Eigen::Index out,
               nn::Activation last, std::uint64_t seed) {
  std::vector<Eigen::Index> widths{in};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(out);
  std::vector<nn::Activation> acts(hidden.size(), nn::Activation::kLeakyRelu);
  acts.push_back(last);
  return nn::Mlpd::random(widths, acts, seed);
}

}  // namespace

GanPair make_pair(const GanConfig& cfg) {
  if (cfg.latent_dim <= 0 || cfg.data_dim <= 0) throw std::invalid_argument("make_pair: dims must be positive");
  const auto seed = make_stream(cfg.seed, kGeneratorStream)();
  const auto dseed = make_stream(cfg.seed, kDiscriminatorStream)();
  return {build(cfg.latent_dim, cfg.generator_hidden, cfg.data_dim, nn::Activation::kIdentity, seed),
          build(cfg.data_dim, cfg.discriminator_hidden, 1, nn::Activation::kSigmoid, dseed)};
}

GanRng GanRng::from_seed(std::uint64_t seed) {
  return {make_stream(seed, kNoiseStream), make_stream(seed, kShuffleStream)};
}

nn::MatrixXd sample_noise(std::size_t n, Eigen::Index latent_dim, SimRng& rng) {
  if (n == 0) throw std::invalid_argument("sample_noise: n must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  nn::MatrixXd z(latent_dim, static_cast<Eigen::Index>(n));
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    for (Eigen::Index r = 0; r < z.rows(); ++r) z(r, c) = normal(rng);
  }
  return z;
}

RoundMetrics train_discriminator_step(GanPair& pair, const nn::MatrixXd& real_batch,
                                      const GanConfig& cfg, GanRng& rng) {
  if (real_batch.cols() == 0) throw std::invalid_argument("train_discriminator_step: empty batch");
  const Eigen::Index b = real_batch.cols();
  const nn::MatrixXd z = sample_noise(static_cast<std::size_t>(b), cfg.latent_dim, rng.noise);
  const nn::MatrixXd fake = nn::forward(pair.generator, z);

  nn::ForwardCache<double> real_cache, fake_cache;
  const nn::MatrixXd d_real = nn::forward(pair.discriminator, real_batch, &real_cache);
  const nn::MatrixXd d_fake = nn::forward(pair.discriminator, fake, &fake_cache);

  RoundMetrics m;
  m.steps = 1;
  nn::MatrixXd g_real(1, b), g_fake(1, b);
  double real_loss = 0.0, fake_loss = 0.0;
  std::size_t real_hits = 0, fake_hits = 0;
  const double inv_b = 1.0 / static_cast<double>(b);
  for (Eigen::Index i = 0; i < b; ++i) {
    const auto r = nn::bce_loss(d_real(0, i), 1);
    const auto f = nn::bce_loss(d_fake(0, i), 0);
    real_loss += r.loss;
    fake_loss += f.loss;
    g_real(0, i) = r.grad * inv_b;
    g_fake(0, i) = f.grad * inv_b;
    real_hits += d_real(0, i) > 0.5 ? 1 : 0;
    fake_hits += d_fake(0, i) < 0.5 ? 1 : 0;
  }
  m.d_loss = (real_loss + fake_loss) * inv_b;
  m.d_real_acc = static_cast<double>(real_hits) * inv_b;
  m.d_fake_acc = static_cast<double>(fake_hits) * inv_b;

  auto grad = nn::backward(pair.discriminator, real_cache, g_real);
  const auto grad_fake = nn::backward(pair.discriminator, fake_cache, g_fake);
  for (std::size_t k = 0; k < grad.weight.size(); ++k) {
    grad.weight[k] += grad_fake.weight[k];
    grad.bias[k] += grad_fake.bias[k];
  }
  nn::apply_sgd(pair.discriminator, grad, cfg.lr_d);
  return m;
}

RoundMetrics train_generator_step(GanPair& pair, const GanConfig& cfg, GanRng& rng) {
  const std::size_t b = std::max<std::size_t>(cfg.batch_size, 1);
  const nn::MatrixXd z = sample_noise(b, cfg.latent_dim, rng.noise);
  nn::ForwardCache<double> g_cache, d_cache;
  const nn::MatrixXd fake = nn::forward(pair.generator, z, &g_cache);
  const nn::MatrixXd d_fake = nn::forward(pair.discriminator, fake, &d_cache);

  RoundMetrics m;
  m.steps = 1;
  const double inv_b = 1.0 / static_cast<double>(b);
  nn::MatrixXd upstream(1, static_cast<Eigen::Index>(b));
  double loss = 0.0;
  for (Eigen::Index i = 0; i < upstream.cols(); ++i) {
    const auto r = nn::bce_loss(d_fake(0, i), 1);
    loss += r.loss;
    upstream(0, i) = r.grad * inv_b;
  }
  m.g_loss = loss * inv_b;

  // Backpropagate through D to its input only; D's own gradient is discarded.
  const auto through_d = nn::backward(pair.discriminator, d_cache, upstream);
  const auto grad_g = nn::backward(pair.generator, g_cache, through_d.input);
  nn::apply_sgd(pair.generator, grad_g, cfg.lr_g);
  return m;
}

RoundMetrics train_local(GanPair& pair, const data::Dataset& partition, const GanConfig& cfg,
                         GanRng& rng) {
  if (partition.size() == 0) throw std::invalid_argument("train_local: empty partition (degenerate client)");
  if (cfg.batch_size == 0) throw std::invalid_argument("train_local: batch_size must be positive");
  RoundMetrics total;
  std::size_t d_steps = 0, g_steps = 0;
  const auto n = static_cast<std::size_t>(partition.size());
  std::vector<Eigen::Index> order(n);
  for (std::size_t epoch = 0; epoch < cfg.local_epochs; ++epoch) {
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::shuffle(order.begin(), order.end(), rng.shuffle);
    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, n - start);
      nn::MatrixXd batch(partition.dim(), static_cast<Eigen::Index>(count));
      for (std::size_t i = 0; i < count; ++i) {
        batch.col(static_cast<Eigen::Index>(i)) = partition.samples.col(order[start + i]);
      }
      for (std::size_t k = 0; k < std::max<std::size_t>(cfg.d_steps_per_g, 1); ++k) {
        const auto d = train_discriminator_step(pair, batch, cfg, rng);
        total.d_loss += d.d_loss;
        total.d_real_acc += d.d_real_acc;
        total.d_fake_acc += d.d_fake_acc;
        ++d_steps;
      }
      total.g_loss += train_generator_step(pair, cfg, rng).g_loss;
      ++g_steps;
    }
  }
  if (d_steps > 0) {
    total.d_loss /= static_cast<double>(d_steps);
    total.d_real_acc /= static_cast<double>(d_steps);
    total.d_fake_acc /= static_cast<double>(d_steps);
  }
  if (g_steps > 0) total.g_loss /= static_cast<double>(g_steps);
  total.steps = g_steps;
  return total;
}

double generated_mode_distance(const GanPair& pair, const Eigen::Matrix2Xd& centers, std::size_t n,
                               std::uint64_t seed) {
  SimRng rng(seed);
  const nn::MatrixXd z = sample_noise(n, pair.generator.input_dim(), rng);
  return data::mean_distance_to_nearest(nn::forward(pair.generator, z), centers);
}

}  // namespace hefed::gan
