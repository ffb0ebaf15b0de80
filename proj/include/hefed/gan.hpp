// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hefed/data.hpp"
#include "hefed/nn.hpp"
#include "hefed/rng.hpp"

namespace hefed::gan {

struct GanConfig {
  Eigen::Index latent_dim = 2;
  Eigen::Index data_dim = 2;
  std::vector<Eigen::Index> generator_hidden{32, 32};
  std::vector<Eigen::Index> discriminator_hidden{32, 32};
  std::size_t batch_size = 64;
  std::size_t local_epochs = 5;
  std::size_t d_steps_per_g = 1;
  double lr_g = 0.05;
  double lr_d = 0.05;
  std::uint64_t seed = 1;
};

struct GanPair {
  nn::Mlpd generator;      // latent -> ... -> data, leaky hidden, identity output
  nn::Mlpd discriminator;  // data -> ... -> 1, leaky hidden, sigmoid output
};

GanPair make_pair(const GanConfig& cfg);

/// Independent streams for noise draws and per-epoch shuffling.
struct GanRng {
  SimRng noise;
  SimRng shuffle;
  static GanRng from_seed(std::uint64_t seed);
};

struct RoundMetrics {
  double d_loss = 0.0;
  double g_loss = 0.0;
  double d_real_acc = 0.0;
  double d_fake_acc = 0.0;
  std::size_t steps = 0;  // 0 means empty (no training happened)

  bool empty() const { return steps == 0; }
};

/// latent_dim x n matrix of standard-normal draws.
nn::MatrixXd sample_noise(std::size_t n, Eigen::Index latent_dim, SimRng& rng);

/// One SGD step on D with loss mean BCE(D(x),1) + mean BCE(D(G(z)),0).
/// Fills d_loss, d_real_acc and d_fake_acc.
RoundMetrics train_discriminator_step(GanPair& pair, const nn::MatrixXd& real_batch,
                                      const GanConfig& cfg, GanRng& rng);

/// One SGD step on G with the non-saturating loss mean BCE(D(G(z)),1). Fills g_loss.
RoundMetrics train_generator_step(GanPair& pair, const GanConfig& cfg, GanRng& rng);

/// cfg.local_epochs shuffled passes over the partition; per minibatch,
/// cfg.d_steps_per_g discriminator steps then one generator step.
RoundMetrics train_local(GanPair& pair, const data::Dataset& partition, const GanConfig& cfg,
                         GanRng& rng);

/// Mean distance from n generated samples to the nearest ring mode.
double generated_mode_distance(const GanPair& pair, const Eigen::Matrix2Xd& centers, std::size_t n,
                               std::uint64_t seed);

}  // namespace hefed::gan
