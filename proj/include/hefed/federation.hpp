// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hefed/backend.hpp"
#include "hefed/client.hpp"
#include "hefed/data.hpp"
#include "hefed/gan.hpp"
#include "hefed/server.hpp"
#include "hefed/transport.hpp"

namespace hefed::fed {

struct DataConfig {
  std::string source = "ring";  // "ring" or "cifar10"
  std::size_t modes = 8;
  std::size_t per_mode = 500;
  double radius = 2.0;
  double sigma = 0.02;
  std::string cifar_path;
  std::size_t max_records = 0;
  bool pool_gray8 = true;
};

struct RunConfig {
  std::size_t clients = 3;
  std::size_t rounds = 10;
  BackendConfig backend;
  gan::GanConfig gan;
  DataConfig data;
  std::uint64_t seed = 42;
  bool shared_init = true;  // false: every client draws its own initial weights
  std::size_t eval_samples = 2000;
};

struct ClientState {
  std::uint32_t id = 0;
  gan::GanPair gan;
  data::Dataset partition;
  std::unique_ptr<ClientCodec> codec;
  gan::GanRng rng;
  std::vector<gan::RoundMetrics> history;
};

/// Model parameters divided by n in plaintext, ready for encoding.
nn::ParamVectord scaled_parameters(const nn::Mlpd& model, std::size_t n);

/// Sends this client's direct peer shares (no-op unless the backend needs it).
void client_share_phase(ClientState& cs, std::size_t n, Transport& transport, std::uint32_t round);

struct Upload {
  Bytes generator;
  Bytes discriminator;
};

/// Divides by n, encodes and encrypts the generator then the discriminator,
/// and uploads both to the server. Consumes any peer frames sent in the share
/// phase. Returns the payloads sent.
Upload client_prepare(ClientState& cs, std::size_t n, Transport& transport, std::uint32_t round);

/// Decrypts and decodes aggregates and installs them as the client's models.
void client_apply(ClientState& cs, const Bytes& generator_aggregate, const Bytes& discriminator_aggregate);

/// Receives both broadcasts for `round` from the transport and applies them.
void client_apply(ClientState& cs, Transport& transport, std::uint32_t round);

struct ClientRoundRow {
  std::size_t round = 0;
  std::size_t client = 0;
  gan::RoundMetrics metrics;
  std::uint64_t bytes_out = 0;
};

struct RoundRecord {
  std::size_t round = 0;
  double mode_distance = 0.0;          // NaN for non-ring data
  double max_aggregation_error = 0.0;  // max |fed-avg via backend - plaintext mean|
  double max_client_divergence = 0.0;  // max parameter spread across clients after apply
  std::uint64_t client_bytes_out = 0;  // per client, this round
  std::uint64_t server_bytes_out = 0;
  double wall_s = 0.0;
};

struct RunReport {
  RunConfig config;
  std::size_t generator_params = 0;
  std::size_t discriminator_params = 0;
  double initial_mode_distance = 0.0;
  std::vector<RoundRecord> rounds;
  std::vector<ClientRoundRow> rows;
  nn::VectorXd final_generator;
  nn::VectorXd final_discriminator;
  std::uint64_t total_bytes = 0;
  double wall_s = 0.0;
};

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partitions the data, runs the key ceremony, then `rounds` synchronous
/// rounds of local training, upload, aggregation and apply.
RunReport run_training(const RunConfig& cfg);

/// Fed-avg of the given per-client flat parameters through one backend,
/// exercising the full encode/encrypt/aggregate/decrypt path. Returns what
/// client 0 ends up holding.
nn::VectorXd federated_average(const BackendConfig& backend, const std::vector<nn::VectorXd>& params,
                               std::uint64_t seed);

}  // namespace hefed::fed
