// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/federation.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace hefed::fed {

namespace {

// Stream tags for make_stream; each consumer of the run seed gets its own.
constexpr std::uint64_t kDataStream = 0x10;
constexpr std::uint64_t kPartitionStream = 0x11;
constexpr std::uint64_t kCeremonyStream = 0x12;
constexpr std::uint64_t kInitStream = 0x13;
constexpr std::uint64_t kTrainStream = 0x14;
constexpr std::uint64_t kEvalStream = 0x15;

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  auto rng = make_stream(seed, stream);
  rng.discard(index);
  return rng();
}

data::Dataset load_dataset(const DataConfig& dc, std::uint64_t seed) {
  if (dc.source == "ring") {
    return data::gen_gaussian_ring(dc.modes, dc.per_mode, dc.radius, dc.sigma, derive(seed, kDataStream));
  }
  if (dc.source == "cifar10") {
    if (dc.cifar_path.empty()) throw std::invalid_argument("data.cifar_path is required for cifar10");
    auto ds = data::load_cifar10(dc.cifar_path, dc.max_records);
    return dc.pool_gray8 ? data::pool_cifar_gray8(ds) : ds;
  }
  throw std::invalid_argument("unknown data source '" + dc.source + "'");
}

void send_peer_frames(ClientState& cs, const nn::Mlpd& model, std::size_t n, Channel channel,
                      Transport& transport, std::uint32_t round) {
  const auto frames = cs.codec->peer_frames(scaled_parameters(model, n));
  for (std::uint32_t p = 0; p < frames.size(); ++p) {
    if (p == cs.id || frames[p].empty()) continue;
    transport.send(cs.id, p, round, channel, frames[p]);
  }
}

double max_abs_diff(const nn::VectorXd& a, const nn::VectorXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

// Plaintext fed-avg in the server's summation order: scaled client 0, then += the rest.
nn::VectorXd plaintext_mean(const std::vector<nn::VectorXd>& flats) {
  const double n = static_cast<double>(flats.size());
  nn::VectorXd s = flats[0] / n;
  for (std::size_t c = 1; c < flats.size(); ++c) s += flats[c] / n;
  return s;
}

}  // namespace

nn::ParamVectord scaled_parameters(const nn::Mlpd& model, std::size_t n) {
  if (n == 0) throw std::invalid_argument("scaled_parameters: n must be positive");
  auto pv = nn::flatten(model);
  pv.flat /= static_cast<double>(n);
  return pv;
}

void client_share_phase(ClientState& cs, std::size_t n, Transport& transport, std::uint32_t round) {
  send_peer_frames(cs, cs.gan.generator, n, Channel::kGenerator, transport, round);
  send_peer_frames(cs, cs.gan.discriminator, n, Channel::kDiscriminator, transport, round);
}

Upload client_prepare(ClientState& cs, std::size_t n, Transport& transport, std::uint32_t round) {
  std::map<Channel, std::map<std::uint32_t, Bytes>> peers;
  while (transport.has_pending(cs.id)) {
    Envelope e = transport.receive(cs.id);
    if (e.round != round) {
      throw RoundMismatch("client " + std::to_string(cs.id) + " got a peer frame for round " + std::to_string(e.round));
    }
    peers[e.channel][e.from] = std::move(e.body);
  }
  auto collect = [&peers](Channel ch) {
    std::vector<Bytes> out;
    for (auto& [from, body] : peers[ch]) out.push_back(std::move(body));
    return out;
  };
  const auto g_peers = collect(Channel::kGenerator);
  const auto d_peers = collect(Channel::kDiscriminator);

  Upload up;
  up.generator = cs.codec->seal(scaled_parameters(cs.gan.generator, n), g_peers);
  up.discriminator = cs.codec->seal(scaled_parameters(cs.gan.discriminator, n), d_peers);
  transport.send(cs.id, transport.server_id(), round, Channel::kGenerator, up.generator);
  transport.send(cs.id, transport.server_id(), round, Channel::kDiscriminator, up.discriminator);
  return up;
}

void client_apply(ClientState& cs, const Bytes& generator_aggregate, const Bytes& discriminator_aggregate) {
  auto g = nn::flatten(cs.gan.generator);
  g.flat = cs.codec->open(generator_aggregate, g);
  auto d = nn::flatten(cs.gan.discriminator);
  d.flat = cs.codec->open(discriminator_aggregate, d);
  nn::assign_parameters(cs.gan.generator, g);
  nn::assign_parameters(cs.gan.discriminator, d);
}

void client_apply(ClientState& cs, Transport& transport, std::uint32_t round) {
  Bytes g, d;
  bool have_g = false, have_d = false;
  for (int i = 0; i < 2; ++i) {
    Envelope e = transport.receive(cs.id);
    if (e.round != round) {
      throw RoundMismatch("client " + std::to_string(cs.id) + " got an aggregate for round " + std::to_string(e.round));
    }
    if (e.channel == Channel::kGenerator && !have_g) {
      g = std::move(e.body);
      have_g = true;
    } else if (e.channel == Channel::kDiscriminator && !have_d) {
      d = std::move(e.body);
      have_d = true;
    } else {
      throw std::runtime_error("client " + std::to_string(cs.id) + " got an unexpected broadcast");
    }
  }
  client_apply(cs, g, d);
}

RunReport run_training(const RunConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  const auto run_start = Clock::now();
  if (cfg.clients == 0) throw std::invalid_argument("run_training: clients must be positive");

  RunReport report;
  report.config = cfg;

  const data::Dataset dataset = load_dataset(cfg.data, cfg.seed);
  const bool ring = cfg.data.source == "ring";
  const Eigen::Matrix2Xd centers = ring ? data::ring_centers(cfg.data.modes, cfg.data.radius) : Eigen::Matrix2Xd();
  auto parts = data::partition(dataset, cfg.clients, derive(cfg.seed, kPartitionStream));

  gan::GanConfig gcfg = cfg.gan;
  gcfg.data_dim = dataset.dim();

  Csprng ceremony_rng(derive(cfg.seed, kCeremonyStream));
  Ceremony ceremony = keygen_ceremony(cfg.backend, cfg.clients, ceremony_rng);

  std::vector<ClientState> clients(cfg.clients);
  for (std::uint32_t c = 0; c < cfg.clients; ++c) {
    auto& cs = clients[c];
    cs.id = c;
    gan::GanConfig own = gcfg;
    own.seed = derive(cfg.seed, kInitStream, cfg.shared_init ? 0 : c);
    cs.gan = gan::make_pair(own);
    cs.partition = std::move(parts[c].data);
    cs.codec = std::move(ceremony.clients[c]);
    cs.rng = gan::GanRng::from_seed(derive(cfg.seed, kTrainStream, c));
  }
  report.generator_params = clients[0].gan.generator.parameter_count();
  report.discriminator_params = clients[0].gan.discriminator.parameter_count();

  const std::uint64_t eval_seed = derive(cfg.seed, kEvalStream);
  auto mode_distance = [&](const gan::GanPair& pair) {
    if (!ring || cfg.eval_samples == 0) return std::numeric_limits<double>::quiet_NaN();
    return gan::generated_mode_distance(pair, centers, cfg.eval_samples, eval_seed);
  };
  {
    double sum = 0.0;
    for (const auto& cs : clients) sum += mode_distance(cs.gan);
    report.initial_mode_distance = sum / static_cast<double>(clients.size());
  }

  Transport transport(cfg.clients);
  Server server(ceremony.server_view, cfg.clients);
  const std::uint32_t server_id = transport.server_id();

  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    const auto round_start = Clock::now();
    const auto round = static_cast<std::uint32_t>(r);
    try {
      RoundRecord rec;
      rec.round = r;
      std::vector<std::uint64_t> out_before(cfg.clients);
      for (std::uint32_t c = 0; c < cfg.clients; ++c) out_before[c] = transport.bytes_out(c);
      const auto server_before = transport.bytes_out(server_id);

      std::vector<gan::RoundMetrics> metrics(cfg.clients);
      for (auto& cs : clients) {
        metrics[cs.id] = gan::train_local(cs.gan, cs.partition, gcfg, cs.rng);
        cs.history.push_back(metrics[cs.id]);
      }

      std::vector<nn::VectorXd> g_flat, d_flat;
      for (const auto& cs : clients) {
        g_flat.push_back(nn::flatten(cs.gan.generator).flat);
        d_flat.push_back(nn::flatten(cs.gan.discriminator).flat);
      }

      for (auto& cs : clients) client_share_phase(cs, cfg.clients, transport, round);
      for (auto& cs : clients) client_prepare(cs, cfg.clients, transport, round);
      server.aggregate_round(transport);
      for (auto& cs : clients) client_apply(cs, transport, round);

      const auto g0 = nn::flatten(clients[0].gan.generator).flat;
      const auto d0 = nn::flatten(clients[0].gan.discriminator).flat;
      rec.max_aggregation_error =
          std::max(max_abs_diff(g0, plaintext_mean(g_flat)), max_abs_diff(d0, plaintext_mean(d_flat)));
      for (std::size_t c = 1; c < clients.size(); ++c) {
        rec.max_client_divergence = std::max(
            {rec.max_client_divergence, max_abs_diff(nn::flatten(clients[c].gan.generator).flat, g0),
             max_abs_diff(nn::flatten(clients[c].gan.discriminator).flat, d0)});
      }
      rec.mode_distance = mode_distance(clients[0].gan);

      for (std::uint32_t c = 0; c < cfg.clients; ++c) {
        const auto sent = transport.bytes_out(c) - out_before[c];
        rec.client_bytes_out = std::max(rec.client_bytes_out, sent);
        report.rows.push_back({r, c, metrics[c], sent});
      }
      rec.server_bytes_out = transport.bytes_out(server_id) - server_before;
      server.next_round();
      rec.wall_s = std::chrono::duration<double>(Clock::now() - round_start).count();
      report.rounds.push_back(rec);
    } catch (const std::exception& e) {
      throw RunError("round " + std::to_string(r) + ": " + e.what());
    }
  }

  report.final_generator = nn::flatten(clients[0].gan.generator).flat;
  report.final_discriminator = nn::flatten(clients[0].gan.discriminator).flat;
  for (std::uint32_t ep = 0; ep <= server_id; ++ep) report.total_bytes += transport.bytes_out(ep);
  report.wall_s = std::chrono::duration<double>(Clock::now() - run_start).count();
  return report;
}

nn::VectorXd federated_average(const BackendConfig& backend, const std::vector<nn::VectorXd>& params,
                               std::uint64_t seed) {
  const std::size_t n = params.size();
  if (n == 0) throw std::invalid_argument("federated_average: no clients");
  Csprng rng(seed);
  Ceremony ceremony = keygen_ceremony(backend, n, rng);
  Transport transport(n);
  Server server(ceremony.server_view, n);

  std::vector<nn::ParamVectord> scaled(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (params[c].size() != params[0].size()) throw std::invalid_argument("federated_average: length mismatch");
    scaled[c].shapes = {{params[c].size()}};
    scaled[c].flat = params[c] / static_cast<double>(n);
  }
  for (std::uint32_t c = 0; c < n; ++c) {
    const auto frames = ceremony.clients[c]->peer_frames(scaled[c]);
    for (std::uint32_t p = 0; p < frames.size(); ++p) {
      if (p != c && !frames[p].empty()) transport.send(c, p, 0, Channel::kGenerator, frames[p]);
    }
  }
  for (std::uint32_t c = 0; c < n; ++c) {
    std::map<std::uint32_t, Bytes> from;
    while (transport.has_pending(c)) {
      Envelope e = transport.receive(c);
      from[e.from] = std::move(e.body);
    }
    std::vector<Bytes> peers;
    for (auto& [_, body] : from) peers.push_back(std::move(body));
    transport.send(c, transport.server_id(), 0, Channel::kGenerator, ceremony.clients[c]->seal(scaled[c], peers));
  }
  server.aggregate_round(transport);

  nn::VectorXd held;
  for (std::uint32_t c = 0; c < n; ++c) {
    const Envelope e = transport.receive(c);
    auto opened = ceremony.clients[c]->open(e.body, scaled[c]);
    if (c == 0) held = std::move(opened);
  }
  return held;
}

}  // namespace hefed::fed
