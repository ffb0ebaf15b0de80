// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/client.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "hefed/ckks_secret.hpp"
#include "hefed/mpc.hpp"
#include "hefed/paillier_secret.hpp"

namespace hefed::fed {

namespace {

class PlainCodec final : public ClientCodec {
 public:
  BackendKind kind() const override { return BackendKind::kPlaintext; }

  Bytes seal(const nn::ParamVectord& scaled, std::span<const Bytes>) override {
    wire::Writer w;
    w.tag(tags::kPlain);
    w.u32_le(static_cast<std::uint32_t>(scaled.flat.size()));
    for (Eigen::Index i = 0; i < scaled.flat.size(); ++i) w.f64_le(scaled.flat(i));
    return w.take();
  }

  nn::VectorXd open(const Bytes& aggregate, const nn::ParamVectord& layout) override {
    wire::Reader r(aggregate);
    r.expect_tag(tags::kPlain);
    if (r.u32_le() != layout.flat.size()) throw wire::WireError("plaintext aggregate length mismatch");
    nn::VectorXd out(layout.flat.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = r.f64_le();
    r.expect_end();
    return out;
  }
};

class PaillierCodec final : public ClientCodec {
 public:
  PaillierCodec(std::shared_ptr<const paillier::Keypair> keys, unsigned frac_bits, double clip, Csprng rng)
      : keys_(std::move(keys)), codec_(keys_->pk, frac_bits), clip_(clip), rng_(std::move(rng)) {}

  BackendKind kind() const override { return BackendKind::kPaillier; }

  Bytes seal(const nn::ParamVectord& scaled, std::span<const Bytes>) override {
    wire::Writer w;
    w.tag(tags::kPaillier);
    w.u32_le(static_cast<std::uint32_t>(scaled.flat.size()));
    for (Eigen::Index i = 0; i < scaled.flat.size(); ++i) {
      const double v = std::clamp(scaled.flat(i), -clip_, clip_);
      paillier::write_ciphertext(w, keys_->pk, paillier::encrypt(keys_->pk, codec_.encode(v), rng_));
    }
    return w.take();
  }

  nn::VectorXd open(const Bytes& aggregate, const nn::ParamVectord& layout) override {
    wire::Reader r(aggregate);
    r.expect_tag(tags::kPaillier);
    if (r.u32_le() != layout.flat.size()) throw wire::WireError("Paillier aggregate length mismatch");
    nn::VectorXd out(layout.flat.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      const auto c = paillier::read_ciphertext(r, keys_->pk);
      out(i) = codec_.decode(paillier::decrypt(keys_->sk, keys_->pk, c));
    }
    r.expect_end();
    return out;
  }

 private:
  std::shared_ptr<const paillier::Keypair> keys_;
  paillier::FixedPointCodec codec_;
  double clip_;
  Csprng rng_;
};

class CkksCodec final : public ClientCodec {
 public:
  CkksCodec(std::shared_ptr<const ckks::Context> ctx, std::shared_ptr<const ckks::Keypair> keys,
            PackingMode mode, Csprng rng)
      : ctx_(std::move(ctx)), keys_(std::move(keys)), mode_(mode), rng_(std::move(rng)) {}

  BackendKind kind() const override { return BackendKind::kCkks; }

  Bytes seal(const nn::ParamVectord& scaled, std::span<const Bytes>) override {
    const auto chunks = layout_chunks(scaled);
    wire::Writer w;
    w.tag(tags::kCkks);
    w.u32_le(static_cast<std::uint32_t>(scaled.flat.size()));
    w.u32_le(static_cast<std::uint32_t>(chunks.size()));
    for (const auto& [start, len] : chunks) {
      const auto pt = ckks::encode(*ctx_, std::span<const double>(scaled.flat.data() + start, len));
      ckks::write_ciphertext(w, *ctx_, ckks::encrypt(*ctx_, keys_->pk, pt, rng_));
    }
    return w.take();
  }

  nn::VectorXd open(const Bytes& aggregate, const nn::ParamVectord& layout) override {
    const auto chunks = layout_chunks(layout);
    wire::Reader r(aggregate);
    r.expect_tag(tags::kCkks);
    if (r.u32_le() != layout.flat.size() || r.u32_le() != chunks.size()) {
      throw wire::WireError("CKKS aggregate layout mismatch");
    }
    nn::VectorXd out(layout.flat.size());
    for (const auto& [start, len] : chunks) {
      const auto ct = ckks::read_ciphertext(r, *ctx_);
      const auto values = ckks::decode(*ctx_, ckks::decrypt(*ctx_, keys_->sk, ct), len);
      for (std::size_t i = 0; i < len; ++i) out(static_cast<Eigen::Index>(start + i)) = values[i];
    }
    r.expect_end();
    return out;
  }

 private:
  // (offset, length) of each ciphertext's slice of the flat vector.
  std::vector<std::pair<std::size_t, std::size_t>> layout_chunks(const nn::ParamVectord& pv) const {
    std::vector<std::pair<std::size_t, std::size_t>> chunks;
    const std::size_t slots = mode_ == PackingMode::kPerParam ? 1 : ctx_->params().slots();
    std::size_t offset = 0;
    for (auto size : pv.tensor_sizes()) {
      const auto len = static_cast<std::size_t>(size);
      for (std::size_t s = 0; s < len; s += slots) chunks.emplace_back(offset + s, std::min(slots, len - s));
      offset += len;
    }
    return chunks;
  }

  std::shared_ptr<const ckks::Context> ctx_;
  std::shared_ptr<const ckks::Keypair> keys_;
  PackingMode mode_;
  Csprng rng_;
};

class MpcCodec final : public ClientCodec {
 public:
  MpcCodec(std::uint32_t id, std::size_t parties, unsigned frac_bits, Csprng rng)
      : id_(id), parties_(parties), frac_bits_(frac_bits), rng_(std::move(rng)) {}

  BackendKind kind() const override { return BackendKind::kMpc; }

  std::vector<Bytes> peer_frames(const nn::ParamVectord& scaled) override {
    const auto encoded = mpc::fp_encode(std::span<const double>(scaled.flat.data(), scaled.flat.size()), frac_bits_);
    auto shares = mpc::share(encoded, parties_, rng_);
    std::vector<Bytes> frames(parties_);
    for (std::uint32_t p = 0; p < parties_; ++p) {
      if (p == id_) continue;
      wire::Writer w;
      w.tag(tags::kMpcPeer);
      mpc::write_share(w, p, shares.shares[p]);
      frames[p] = w.take();
    }
    own_shares_.push_back(std::move(shares.shares[id_]));
    return frames;
  }

  Bytes seal(const nn::ParamVectord& scaled, std::span<const Bytes> from_peers) override {
    if (own_shares_.empty() || own_shares_.front().size() != static_cast<std::size_t>(scaled.flat.size())) {
      throw std::logic_error("MPC seal called before peer_frames for this vector");
    }
    if (from_peers.size() + 1 != parties_) {
      throw mpc::ShareError("MPC seal: expected shares from " + std::to_string(parties_ - 1) + " peers");
    }
    mpc::RingVector column = std::move(own_shares_.front());
    own_shares_.pop_front();
    for (const auto& frame : from_peers) {
      wire::Reader r(frame);
      r.expect_tag(tags::kMpcPeer);
      std::uint32_t party = 0;
      const auto share = mpc::read_share(r, &party);
      r.expect_end();
      if (party != id_) throw mpc::ShareError("MPC seal: received a share addressed to another party");
      column = mpc::add_ring(column, share);
    }
    wire::Writer w;
    w.tag(tags::kMpcSum);
    mpc::write_share(w, id_, column);
    return w.take();
  }

  nn::VectorXd open(const Bytes& aggregate, const nn::ParamVectord& layout) override {
    wire::Reader r(aggregate);
    r.expect_tag(tags::kMpcSum);
    const auto sum = mpc::read_share(r);
    r.expect_end();
    if (sum.size() != static_cast<std::size_t>(layout.flat.size())) throw wire::WireError("MPC aggregate length mismatch");
    nn::VectorXd out(layout.flat.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = mpc::fp_decode(sum[static_cast<std::size_t>(i)], frac_bits_);
    return out;
  }

 private:
  std::uint32_t id_;
  std::size_t parties_;
  unsigned frac_bits_;
  Csprng rng_;
  std::deque<mpc::RingVector> own_shares_;  // shared but not yet sealed, FIFO
};

}  // namespace

Ceremony keygen_ceremony(const BackendConfig& cfg, std::size_t clients, Csprng& rng) {
  if (clients == 0) throw std::invalid_argument("keygen_ceremony: need at least one client");
  Ceremony out;
  out.server_view.kind = cfg.kind;
  auto client_rng = [&rng] { return Csprng(rng.next_u64()); };
  switch (cfg.kind) {
    case BackendKind::kPlaintext:
      for (std::size_t c = 0; c < clients; ++c) out.clients.push_back(std::make_unique<PlainCodec>());
      break;
    case BackendKind::kPaillier: {
      auto keys = std::make_shared<const paillier::Keypair>(paillier::keygen(cfg.paillier_bits, rng));
      out.server_view.paillier = keys->pk;
      for (std::size_t c = 0; c < clients; ++c) {
        out.clients.push_back(
            std::make_unique<PaillierCodec>(keys, cfg.paillier_frac_bits, cfg.paillier_clip, client_rng()));
      }
      break;
    }
    case BackendKind::kCkks: {
      auto ctx = std::make_shared<const ckks::Context>(
          ckks::Params::make(cfg.ckks_ring_degree, cfg.ckks_scale, cfg.ckks_addition_budget));
      if (clients > 1 && clients - 1 > cfg.ckks_addition_budget) {
        throw ckks::BudgetExceeded("keygen_ceremony: " + std::to_string(clients) +
                                   " clients need more additions than the CKKS budget allows");
      }
      auto keys = std::make_shared<const ckks::Keypair>(ckks::keygen(*ctx, rng));
      out.server_view.ckks = ctx;
      out.server_view.ckks_mode = cfg.ckks_mode;
      for (std::size_t c = 0; c < clients; ++c) {
        out.clients.push_back(std::make_unique<CkksCodec>(ctx, keys, cfg.ckks_mode, client_rng()));
      }
      break;
    }
    case BackendKind::kMpc:
      if (clients < 2) throw mpc::ShareError("keygen_ceremony: MPC needs at least two clients");
      for (std::size_t c = 0; c < clients; ++c) {
        out.clients.push_back(
            std::make_unique<MpcCodec>(static_cast<std::uint32_t>(c), clients, cfg.mpc_frac_bits, client_rng()));
      }
      break;
  }
  return out;
}

}  // namespace hefed::fed
