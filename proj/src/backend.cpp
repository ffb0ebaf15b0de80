// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/backend.hpp"

#include <cstring>
#include <stdexcept>

#include "hefed/mpc.hpp"

namespace hefed::fed {

std::string to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::kPlaintext: return "plaintext";
    case BackendKind::kPaillier: return "paillier";
    case BackendKind::kCkks: return "ckks";
    case BackendKind::kMpc: return "mpc";
  }
  return "unknown";
}

std::string to_string(PackingMode mode) {
  return mode == PackingMode::kPerParam ? "per_param" : "per_tensor";
}

BackendKind parse_backend_kind(const std::string& s) {
  if (s == "plaintext") return BackendKind::kPlaintext;
  if (s == "paillier") return BackendKind::kPaillier;
  if (s == "ckks") return BackendKind::kCkks;
  if (s == "mpc") return BackendKind::kMpc;
  throw std::invalid_argument("unknown backend '" + s + "'");
}

PackingMode parse_packing_mode(const std::string& s) {
  if (s == "per_param" || s == "per-param") return PackingMode::kPerParam;
  if (s == "per_tensor" || s == "per-tensor") return PackingMode::kPerTensor;
  throw std::invalid_argument("unknown packing mode '" + s + "'");
}

namespace {

Bytes add_plain(std::span<const Bytes> payloads) {
  std::vector<double> acc;
  for (std::size_t k = 0; k < payloads.size(); ++k) {
    wire::Reader r(payloads[k]);
    r.expect_tag(tags::kPlain);
    const std::uint32_t count = r.u32_le();
    if (k == 0) acc.assign(count, 0.0);
    if (count != acc.size()) throw wire::WireError("plaintext payloads differ in length");
    for (auto& v : acc) v += r.f64_le();
    r.expect_end();
  }
  wire::Writer w;
  w.tag(tags::kPlain);
  w.u32_le(static_cast<std::uint32_t>(acc.size()));
  for (double v : acc) w.f64_le(v);
  return w.take();
}

Bytes add_paillier(const paillier::PublicKey& pk, std::span<const Bytes> payloads) {
  std::vector<paillier::Ciphertext> acc;
  for (std::size_t k = 0; k < payloads.size(); ++k) {
    wire::Reader r(payloads[k]);
    r.expect_tag(tags::kPaillier);
    const std::uint32_t count = r.u32_le();
    if (k != 0 && count != acc.size()) throw wire::WireError("Paillier payloads differ in length");
    for (std::uint32_t i = 0; i < count; ++i) {
      auto c = paillier::read_ciphertext(r, pk);
      if (k == 0) {
        acc.push_back(std::move(c));
      } else {
        acc[i] = paillier::he_add(pk, acc[i], c);
      }
    }
    r.expect_end();
  }
  wire::Writer w;
  w.tag(tags::kPaillier);
  w.u32_le(static_cast<std::uint32_t>(acc.size()));
  for (const auto& c : acc) paillier::write_ciphertext(w, pk, c);
  return w.take();
}

Bytes add_ckks(const ckks::Context& ctx, std::span<const Bytes> payloads) {
  std::vector<ckks::Ciphertext> acc;
  std::uint32_t values = 0;
  for (std::size_t k = 0; k < payloads.size(); ++k) {
    wire::Reader r(payloads[k]);
    r.expect_tag(tags::kCkks);
    const std::uint32_t v = r.u32_le();
    const std::uint32_t count = r.u32_le();
    if (k == 0) values = v;
    if (v != values || (k != 0 && count != acc.size())) throw wire::WireError("CKKS payloads differ in layout");
    for (std::uint32_t i = 0; i < count; ++i) {
      auto ct = ckks::read_ciphertext(r, ctx);
      if (k == 0) {
        acc.push_back(std::move(ct));
      } else {
        acc[i] = ckks::add(ctx, acc[i], ct);
      }
    }
    r.expect_end();
  }
  wire::Writer w;
  w.tag(tags::kCkks);
  w.u32_le(values);
  w.u32_le(static_cast<std::uint32_t>(acc.size()));
  for (const auto& ct : acc) ckks::write_ciphertext(w, ctx, ct);
  return w.take();
}

Bytes add_mpc(std::span<const Bytes> payloads) {
  mpc::RingVector acc;
  for (std::size_t k = 0; k < payloads.size(); ++k) {
    wire::Reader r(payloads[k]);
    r.expect_tag(tags::kMpcSum);
    const auto column = mpc::read_share(r);
    r.expect_end();
    acc = k == 0 ? column : mpc::add_ring(acc, column);
  }
  wire::Writer w;
  w.tag(tags::kMpcSum);
  mpc::write_share(w, 0xFFFFFFFFu, acc);
  return w.take();
}

}  // namespace

Bytes add_payloads(const PublicMaterial& pub, std::span<const Bytes> payloads) {
  if (payloads.empty()) throw std::invalid_argument("add_payloads: no payloads");
  switch (pub.kind) {
    case BackendKind::kPlaintext:
      return add_plain(payloads);
    case BackendKind::kPaillier:
      if (!pub.paillier) throw std::logic_error("add_payloads: Paillier public key missing");
      return add_paillier(*pub.paillier, payloads);
    case BackendKind::kCkks:
      if (!pub.ckks) throw std::logic_error("add_payloads: CKKS context missing");
      return add_ckks(*pub.ckks, payloads);
    case BackendKind::kMpc:
      return add_mpc(payloads);
  }
  throw std::logic_error("add_payloads: unknown backend");
}

std::size_t ckks_ciphertext_count(const ckks::Context& ctx, PackingMode mode,
                                  std::span<const std::size_t> tensor_sizes) {
  std::size_t cts = 0;
  const std::size_t slots = ctx.params().slots();
  for (std::size_t len : tensor_sizes) cts += mode == PackingMode::kPerParam ? len : (len + slots - 1) / slots;
  return cts;
}

std::size_t expected_payload_bytes(const PublicMaterial& pub, std::span<const std::size_t> tensor_sizes) {
  std::size_t values = 0;
  for (auto s : tensor_sizes) values += s;
  switch (pub.kind) {
    case BackendKind::kPlaintext:
      return 8 + 8 * values;
    case BackendKind::kPaillier:
      return 8 + values * (paillier::kCiphertextHeaderBytes + paillier::ciphertext_size_bytes(*pub.paillier));
    case BackendKind::kCkks:
      return 12 + ckks_ciphertext_count(*pub.ckks, pub.ckks_mode, tensor_sizes) *
                      ckks::ciphertext_size_bytes(*pub.ckks);
    case BackendKind::kMpc:
      return 4 + mpc::kShareHeaderBytes + 8 * values;
  }
  return 0;
}

bool is_protected_frame(std::span<const std::uint8_t> frame) {
  if (frame.size() < 4) return false;
  for (const char* t : {tags::kPaillier, tags::kCkks, tags::kMpcSum, tags::kMpcPeer}) {
    if (std::memcmp(frame.data(), t, 4) == 0) return true;
  }
  return false;
}

}  // namespace hefed::fed
