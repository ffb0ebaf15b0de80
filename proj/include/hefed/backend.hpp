// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// Aggregation backends: what a payload looks like on the wire and how the
// server combines payloads using public material only.
//
// Every payload frame opens with a 4-byte tag:
//   PLNT  u32 count, count f64 (little-endian)
//   PAIL  u32 count, count Paillier ciphertexts (u32 BE length + BE magnitude)
//   CKKS  u32 value count, u32 ciphertext count, ciphertexts
//   MPCS  share frame (party u32, length u32, u64 words), the client's column sum
//   MPCP  share frame, a share sent directly to a peer client

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hefed/ckks.hpp"
#include "hefed/paillier.hpp"
#include "hefed/wire.hpp"

namespace hefed::fed {

using wire::Bytes;

enum class BackendKind { kPlaintext, kPaillier, kCkks, kMpc };
enum class PackingMode { kPerParam, kPerTensor };

std::string to_string(BackendKind kind);
std::string to_string(PackingMode mode);
BackendKind parse_backend_kind(const std::string& s);
PackingMode parse_packing_mode(const std::string& s);

struct BackendConfig {
  BackendKind kind = BackendKind::kPlaintext;
  std::size_t paillier_bits = 128;
  unsigned paillier_frac_bits = 32;
  double paillier_clip = 64.0;
  std::size_t ckks_ring_degree = 4096;
  double ckks_scale = 0x1p40;
  std::size_t ckks_addition_budget = 32;
  PackingMode ckks_mode = PackingMode::kPerTensor;
  unsigned mpc_frac_bits = 16;
};

/// Everything the server may know about the backend. No field can hold a
/// secret key: the secret-key types are not even visible to this header.
struct PublicMaterial {
  BackendKind kind = BackendKind::kPlaintext;
  std::optional<paillier::PublicKey> paillier;
  std::shared_ptr<const ckks::Context> ckks;
  PackingMode ckks_mode = PackingMode::kPerTensor;
};

/// Homomorphic sum of payload frames, in the order given.
Bytes add_payloads(const PublicMaterial& pub, std::span<const Bytes> payloads);

/// Exact upload size for one model with the given tensor sizes.
std::size_t expected_payload_bytes(const PublicMaterial& pub, std::span<const std::size_t> tensor_sizes);

/// Number of CKKS ciphertexts one model occupies.
std::size_t ckks_ciphertext_count(const ckks::Context& ctx, PackingMode mode,
                                  std::span<const std::size_t> tensor_sizes);

/// True when the frame carries ciphertext or share data rather than plaintext.
bool is_protected_frame(std::span<const std::uint8_t> frame);

namespace tags {
inline constexpr char kPlain[5] = "PLNT";
inline constexpr char kPaillier[5] = "PAIL";
inline constexpr char kCkks[5] = "CKKS";
inline constexpr char kMpcSum[5] = "MPCS";
inline constexpr char kMpcPeer[5] = "MPCP";
}  // namespace tags

}  // namespace hefed::fed
