// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hefed/backend.hpp"
#include "hefed/nn.hpp"
#include "hefed/rng.hpp"

namespace hefed::fed {

/// Client half of a backend: turns an already-divided parameter vector into
/// an upload payload and an aggregate payload back into parameters.
class ClientCodec {
 public:
  virtual ~ClientCodec() = default;

  virtual BackendKind kind() const = 0;

  /// Frames to send directly to each peer before uploading, indexed by peer
  /// id (the own slot is left empty). Only MPC uses this.
  virtual std::vector<Bytes> peer_frames(const nn::ParamVectord& /*scaled*/) { return {}; }

  /// Upload payload. `from_peers` holds the frames received from the other
  /// clients this round (MPC only).
  virtual Bytes seal(const nn::ParamVectord& scaled, std::span<const Bytes> from_peers) = 0;

  /// Decrypts and decodes an aggregate; `layout` supplies tensor shapes.
  virtual nn::VectorXd open(const Bytes& aggregate, const nn::ParamVectord& layout) = 0;
};

struct Ceremony {
  PublicMaterial server_view;
  std::vector<std::unique_ptr<ClientCodec>> clients;
};

/// Generates key material once and hands every client an identical copy;
/// the server view receives public material only. Each client gets its own
/// encryption-randomness stream drawn from `rng`.
Ceremony keygen_ceremony(const BackendConfig& cfg, std::size_t clients, Csprng& rng);

}  // namespace hefed::fed
