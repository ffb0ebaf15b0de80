// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// Aggregation server. Built as its own library with HEFED_SERVER_BUILD
// defined, under which the secret-key headers refuse to compile; the server
// therefore has no way to name, store or use secret key material.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hefed/backend.hpp"
#include "hefed/transport.hpp"

namespace hefed::fed {

class RoundMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServerState {
  std::size_t n = 0;
  Bytes s;  // running aggregate of the channel being processed
  std::uint32_t round = 0;
  std::uint64_t bytes_in = 0;
  std::uint64_t bytes_out = 0;
  PublicMaterial pub;
};

/// Sums exactly one payload per client for ss.round, in client-id order.
/// Throws MissingMessage when a client is absent and RoundMismatch when a
/// payload is tagged with another round.
Bytes server_aggregate(ServerState& ss, std::span<const Envelope> payloads);

class Server {
 public:
  Server(PublicMaterial pub, std::size_t clients);

  /// Drains every pending upload, aggregates each channel separately (in
  /// channel order), and broadcasts each result to every client on the
  /// channel it arrived on.
  void aggregate_round(Transport& transport);
  void next_round() { ++state_.round; }

  const ServerState& state() const { return state_; }

 private:
  ServerState state_;
};

}  // namespace hefed::fed
