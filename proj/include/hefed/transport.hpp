// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hefed/wire.hpp"

namespace hefed::fed {

enum class Channel : std::uint8_t { kGenerator = 0, kDiscriminator = 1, kPeer = 2, kBroadcast = 3 };

struct Envelope {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::uint32_t round = 0;
  Channel channel = Channel::kGenerator;
  wire::Bytes body;
};

class MissingMessage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-process message bus. Endpoints 0..clients-1 are clients, `clients` is
/// the server. Every message is serialised into a length-prefixed frame
/// before delivery, so byte counters reflect real wire volume.
///
/// Frame: u32 LE length of the rest, then from, to, round (u32 LE each),
/// channel (u8), body.
class Transport {
 public:
  static constexpr std::size_t kFrameOverhead = 4 + 13;

  explicit Transport(std::size_t clients);

  std::uint32_t server_id() const { return static_cast<std::uint32_t>(clients_); }
  std::size_t clients() const { return clients_; }

  void send(std::uint32_t from, std::uint32_t to, std::uint32_t round, Channel channel,
            std::span<const std::uint8_t> body);

  /// Oldest pending frame addressed to `at`; throws MissingMessage if none.
  Envelope receive(std::uint32_t at);
  bool has_pending(std::uint32_t at) const { return !queues_.at(at).empty(); }

  std::uint64_t bytes_out(std::uint32_t endpoint) const { return out_.at(endpoint); }
  /// Counted when a frame is received, not when it is queued.
  std::uint64_t bytes_in(std::uint32_t endpoint) const { return in_.at(endpoint); }

  /// Observer invoked with every frame as it crosses the bus.
  using Tap = std::function<void(const Envelope&, std::span<const std::uint8_t> frame)>;
  void set_tap(Tap tap) { tap_ = std::move(tap); }

 private:
  std::size_t clients_;
  std::vector<std::deque<wire::Bytes>> queues_;
  std::vector<std::uint64_t> out_, in_;
  Tap tap_;
};

}  // namespace hefed::fed
