// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/transport.hpp"

#include <string>

namespace hefed::fed {

namespace {

Envelope parse_frame(std::span<const std::uint8_t> frame) {
  wire::Reader r(frame);
  const std::uint32_t len = r.u32_le();
  if (len != r.remaining()) throw wire::WireError("transport frame length mismatch");
  Envelope e;
  e.from = r.u32_le();
  e.to = r.u32_le();
  e.round = r.u32_le();
  e.channel = static_cast<Channel>(r.u8());
  const auto body = r.bytes(r.remaining());
  e.body.assign(body.begin(), body.end());
  return e;
}

}  // namespace

Transport::Transport(std::size_t clients)
    : clients_(clients), queues_(clients + 1), out_(clients + 1, 0), in_(clients + 1, 0) {
  if (clients == 0) throw std::invalid_argument("Transport: need at least one client");
}

void Transport::send(std::uint32_t from, std::uint32_t to, std::uint32_t round, Channel channel,
                     std::span<const std::uint8_t> body) {
  if (from > clients_ || to > clients_ || from == to) {
    throw std::invalid_argument("Transport::send: bad endpoints " + std::to_string(from) + " -> " +
                                std::to_string(to));
  }
  wire::Writer w;
  w.u32_le(static_cast<std::uint32_t>(13 + body.size()));
  w.u32_le(from);
  w.u32_le(to);
  w.u32_le(round);
  w.u8(static_cast<std::uint8_t>(channel));
  w.bytes(body);
  wire::Bytes frame = w.take();
  out_[from] += frame.size();
  if (tap_) tap_(Envelope{from, to, round, channel, wire::Bytes(body.begin(), body.end())}, frame);
  queues_[to].push_back(std::move(frame));
}

Envelope Transport::receive(std::uint32_t at) {
  auto& q = queues_.at(at);
  if (q.empty()) throw MissingMessage("no message pending for endpoint " + std::to_string(at));
  wire::Bytes frame = std::move(q.front());
  q.pop_front();
  in_[at] += frame.size();
  return parse_frame(frame);
}

}  // namespace hefed::fed
