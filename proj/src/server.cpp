// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/server.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace hefed::fed {

Bytes server_aggregate(ServerState& ss, std::span<const Envelope> payloads) {
  std::vector<const Envelope*> by_client(ss.n, nullptr);
  for (const auto& e : payloads) {
    if (e.round != ss.round) {
      throw RoundMismatch("payload from client " + std::to_string(e.from) + " is for round " +
                          std::to_string(e.round) + ", server is at round " + std::to_string(ss.round));
    }
    if (e.from >= ss.n || by_client[e.from] != nullptr) {
      throw std::invalid_argument("unexpected or duplicate payload from endpoint " + std::to_string(e.from));
    }
    by_client[e.from] = &e;
  }
  std::vector<Bytes> ordered;
  ordered.reserve(ss.n);
  for (std::size_t c = 0; c < ss.n; ++c) {
    if (!by_client[c]) throw MissingMessage("no payload from client " + std::to_string(c));
    ordered.push_back(by_client[c]->body);
  }
  ss.s = add_payloads(ss.pub, ordered);
  return ss.s;
}

Server::Server(PublicMaterial pub, std::size_t clients) {
  state_.n = clients;
  state_.pub = std::move(pub);
}

void Server::aggregate_round(Transport& transport) {
  const std::uint32_t me = transport.server_id();
  std::map<Channel, std::vector<Envelope>> by_channel;
  const auto before_in = transport.bytes_in(me);
  while (transport.has_pending(me)) {
    Envelope e = transport.receive(me);
    by_channel[e.channel].push_back(std::move(e));
  }
  state_.bytes_in += transport.bytes_in(me) - before_in;
  if (by_channel.empty()) throw MissingMessage("server received no uploads for round " + std::to_string(state_.round));
  const auto before_out = transport.bytes_out(me);
  for (const auto& [channel, uploads] : by_channel) {
    const Bytes aggregate = server_aggregate(state_, uploads);
    for (std::uint32_t c = 0; c < state_.n; ++c) transport.send(me, c, state_.round, channel, aggregate);
  }
  state_.bytes_out += transport.bytes_out(me) - before_out;
}

}  // namespace hefed::fed
