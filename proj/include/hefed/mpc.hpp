// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// Additive secret sharing over Z_2^64 with fixed-point reals.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hefed/rng.hpp"
#include "hefed/wire.hpp"

namespace hefed::mpc {

using Ring = std::uint64_t;  // arithmetic wraps mod 2^64
using RingVector = std::vector<Ring>;

class ShareError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FixedPointOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

inline constexpr unsigned kDefaultFracBits = 16;

/// Two's-complement embedding of round(x * 2^f). Requires |x| < 2^(63-f).
Ring fp_encode(double x, unsigned frac_bits = kDefaultFracBits);
double fp_decode(Ring r, unsigned frac_bits = kDefaultFracBits);

RingVector fp_encode(std::span<const double> xs, unsigned frac_bits = kDefaultFracBits);
std::vector<double> fp_decode(std::span<const Ring> rs, unsigned frac_bits = kDefaultFracBits);

struct ShareSet {
  std::vector<RingVector> shares;  // one vector per party

  std::size_t parties() const { return shares.size(); }
  std::size_t length() const { return shares.empty() ? 0 : shares.front().size(); }
};

/// k-1 uniform shares; the last is v minus their sum. k >= 2.
ShareSet share(std::span<const Ring> v, std::size_t k, Csprng& rng);

ShareSet add_shares(const ShareSet& a, const ShareSet& b);

/// Elementwise ring sum over all parties; every share must be present.
RingVector reconstruct(const ShareSet& s);

/// Partywise sum of share vectors of equal length.
RingVector add_ring(std::span<const Ring> a, std::span<const Ring> b);

/// Party id (u32 LE), length (u32 LE), then little-endian 8-byte words.
void write_share(wire::Writer& w, std::uint32_t party, std::span<const Ring> share);
RingVector read_share(wire::Reader& r, std::uint32_t* party = nullptr);
inline constexpr std::size_t kShareHeaderBytes = 8;

}  // namespace hefed::mpc
