// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/mpc.hpp"

#include <cmath>
#include <string>

namespace hefed::mpc {

Ring fp_encode(double x, unsigned frac_bits) {
  if (frac_bits >= 63) throw std::invalid_argument("fp_encode: too many fractional bits");
  const double limit = std::ldexp(1.0, 63 - static_cast<int>(frac_bits));
  if (!std::isfinite(x) || std::fabs(x) >= limit) {
    throw FixedPointOverflow("fp_encode: |x| must be below 2^" + std::to_string(63 - frac_bits));
  }
  const auto scaled = static_cast<std::int64_t>(std::llround(std::ldexp(x, static_cast<int>(frac_bits))));
  return static_cast<Ring>(scaled);
}

double fp_decode(Ring r, unsigned frac_bits) {
  return std::ldexp(static_cast<double>(static_cast<std::int64_t>(r)), -static_cast<int>(frac_bits));
}

RingVector fp_encode(std::span<const double> xs, unsigned frac_bits) {
  RingVector out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fp_encode(xs[i], frac_bits);
  return out;
}

std::vector<double> fp_decode(std::span<const Ring> rs, unsigned frac_bits) {
  std::vector<double> out(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) out[i] = fp_decode(rs[i], frac_bits);
  return out;
}

ShareSet share(std::span<const Ring> v, std::size_t k, Csprng& rng) {
  if (k < 2) throw ShareError("share: need at least two parties");
  ShareSet s;
  s.shares.assign(k, RingVector(v.size()));
  RingVector& last = s.shares.back();
  last.assign(v.begin(), v.end());
  for (std::size_t p = 0; p + 1 < k; ++p) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Ring r = rng.next_u64();
      s.shares[p][i] = r;
      last[i] -= r;
    }
  }
  return s;
}

RingVector add_ring(std::span<const Ring> a, std::span<const Ring> b) {
  if (a.size() != b.size()) throw ShareError("add_ring: length mismatch");
  RingVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ShareSet add_shares(const ShareSet& a, const ShareSet& b) {
  if (a.parties() != b.parties()) throw ShareError("add_shares: party count mismatch");
  ShareSet out;
  for (std::size_t p = 0; p < a.parties(); ++p) {
    if (a.shares[p].size() != b.shares[p].size()) throw ShareError("add_shares: length mismatch");
    out.shares.push_back(add_ring(a.shares[p], b.shares[p]));
  }
  return out;
}

RingVector reconstruct(const ShareSet& s) {
  if (s.parties() < 2) throw ShareError("reconstruct: missing parties");
  const std::size_t len = s.length();
  RingVector out(len, 0);
  for (const auto& sh : s.shares) {
    if (sh.size() != len) throw ShareError("reconstruct: missing or truncated share");
    for (std::size_t i = 0; i < len; ++i) out[i] += sh[i];
  }
  return out;
}

void write_share(wire::Writer& w, std::uint32_t party, std::span<const Ring> share) {
  w.u32_le(party);
  w.u32_le(static_cast<std::uint32_t>(share.size()));
  for (Ring r : share) w.u64_le(r);
}

RingVector read_share(wire::Reader& r, std::uint32_t* party) {
  const std::uint32_t id = r.u32_le();
  if (party) *party = id;
  RingVector out(r.u32_le());
  for (auto& v : out) v = r.u64_le();
  return out;
}

}  // namespace hefed::mpc
