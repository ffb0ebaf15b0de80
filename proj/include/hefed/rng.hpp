// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace hefed {

/// Seeded simulation PRNG (weights, noise, shuffling). Not for key material.
using SimRng = std::mt19937_64;

/// Derives an independent simulation stream from a base seed and a stream tag.
SimRng make_stream(std::uint64_t seed, std::uint64_t stream);

/// ChaCha20 keystream used wherever key material or encryption randomness is
/// drawn. A seeded instance is reproducible, which the tests rely on.
class Csprng {
 public:
  using result_type = std::uint64_t;

  explicit Csprng(std::uint64_t seed);
  static Csprng from_entropy();

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();

  /// Uniform in [0, bound) without modulo bias. bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

 private:
  Csprng() = default;
  void refill();

  std::array<std::uint8_t, 32> key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint8_t, 4096> buffer_{};
  std::size_t pos_ = buffer_.size();
};

}  // namespace hefed
