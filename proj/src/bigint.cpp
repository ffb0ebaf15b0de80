// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/bigint.hpp"

#include <array>
#include <stdexcept>

namespace hefed {

namespace {

constexpr std::array<unsigned, 54> kSmallPrimes = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,
    67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

}  // namespace

std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.backend().data(), 2);
}

BigInt random_bits(std::size_t bits, Csprng& rng) {
  if (bits == 0) return 0;
  std::vector<std::uint8_t> bytes((bits + 7) / 8);
  rng.fill(bytes);
  const std::size_t excess = bytes.size() * 8 - bits;
  bytes[0] &= static_cast<std::uint8_t>(0xFFu >> excess);
  return from_bytes_be(bytes);
}

BigInt random_below(const BigInt& bound, Csprng& rng) {
  if (bound <= 0) throw std::invalid_argument("random_below: bound must be positive");
  const std::size_t bits = bit_length(bound);
  for (;;) {
    BigInt v = random_bits(bits, rng);
    if (v < bound) return v;
  }
}

bool is_probable_prime(const BigInt& n, int rounds, Csprng& rng) {
  if (n < 2) return false;
  for (unsigned p : kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  const BigInt n_minus_1 = n - 1;
  BigInt d = n_minus_1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (int round = 0; round < rounds; ++round) {
    const BigInt a = 2 + random_below(n - 3, rng);
    BigInt x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n_minus_1) continue;
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      x = (x * x) % n;
      if (x == n_minus_1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

BigInt random_prime(std::size_t bits, int rounds, Csprng& rng) {
  if (bits < 3) throw std::invalid_argument("random_prime: need at least 3 bits");
  const BigInt top = (BigInt(3) << (bits - 2));
  for (;;) {
    BigInt candidate = random_bits(bits, rng) | top | 1;
    if (is_probable_prime(candidate, rounds, rng)) return candidate;
  }
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt out;
  if (mpz_invert(out.backend().data(), a.backend().data(), m.backend().data()) == 0) {
    throw std::domain_error("mod_inverse: element not invertible");
  }
  return out;
}

std::vector<std::uint8_t> to_bytes_be(const BigInt& v, std::size_t width) {
  if (v < 0) throw std::invalid_argument("to_bytes_be: negative value");
  std::vector<std::uint8_t> raw((bit_length(v) + 7) / 8);
  std::size_t written = 0;
  if (v != 0) mpz_export(raw.data(), &written, 1, 1, 1, 0, v.backend().data());
  raw.resize(written);
  if (raw.size() > width) throw std::length_error("to_bytes_be: value wider than frame");
  std::vector<std::uint8_t> out(width - raw.size(), 0);
  out.insert(out.end(), raw.begin(), raw.end());
  return out;
}

BigInt from_bytes_be(std::span<const std::uint8_t> bytes) {
  BigInt v = 0;
  if (!bytes.empty()) mpz_import(v.backend().data(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return v;
}

}  // namespace hefed
