// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hefed/rng.hpp"

namespace hefed {

// Expression templates off: results are always materialised, which keeps
// powm and friends composable without surprises.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

std::size_t bit_length(const BigInt& v);

/// Uniform integer with at most `bits` bits.
BigInt random_bits(std::size_t bits, Csprng& rng);

/// Uniform in [0, bound).
BigInt random_below(const BigInt& bound, Csprng& rng);

/// Miller-Rabin with random bases after small-prime trial division.
bool is_probable_prime(const BigInt& n, int rounds, Csprng& rng);

/// Random prime of exactly `bits` bits with the two top bits set, so that a
/// product of two such primes has exactly 2*bits bits.
BigInt random_prime(std::size_t bits, int rounds, Csprng& rng);

/// Inverse of a modulo m; throws if not invertible.
BigInt mod_inverse(const BigInt& a, const BigInt& m);

/// Big-endian magnitude, left-padded with zeros to `width` bytes.
std::vector<std::uint8_t> to_bytes_be(const BigInt& v, std::size_t width);
BigInt from_bytes_be(std::span<const std::uint8_t> bytes);

}  // namespace hefed
