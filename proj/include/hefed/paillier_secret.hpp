// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#ifdef HEFED_SERVER_BUILD
#error "server code must not include secret-key material (paillier_secret.hpp)"
#endif

#include <cstddef>
#include <string>

#include "hefed/paillier.hpp"

namespace hefed::paillier {

struct SecretKey {
  BigInt lambda;  // lcm(p-1, q-1)
  BigInt mu;      // L(g^lambda mod n^2)^-1 mod n
  std::uint64_t key_id = 0;
};

struct Keypair {
  PublicKey pk;
  SecretKey sk;
};

inline constexpr int kMillerRabinRounds = 64;

/// bits >= 64 and even. p and q have bits/2 bits each; n has exactly `bits` bits.
Keypair keygen(std::size_t bits, Csprng& rng);

/// m = L(c^lambda mod n^2) * mu mod n, L(u) = (u - 1) / n.
BigInt decrypt(const SecretKey& sk, const PublicKey& pk, const Ciphertext& c);

/// Test-vector export: decimal strings for n, g, lambda, mu.
std::string export_keypair_json(const Keypair& kp);
Keypair import_keypair_json(const std::string& json);

}  // namespace hefed::paillier
