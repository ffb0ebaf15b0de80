// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/paillier_secret.hpp"

#include <json.hpp>

namespace hefed::paillier {

using boost::multiprecision::powm;

namespace {

BigInt l_function(const BigInt& u, const BigInt& n) { return (u - 1) / n; }

}  // namespace

Keypair keygen(std::size_t bits, Csprng& rng) {
  if (bits < 64 || bits % 2 != 0) throw std::invalid_argument("paillier keygen: bits must be even and >= 64");
  for (;;) {
    const BigInt p = random_prime(bits / 2, kMillerRabinRounds, rng);
    const BigInt q = random_prime(bits / 2, kMillerRabinRounds, rng);
    if (p == q) continue;
    const BigInt n = p * q;
    const BigInt phi = (p - 1) * (q - 1);
    if (bit_length(n) != bits || gcd(n, phi) != 1) continue;

    Keypair kp;
    kp.pk = PublicKey::from_modulus(n);
    kp.sk.lambda = lcm(p - 1, q - 1);
    kp.sk.mu = mod_inverse(l_function(powm(kp.pk.g, kp.sk.lambda, kp.pk.n_sq), n), n);
    kp.sk.key_id = kp.pk.key_id();
    return kp;
  }
}

BigInt decrypt(const SecretKey& sk, const PublicKey& pk, const Ciphertext& c) {
  if (c.value < 0 || c.value >= pk.n_sq) throw std::out_of_range("decrypt: ciphertext outside [0, n^2)");
  if (c.key_id != pk.key_id() || sk.key_id != pk.key_id()) throw KeyMismatch("decrypt: key mismatch");
  return (l_function(powm(c.value, sk.lambda, pk.n_sq), pk.n) * sk.mu) % pk.n;
}

std::string export_keypair_json(const Keypair& kp) {
  nlohmann::json j{{"bits", kp.pk.bits},
                   {"n", kp.pk.n.str()},
                   {"g", kp.pk.g.str()},
                   {"lambda", kp.sk.lambda.str()},
                   {"mu", kp.sk.mu.str()}};
  return j.dump();
}

Keypair import_keypair_json(const std::string& json) {
  const auto j = nlohmann::json::parse(json);
  Keypair kp;
  kp.pk = import_public_json(json);
  kp.sk.lambda = BigInt(j.at("lambda").get<std::string>());
  kp.sk.mu = BigInt(j.at("mu").get<std::string>());
  kp.sk.key_id = kp.pk.key_id();
  return kp;
}

}  // namespace hefed::paillier
