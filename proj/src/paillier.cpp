// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/paillier.hpp"

#include <cmath>
#include <json.hpp>

namespace hefed::paillier {

using boost::multiprecision::powm;

PublicKey PublicKey::from_modulus(const BigInt& n) {
  if (n <= 3) throw std::invalid_argument("Paillier modulus too small");
  PublicKey pk;
  pk.bits = bit_length(n);
  pk.n = n;
  pk.n_sq = n * n;
  pk.g = n + 1;
  return pk;
}

std::uint64_t PublicKey::key_id() const {
  // FNV-1a over the big-endian bytes of n.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : to_bytes_be(n, (bit_length(n) + 7) / 8)) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

FixedPointCodec::FixedPointCodec(const PublicKey& pk, unsigned frac_bits)
    : n_(pk.n), half_range_(pk.n / 2), scale_(std::ldexp(1.0, static_cast<int>(frac_bits))) {}

double FixedPointCodec::max_abs() const { return half_range_.convert_to<double>() / scale_; }

BigInt FixedPointCodec::encode(double x) const {
  if (!std::isfinite(x)) throw EncodingOverflow("fixed_encode: non-finite value");
  const double scaled = std::round(x * scale_);
  BigInt mag(std::fabs(scaled));
  if (mag >= half_range_) {
    throw EncodingOverflow("fixed_encode: |x| = " + std::to_string(std::fabs(x)) +
                           " exceeds the key's plaintext range");
  }
  if (scaled < 0 && mag != 0) return n_ - mag;
  return mag;
}

double FixedPointCodec::decode(const BigInt& m) const {
  if (m < 0 || m >= n_) throw std::out_of_range("fixed_decode: value outside [0, n)");
  if (m > half_range_) {
    const BigInt neg = n_ - m;
    return -neg.convert_to<double>() / scale_;
  }
  return m.convert_to<double>() / scale_;
}

Ciphertext encrypt(const PublicKey& pk, const BigInt& m, Csprng& rng) {
  if (m < 0 || m >= pk.n) throw std::out_of_range("encrypt: plaintext outside [0, n)");
  BigInt r;
  do {
    r = random_below(pk.n, rng);
  } while (r == 0 || gcd(r, pk.n) != 1);
  // g = n + 1, so g^m = 1 + m n (mod n^2).
  const BigInt gm = (1 + m * pk.n) % pk.n_sq;
  return {(gm * powm(r, pk.n, pk.n_sq)) % pk.n_sq, pk.key_id()};
}

Ciphertext he_add(const PublicKey& pk, const Ciphertext& c1, const Ciphertext& c2) {
  const auto id = pk.key_id();
  if (c1.key_id != id || c2.key_id != id) throw KeyMismatch("he_add: ciphertext under a different key");
  return {(c1.value * c2.value) % pk.n_sq, id};
}

Ciphertext he_scalar_mul(const PublicKey& pk, const Ciphertext& c, const BigInt& k) {
  if (k < 0) throw std::invalid_argument("he_scalar_mul: k must be non-negative");
  const auto id = pk.key_id();
  if (c.key_id != id) throw KeyMismatch("he_scalar_mul: ciphertext under a different key");
  return {powm(c.value, k, pk.n_sq), id};
}

std::size_t ciphertext_size_bytes(const PublicKey& pk) { return (2 * pk.bits + 7) / 8; }

void write_ciphertext(wire::Writer& w, const PublicKey& pk, const Ciphertext& c) {
  const std::size_t width = ciphertext_size_bytes(pk);
  w.u32_be(static_cast<std::uint32_t>(width));
  w.bytes(to_bytes_be(c.value, width));
}

Ciphertext read_ciphertext(wire::Reader& r, const PublicKey& pk) {
  const std::uint32_t width = r.u32_be();
  if (width != ciphertext_size_bytes(pk)) throw wire::WireError("Paillier ciphertext length does not match key");
  Ciphertext c{from_bytes_be(r.bytes(width)), pk.key_id()};
  if (c.value >= pk.n_sq) throw wire::WireError("Paillier ciphertext not reduced mod n^2");
  return c;
}

std::string export_public_json(const PublicKey& pk) {
  nlohmann::json j{{"bits", pk.bits}, {"n", pk.n.str()}, {"g", pk.g.str()}};
  return j.dump();
}

PublicKey import_public_json(const std::string& json) {
  const auto j = nlohmann::json::parse(json);
  PublicKey pk = PublicKey::from_modulus(BigInt(j.at("n").get<std::string>()));
  if (pk.bits != j.at("bits").get<std::size_t>() || pk.g != BigInt(j.at("g").get<std::string>())) {
    throw std::invalid_argument("import_public_json: inconsistent key fields");
  }
  return pk;
}

}  // namespace hefed::paillier
