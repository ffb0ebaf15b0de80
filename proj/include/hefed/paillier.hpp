// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// Public half of the Paillier cryptosystem: everything a party holding only
// the public key may do (encrypt, add, multiply by a plaintext constant,
// serialise). Key generation and decryption live in paillier_secret.hpp.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "hefed/bigint.hpp"
#include "hefed/rng.hpp"
#include "hefed/wire.hpp"

namespace hefed::paillier {

class KeyMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EncodingOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

struct PublicKey {
  std::size_t bits = 0;
  BigInt n;
  BigInt n_sq;
  BigInt g;  // n + 1

  static PublicKey from_modulus(const BigInt& n);

  /// Fingerprint of n; ciphertexts carry it so mismatched keys are caught.
  std::uint64_t key_id() const;
};

struct Ciphertext {
  BigInt value;  // in [0, n^2)
  std::uint64_t key_id = 0;
};

/// Signed fixed point over Z_n: m = round(x * 2^frac_bits) mod n, negatives
/// stored above n/2.
class FixedPointCodec {
 public:
  explicit FixedPointCodec(const PublicKey& pk, unsigned frac_bits = 32);

  BigInt encode(double x) const;
  double decode(const BigInt& m) const;

  double scale() const { return scale_; }
  /// Largest |x| accepted by encode().
  double max_abs() const;

 private:
  BigInt n_;
  BigInt half_range_;
  double scale_;
};

/// c = g^m * r^n mod n^2 with r uniform in (0, n) and coprime to n.
Ciphertext encrypt(const PublicKey& pk, const BigInt& m, Csprng& rng);

/// Plaintext sum: c1 * c2 mod n^2.
Ciphertext he_add(const PublicKey& pk, const Ciphertext& c1, const Ciphertext& c2);

/// Plaintext times constant k >= 0: c^k mod n^2.
Ciphertext he_scalar_mul(const PublicKey& pk, const Ciphertext& c, const BigInt& k);

/// ceil(2 * bits / 8): ciphertexts live modulo n^2.
std::size_t ciphertext_size_bytes(const PublicKey& pk);

inline constexpr std::size_t kCiphertextHeaderBytes = 4;

/// Big-endian u32 length, then the big-endian magnitude padded to
/// ciphertext_size_bytes(pk).
void write_ciphertext(wire::Writer& w, const PublicKey& pk, const Ciphertext& c);
Ciphertext read_ciphertext(wire::Reader& r, const PublicKey& pk);

/// {"bits": .., "n": "<decimal>", "g": "<decimal>"}
std::string export_public_json(const PublicKey& pk);
PublicKey import_public_json(const std::string& json);

}  // namespace hefed::paillier
