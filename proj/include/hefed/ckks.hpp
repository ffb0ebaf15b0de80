// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// Addition-only CKKS over Z_q[x]/(x^N + 1) with a single NTT-friendly prime.
//
// Real vectors are placed in the N/2 slots of the canonical embedding,
// scaled by Delta and rounded to an integer polynomial. Encryption is
// standard RLWE public-key encryption. The only homomorphic operation is
// ciphertext addition, which is all federated averaging needs once clients
// have divided by the client count in plaintext. Each ciphertext carries an
// addition counter checked against the parameter set's budget.
//
// Key generation and decryption are in ckks_secret.hpp.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hefed/rng.hpp"
#include "hefed/wire.hpp"

namespace hefed::ckks {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EncodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Params {
  std::size_t ring_degree = 4096;
  std::uint64_t modulus = 0;  // prime, q = 1 mod 2N, q < 2^62
  double scale = 0x1p40;
  double noise_sigma = 3.2;
  std::size_t addition_budget = 32;
  double value_bound = 64.0;

  /// Picks the largest 62-bit prime q with q = 1 mod 2N.
  static Params make(std::size_t ring_degree = 4096, double scale = 0x1p40,
                     std::size_t addition_budget = 32);

  std::size_t slots() const { return ring_degree / 2; }

  /// Worst-case infinity norm of fresh encryption noise (6-sigma truncation).
  double fresh_noise_bound() const;

  /// Throws ParameterError unless N is a power of two, q is an NTT-friendly
  /// prime below 2^62, and scale*bound*(budget+1) + noise headroom < q/2.
  void validate() const;
};

/// Deterministic primality for 64-bit integers.
bool is_prime_u64(std::uint64_t n);

/// Largest prime below 2^bits congruent to 1 mod 2N.
std::uint64_t find_ntt_prime(std::size_t ring_degree, unsigned bits = 62);

struct RingPoly {
  std::vector<std::uint64_t> coeffs;

  bool operator==(const RingPoly&) const = default;
};

/// Precomputed NTT twiddles, Gaussian table and embedding roots for one
/// parameter set. Immutable after construction, safe to share.
class Context {
 public:
  explicit Context(Params params);

  const Params& params() const { return params_; }
  std::size_t n() const { return params_.ring_degree; }
  std::uint64_t q() const { return params_.modulus; }

  void ntt_forward(std::span<std::uint64_t> a) const;
  void ntt_inverse(std::span<std::uint64_t> a) const;

  /// Product in Z_q[x]/(x^N + 1).
  RingPoly multiply(const RingPoly& a, const RingPoly& b) const;

  std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t add_mod(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= q() ? s - q() : s;
  }
  std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + q() - b; }

  /// Signed value in (-q/2, q/2] for a residue.
  std::int64_t centered(std::uint64_t v) const;
  std::uint64_t from_signed(std::int64_t v) const;

  RingPoly sample_uniform(Csprng& rng) const;
  RingPoly sample_ternary(Csprng& rng) const;
  RingPoly sample_gaussian(Csprng& rng) const;

  /// Slot-domain transforms of the canonical embedding (in place, N/2 values).
  void embed_inverse(std::vector<std::complex<double>>& slots) const;
  void embed_forward(std::vector<std::complex<double>>& slots) const;

  /// Slot k corresponds to evaluation at zeta^(slot_exponent(k)), zeta = exp(i*pi/N).
  std::size_t slot_exponent(std::size_t k) const { return rot_group_[k]; }

 private:
  Params params_;
  unsigned log_n_ = 0;
  std::vector<std::uint64_t> psi_rev_, psi_rev_shoup_;
  std::vector<std::uint64_t> psi_inv_rev_, psi_inv_rev_shoup_;
  std::uint64_t n_inv_ = 0, n_inv_shoup_ = 0;
  std::vector<double> gaussian_cdf_;  // cumulative over [-tail, tail]
  int gaussian_tail_ = 0;
  std::vector<std::size_t> rot_group_;
  std::vector<std::complex<double>> ksi_pows_;
};

/// values.size() <= N/2, |values[i]| <= value_bound.
RingPoly encode(const Context& ctx, std::span<const double> values);
std::vector<std::complex<double>> decode_complex(const Context& ctx, const RingPoly& p);
/// Real parts of the first `count` slots (all slots when count == 0).
std::vector<double> decode(const Context& ctx, const RingPoly& p, std::size_t count = 0);

struct PublicKey {
  RingPoly b;  // -a*s + e
  RingPoly a;
  RingPoly b_ntt, a_ntt;
};

struct Ciphertext {
  RingPoly c0, c1;
  double scale = 0.0;
  std::size_t additions_used = 0;
};

/// (c0, c1) = (b*u + e0 + m, a*u + e1), u ternary, e0/e1 Gaussian.
Ciphertext encrypt(const Context& ctx, const PublicKey& pk, const RingPoly& plaintext, Csprng& rng);

/// Componentwise sum. Throws BudgetExceeded when the combined addition count
/// would pass the budget.
Ciphertext add(const Context& ctx, const Ciphertext& a, const Ciphertext& b);

inline constexpr std::size_t kCiphertextHeaderBytes = 24;

/// N (u32), q (u64), Delta (f64), additions_used (u32), then c0 and c1 as
/// 2N little-endian 8-byte words.
void write_ciphertext(wire::Writer& w, const Context& ctx, const Ciphertext& ct);
Ciphertext read_ciphertext(wire::Reader& r, const Context& ctx);
std::size_t ciphertext_size_bytes(const Context& ctx);

}  // namespace hefed::ckks
