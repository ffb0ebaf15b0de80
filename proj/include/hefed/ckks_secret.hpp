// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#ifdef HEFED_SERVER_BUILD
#error "server code must not include secret-key material (ckks_secret.hpp)"
#endif

#include "hefed/ckks.hpp"

namespace hefed::ckks {

struct SecretKey {
  RingPoly s;  // ternary
  RingPoly s_ntt;
};

struct Keypair {
  SecretKey sk;
  PublicKey pk;
};

/// b = -a*s + e with a uniform, s ternary, e Gaussian. When noise_out is
/// non-null the sampled e is written there (tests check b + a*s = e).
Keypair keygen(const Context& ctx, Csprng& rng, RingPoly* noise_out = nullptr);

/// c0 + c1*s mod q.
RingPoly decrypt(const Context& ctx, const SecretKey& sk, const Ciphertext& ct);

}  // namespace hefed::ckks
