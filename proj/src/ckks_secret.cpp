// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/ckks_secret.hpp"

namespace hefed::ckks {

Keypair keygen(const Context& ctx, Csprng& rng, RingPoly* noise_out) {
  Keypair kp;
  kp.sk.s = ctx.sample_ternary(rng);
  kp.sk.s_ntt = kp.sk.s;
  ctx.ntt_forward(kp.sk.s_ntt.coeffs);

  kp.pk.a = ctx.sample_uniform(rng);
  const RingPoly e = ctx.sample_gaussian(rng);
  const RingPoly as = ctx.multiply(kp.pk.a, kp.sk.s);
  kp.pk.b.coeffs.resize(ctx.n());
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    kp.pk.b.coeffs[i] = ctx.add_mod(ctx.sub_mod(0, as.coeffs[i]), e.coeffs[i]);
  }
  kp.pk.a_ntt = kp.pk.a;
  kp.pk.b_ntt = kp.pk.b;
  ctx.ntt_forward(kp.pk.a_ntt.coeffs);
  ctx.ntt_forward(kp.pk.b_ntt.coeffs);
  if (noise_out) *noise_out = e;
  return kp;
}

RingPoly decrypt(const Context& ctx, const SecretKey& sk, const Ciphertext& ct) {
  if (ct.c0.coeffs.size() != ctx.n() || ct.c1.coeffs.size() != ctx.n()) {
    throw std::invalid_argument("ckks decrypt: ring degree mismatch");
  }
  RingPoly m = ct.c1;
  ctx.ntt_forward(m.coeffs);
  for (std::size_t i = 0; i < ctx.n(); ++i) m.coeffs[i] = ctx.mul_mod(m.coeffs[i], sk.s_ntt.coeffs[i]);
  ctx.ntt_inverse(m.coeffs);
  for (std::size_t i = 0; i < ctx.n(); ++i) m.coeffs[i] = ctx.add_mod(m.coeffs[i], ct.c0.coeffs[i]);
  return m;
}

}  // namespace hefed::ckks
