// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hefed/ckks.hpp"
#include "hefed/ckks_secret.hpp"

namespace ck = hefed::ckks;
using hefed::Csprng;

namespace {

ck::RingPoly schoolbook(const ck::Context& ctx, const ck::RingPoly& a, const ck::RingPoly& b) {
  const std::size_t n = ctx.n();
  const unsigned __int128 q = ctx.q();
  std::vector<unsigned __int128> acc(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const unsigned __int128 prod = static_cast<unsigned __int128>(a.coeffs[i]) * b.coeffs[j] % q;
      const std::size_t k = i + j;
      // x^N = -1
      if (k < n) {
        acc[k] = (acc[k] + prod) % q;
      } else {
        acc[k - n] = (acc[k - n] + q - prod) % q;
      }
    }
  }
  ck::RingPoly out;
  for (auto v : acc) out.coeffs.push_back(static_cast<std::uint64_t>(v));
  return out;
}

// Slot values by direct evaluation at the embedding roots in long double.
std::vector<std::complex<long double>> evaluate_slots(const ck::Context& ctx, const ck::RingPoly& p) {
  const std::size_t n = ctx.n();
  std::vector<std::complex<long double>> roots(2 * n);
  for (std::size_t k = 0; k < 2 * n; ++k) {
    const long double angle = std::numbers::pi_v<long double> * static_cast<long double>(k) / n;
    roots[k] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<std::complex<long double>> out(ctx.params().slots());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const std::size_t e = ctx.slot_exponent(s);
    std::complex<long double> sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += static_cast<long double>(ctx.centered(p.coeffs[j])) * roots[(e * j) % (2 * n)];
    }
    out[s] = sum / static_cast<long double>(ctx.params().scale);
  }
  return out;
}

std::vector<double> random_values(std::size_t count, std::mt19937_64& gen, double bound = 1.0) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> v(count);
  for (auto& x : v) x = dist(gen);
  return v;
}

double max_error(const std::vector<double>& got, const std::vector<double>& want) {
  double m = 0;
  for (std::size_t i = 0; i < want.size(); ++i) m = std::max(m, std::abs(got[i] - want[i]));
  return m;
}

const ck::Context& default_context() {
  static const ck::Context ctx(ck::Params::make());
  return ctx;
}

}  // namespace

TEST(CkksParams, DefaultsAreValid) {
  const auto& p = default_context().params();
  EXPECT_EQ(p.ring_degree, 4096u);
  EXPECT_TRUE(ck::is_prime_u64(p.modulus));
  EXPECT_LT(p.modulus, std::uint64_t{1} << 62);
  EXPECT_EQ(p.modulus % (2 * p.ring_degree), 1u);
  EXPECT_EQ(p.scale, std::ldexp(1.0, 40));
}

TEST(CkksParams, RejectsBadSets) {
  EXPECT_THROW(ck::Params::make(1000), ck::ParameterError);
  EXPECT_THROW(ck::Params::make(4096, std::ldexp(1.0, 60)), ck::ParameterError);
  auto p = ck::Params::make(16);
  p.modulus += 2;
  EXPECT_THROW(p.validate(), ck::ParameterError);
}

TEST(CkksPrime, SmallPrimesAgreeWithSieve) {
  std::vector<bool> composite(10000, false);
  for (std::size_t i = 2; i < composite.size(); ++i) {
    if (composite[i]) continue;
    for (std::size_t j = i * i; j < composite.size(); j += i) composite[j] = true;
  }
  for (std::uint64_t n = 2; n < composite.size(); ++n) EXPECT_EQ(ck::is_prime_u64(n), !composite[n]) << n;
  EXPECT_TRUE(ck::is_prime_u64((std::uint64_t{1} << 61) - 1));
  EXPECT_FALSE(ck::is_prime_u64(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
}

class NttSizes : public ::testing::TestWithParam<std::size_t> {};

TEST_P(NttSizes, MultiplyMatchesSchoolbook) {
  const ck::Context ctx(ck::Params::make(GetParam(), 1024.0, 4));
  Csprng rng(GetParam());
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = ctx.sample_uniform(rng), b = ctx.sample_uniform(rng);
    ASSERT_EQ(ctx.multiply(a, b), schoolbook(ctx, a, b));
  }
}

TEST_P(NttSizes, ForwardInverseIsIdentity) {
  const ck::Context ctx(ck::Params::make(GetParam(), 1024.0, 4));
  Csprng rng(1);
  auto a = ctx.sample_uniform(rng);
  const auto original = a;
  ctx.ntt_forward(a.coeffs);
  EXPECT_NE(a, original);
  ctx.ntt_inverse(a.coeffs);
  EXPECT_EQ(a, original);
}

TEST_P(NttSizes, NegacyclicWrap) {
  const ck::Context ctx(ck::Params::make(GetParam(), 1024.0, 4));
  const std::size_t n = ctx.n();
  ck::RingPoly top{std::vector<std::uint64_t>(n, 0)}, x{std::vector<std::uint64_t>(n, 0)};
  top.coeffs[n - 1] = 1;
  x.coeffs[1] = 1;
  ck::RingPoly minus_one{std::vector<std::uint64_t>(n, 0)};
  minus_one.coeffs[0] = ctx.q() - 1;
  EXPECT_EQ(ctx.multiply(top, x), minus_one);
}

INSTANTIATE_TEST_SUITE_P(Ckks, NttSizes, ::testing::Values(8, 16, 32));

TEST(CkksNtt, LargeDegreeSpotCheck) {
  const ck::Context ctx(ck::Params::make(256, 1024.0, 4));
  Csprng rng(3);
  const auto a = ctx.sample_uniform(rng), b = ctx.sample_ternary(rng);
  EXPECT_EQ(ctx.multiply(a, b), schoolbook(ctx, a, b));
}

TEST(CkksEncode, ZerosGiveZeroPolynomial) {
  const auto& ctx = default_context();
  const auto p = ck::encode(ctx, std::vector<double>(ctx.params().slots(), 0.0));
  for (auto c : p.coeffs) ASSERT_EQ(c, 0u);
}

TEST(CkksEncode, RoundTripAtDefaultScale) {
  const auto& ctx = default_context();
  std::mt19937_64 gen(4);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = random_values(ctx.params().slots(), gen, 10.0);
    worst = std::max(worst, max_error(ck::decode(ctx, ck::encode(ctx, v)), v));
  }
  EXPECT_LE(worst, std::ldexp(1.0, -17));
}

TEST(CkksEncode, SmallScaleObeysRoundingBound) {
  // Each coefficient is rounded by at most 1/2, and every slot is a sum of N
  // unit-modulus multiples of those rounding errors.
  const ck::Context ctx(ck::Params::make(4096, std::ldexp(1.0, 20), 32));
  std::mt19937_64 gen(5);
  const double bound = 0.5 * static_cast<double>(ctx.n()) / ctx.params().scale;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = random_values(ctx.params().slots(), gen, 10.0);
    worst = std::max(worst, max_error(ck::decode(ctx, ck::encode(ctx, v)), v));
  }
  EXPECT_LE(worst, bound);
  std::cout << "max slot error at scale 2^20: " << worst << " (2^-17 = " << std::ldexp(1.0, -17) << ")\n";
}

TEST(CkksEncode, MatchesDirectEvaluation) {
  const ck::Context ctx(ck::Params::make(512, std::ldexp(1.0, 40), 8));
  std::mt19937_64 gen(6);
  const auto v = random_values(ctx.params().slots(), gen, 5.0);
  const auto p = ck::encode(ctx, v);
  const auto oracle = evaluate_slots(ctx, p);
  const auto fast = ck::decode_complex(ctx, p);
  const double rounding = 0.5 * static_cast<double>(ctx.n()) / ctx.params().scale;
  for (std::size_t s = 0; s < v.size(); ++s) {
    EXPECT_NEAR(static_cast<double>(oracle[s].real()), v[s], rounding);
    EXPECT_NEAR(static_cast<double>(oracle[s].imag()), 0.0, rounding);
    EXPECT_NEAR(fast[s].real(), static_cast<double>(oracle[s].real()), 1e-9);
    EXPECT_NEAR(fast[s].imag(), static_cast<double>(oracle[s].imag()), 1e-9);
  }
}

TEST(CkksEncode, LinearAndConjugateSymmetric) {
  const auto& ctx = default_context();
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_values(ctx.params().slots(), gen), y = random_values(ctx.params().slots(), gen);
    std::vector<double> sum(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sum[i] = x[i] + y[i];
    const auto px = ck::encode(ctx, x), py = ck::encode(ctx, y), ps = ck::encode(ctx, sum);
    ck::RingPoly added{std::vector<std::uint64_t>(ctx.n())};
    for (std::size_t i = 0; i < ctx.n(); ++i) {
      added.coeffs[i] = ctx.add_mod(px.coeffs[i], py.coeffs[i]);
      // Rounding each term separately moves a coefficient by at most one.
      ASSERT_LE(std::abs(ctx.centered(ctx.sub_mod(added.coeffs[i], ps.coeffs[i]))), 1);
    }
    EXPECT_LE(max_error(ck::decode(ctx, added), sum), std::ldexp(1.0, -17));
    for (const auto& z : ck::decode_complex(ctx, px)) ASSERT_LE(std::abs(z.imag()), std::ldexp(1.0, -17));
  }
}

TEST(CkksEncode, PartialVectorsAndErrors) {
  const auto& ctx = default_context();
  const std::vector<double> v{1.5, -2.25, 3.0};
  const auto out = ck::decode(ctx, ck::encode(ctx, v), 3);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_LE(max_error(out, v), 1e-9);
  const auto all = ck::decode(ctx, ck::encode(ctx, v));
  EXPECT_EQ(all.size(), ctx.params().slots());
  EXPECT_NEAR(all[3], 0.0, 1e-9);
  EXPECT_THROW(ck::encode(ctx, std::vector<double>(ctx.params().slots() + 1, 0.0)), ck::EncodeError);
  EXPECT_THROW(ck::encode(ctx, std::vector<double>{1000.0}), ck::EncodeError);
}

TEST(CkksKeys, PublicKeyRelation) {
  const auto& ctx = default_context();
  Csprng rng(8);
  ck::RingPoly e;
  const auto kp = ck::keygen(ctx, rng, &e);
  const auto as = ctx.multiply(kp.pk.a, kp.sk.s);
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    ASSERT_EQ(ctx.add_mod(kp.pk.b.coeffs[i], as.coeffs[i]), e.coeffs[i]);
    const auto s = ctx.centered(kp.sk.s.coeffs[i]);
    ASSERT_TRUE(s == -1 || s == 0 || s == 1);
    ASSERT_LE(std::abs(ctx.centered(e.coeffs[i])), static_cast<std::int64_t>(6 * ctx.params().noise_sigma));
  }
}

TEST(CkksKeys, GaussianSamplerMoments) {
  const auto& ctx = default_context();
  Csprng rng(9);
  double sum = 0, sq = 0;
  std::size_t count = 0;
  for (int i = 0; i < 50; ++i) {
    for (auto c : ctx.sample_gaussian(rng).coeffs) {
      const double v = static_cast<double>(ctx.centered(c));
      sum += v;
      sq += v * v;
      ++count;
    }
  }
  const double mean = sum / count, sd = std::sqrt(sq / count - mean * mean);
  EXPECT_NEAR(mean, 0.0, 0.05);
  EXPECT_NEAR(sd, ctx.params().noise_sigma, 0.05);
}

class CkksCrypto : public ::testing::Test {
 protected:
  CkksCrypto() : rng_(10), keys_(ck::keygen(ctx(), rng_)) {}
  const ck::Context& ctx() const { return default_context(); }

  ck::Ciphertext enc(const std::vector<double>& v) { return ck::encrypt(ctx(), keys_.pk, ck::encode(ctx(), v), rng_); }
  std::vector<double> dec(const ck::Ciphertext& ct, std::size_t count = 0) {
    return ck::decode(ctx(), ck::decrypt(ctx(), keys_.sk, ct), count);
  }

  Csprng rng_;
  ck::Keypair keys_;
};

TEST_F(CkksCrypto, EncryptDecryptRoundTrip) {
  std::mt19937_64 gen(11);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = random_values(ctx().params().slots(), gen, 10.0);
    worst = std::max(worst, max_error(dec(enc(v)), v));
  }
  EXPECT_LE(worst, std::ldexp(1.0, -15));
}

TEST_F(CkksCrypto, EncryptionIsRandomised) {
  const std::vector<double> v{1.0, 2.0};
  const auto a = enc(v), b = enc(v);
  EXPECT_NE(a.c0, b.c0);
  EXPECT_NE(a.c1, b.c1);
  EXPECT_EQ(a.additions_used, 0u);
}

TEST_F(CkksCrypto, SerializedSize) {
  EXPECT_EQ(ck::ciphertext_size_bytes(ctx()), ck::kCiphertextHeaderBytes + 16 * ctx().n());
  const auto ct = ck::add(ctx(), enc({0.5}), enc({0.25}));
  hefed::wire::Writer w;
  ck::write_ciphertext(w, ctx(), ct);
  const auto bytes = w.take();
  EXPECT_EQ(bytes.size(), ck::ciphertext_size_bytes(ctx()));
  hefed::wire::Reader r(bytes);
  const auto back = ck::read_ciphertext(r, ctx());
  EXPECT_EQ(back.c0, ct.c0);
  EXPECT_EQ(back.c1, ct.c1);
  EXPECT_EQ(back.additions_used, 1u);
  EXPECT_NEAR(dec(back, 1)[0], 0.75, std::ldexp(1.0, -15));
}

TEST_F(CkksCrypto, AddingZeroKeepsValue) {
  const std::vector<double> v{3.25, -1.5, 0.125};
  const auto got = dec(ck::add(ctx(), enc(v), enc({0.0})), 3);
  EXPECT_LE(max_error(got, v), std::ldexp(1.0, -15));
}

TEST_F(CkksCrypto, ThreeWayMean) {
  std::mt19937_64 gen(12);
  const std::size_t m = 100;
  const auto a = random_values(m, gen), b = random_values(m, gen), c = random_values(m, gen);
  std::vector<double> sa(m), sb(m), sc(m), mean(m);
  for (std::size_t i = 0; i < m; ++i) {
    sa[i] = a[i] / 3;
    sb[i] = b[i] / 3;
    sc[i] = c[i] / 3;
    mean[i] = sa[i] + sb[i] + sc[i];
  }
  const auto sum = ck::add(ctx(), ck::add(ctx(), enc(sa), enc(sb)), enc(sc));
  EXPECT_EQ(sum.additions_used, 2u);
  EXPECT_LE(max_error(dec(sum, m), mean), std::ldexp(1.0, -15));
}

TEST(CkksBudget, ExhaustionIsAnError) {
  const ck::Context ctx(ck::Params::make(1024, std::ldexp(1.0, 40), 2));
  Csprng rng(13);
  const auto kp = ck::keygen(ctx, rng);
  auto fresh = [&] { return ck::encrypt(ctx, kp.pk, ck::encode(ctx, std::vector<double>{1.0}), rng); };
  auto acc = ck::add(ctx, fresh(), fresh());
  acc = ck::add(ctx, acc, fresh());
  EXPECT_EQ(acc.additions_used, 2u);
  EXPECT_THROW(ck::add(ctx, acc, fresh()), ck::BudgetExceeded);
  EXPECT_THROW(ck::add(ctx, acc, acc), ck::BudgetExceeded);
}

TEST(CkksBudget, ScaleMismatchRejected) {
  const auto& ctx = default_context();
  Csprng rng(14);
  const auto kp = ck::keygen(ctx, rng);
  auto a = ck::encrypt(ctx, kp.pk, ck::encode(ctx, std::vector<double>{1.0}), rng);
  auto b = a;
  b.scale *= 2;
  EXPECT_THROW(ck::add(ctx, a, b), std::invalid_argument);
}

TEST(CkksBudget, ErrorStaysWithinTenSingleErrors) {
  // Sums of up to the full budget never err by more than ten times the worst
  // single-ciphertext error, and the error grows no faster than linearly.
  const auto& ctx = default_context();
  Csprng rng(15);
  const auto kp = ck::keygen(ctx, rng);
  std::mt19937_64 gen(16);
  const std::size_t m = 64;
  auto enc = [&](const std::vector<double>& v) { return ck::encrypt(ctx, kp.pk, ck::encode(ctx, v), rng); };

  double single = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_values(m, gen);
    single = std::max(single, max_error(ck::decode(ctx, ck::decrypt(ctx, kp.sk, enc(v)), m), v));
  }
  ASSERT_GT(single, 0.0);

  const std::size_t budget = ctx.params().addition_budget;
  double worst_full = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> expected(m, 0.0);
    ck::Ciphertext acc;
    for (std::size_t k = 0; k <= budget; ++k) {
      const auto v = random_values(m, gen, 1.0 / (budget + 1));
      for (std::size_t i = 0; i < m; ++i) expected[i] += v[i];
      acc = k == 0 ? enc(v) : ck::add(ctx, acc, enc(v));
      const double err = max_error(ck::decode(ctx, ck::decrypt(ctx, kp.sk, acc), m), expected);
      ASSERT_LE(err, 10 * single) << "after " << k << " additions";
      ASSERT_LE(err, (k + 1) * single + 1e-15);
      if (k == budget) worst_full = std::max(worst_full, err);
    }
  }
  std::cout << "single-ciphertext error " << single << ", after " << budget << " additions " << worst_full << "\n";
}
