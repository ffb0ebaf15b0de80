// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include "hefed/bigint.hpp"
#include "hefed/paillier.hpp"
#include "hefed/paillier_secret.hpp"

using hefed::BigInt;
using hefed::Csprng;
namespace pl = hefed::paillier;

namespace {

bool trial_division_prime(unsigned long long n) {
  if (n < 2) return false;
  for (unsigned long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

BigInt gcd(BigInt a, BigInt b) {
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

const pl::Keypair& cached_key(std::size_t bits) {
  static std::map<std::size_t, pl::Keypair> keys;
  auto it = keys.find(bits);
  if (it == keys.end()) {
    Csprng rng(1000 + bits);
    it = keys.emplace(bits, pl::keygen(bits, rng)).first;
  }
  return it->second;
}

}  // namespace

TEST(BigInt, MillerRabinAgreesWithTrialDivision) {
  Csprng rng(1);
  for (unsigned long long n = 0; n < 5000; ++n) {
    EXPECT_EQ(hefed::is_probable_prime(BigInt(n), 16, rng), trial_division_prime(n)) << n;
  }
  // Carmichael numbers fool Fermat but not Miller-Rabin.
  for (unsigned long long c : {561ull, 1105ull, 1729ull, 2465ull, 41041ull, 825265ull}) {
    EXPECT_FALSE(hefed::is_probable_prime(BigInt(c), 16, rng)) << c;
  }
  const BigInt m127 = (BigInt(1) << 127) - 1;
  EXPECT_TRUE(hefed::is_probable_prime(m127, 64, rng));
  EXPECT_FALSE(hefed::is_probable_prime(m127 * ((BigInt(1) << 61) - 1), 64, rng));
}

TEST(BigInt, RandomPrimeHasExactWidth) {
  Csprng rng(2);
  for (std::size_t bits : {32u, 64u, 128u}) {
    const BigInt p = hefed::random_prime(bits, 32, rng);
    EXPECT_EQ(hefed::bit_length(p), bits);
    EXPECT_TRUE(hefed::is_probable_prime(p, 32, rng));
  }
}

TEST(BigInt, BytesRoundTripAndInverse) {
  Csprng rng(3);
  for (int i = 0; i < 100; ++i) {
    const BigInt v = hefed::random_bits(200, rng);
    const auto bytes = hefed::to_bytes_be(v, 32);
    EXPECT_EQ(bytes.size(), 32u);
    EXPECT_EQ(hefed::from_bytes_be(bytes), v);
  }
  EXPECT_EQ(hefed::to_bytes_be(BigInt(0x0102), 3), (std::vector<std::uint8_t>{0, 1, 2}));
  EXPECT_THROW(hefed::to_bytes_be(BigInt(1) << 64, 8), std::length_error);
  EXPECT_EQ(hefed::mod_inverse(BigInt(3), BigInt(11)), BigInt(4));
  EXPECT_THROW(hefed::mod_inverse(BigInt(6), BigInt(9)), std::domain_error);
}

TEST(BigInt, RandomBelowStaysInRange) {
  Csprng rng(4);
  const BigInt bound("1000000000000000000000007");
  for (int i = 0; i < 1000; ++i) {
    const BigInt v = hefed::random_below(bound, rng);
    EXPECT_GE(v, 0);
    EXPECT_LT(v, bound);
  }
}

class KeySizes : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KeySizes, ModulusHasConfiguredWidth) {
  const auto& kp = cached_key(GetParam());
  EXPECT_EQ(hefed::bit_length(kp.pk.n), GetParam());
  EXPECT_EQ(kp.pk.bits, GetParam());
  EXPECT_EQ(kp.pk.g, kp.pk.n + 1);
  EXPECT_EQ(kp.pk.n_sq, kp.pk.n * kp.pk.n);
  EXPECT_EQ(gcd(kp.pk.n, kp.sk.lambda), 1);
}

TEST_P(KeySizes, RoundTripsRandomPlaintexts) {
  const auto& kp = cached_key(GetParam());
  Csprng rng(GetParam());
  for (int i = 0; i < 1000; ++i) {
    const BigInt m = hefed::random_below(kp.pk.n, rng);
    ASSERT_EQ(pl::decrypt(kp.sk, kp.pk, pl::encrypt(kp.pk, m, rng)), m);
  }
}

TEST_P(KeySizes, AdditionIsExact) {
  const auto& kp = cached_key(GetParam());
  Csprng rng(GetParam() + 1);
  for (int i = 0; i < 1000; ++i) {
    const BigInt a = hefed::random_below(kp.pk.n, rng), b = hefed::random_below(kp.pk.n, rng);
    const auto sum = pl::he_add(kp.pk, pl::encrypt(kp.pk, a, rng), pl::encrypt(kp.pk, b, rng));
    ASSERT_EQ(pl::decrypt(kp.sk, kp.pk, sum), (a + b) % kp.pk.n);
  }
}

TEST_P(KeySizes, CiphertextSizeMatchesSerializer) {
  const auto& kp = cached_key(GetParam());
  EXPECT_EQ(pl::ciphertext_size_bytes(kp.pk), (2 * GetParam() + 7) / 8);
  Csprng rng(5);
  for (int i = 0; i < 20; ++i) {
    hefed::wire::Writer w;
    const auto c = pl::encrypt(kp.pk, hefed::random_below(kp.pk.n, rng), rng);
    pl::write_ciphertext(w, kp.pk, c);
    const auto bytes = w.take();
    EXPECT_EQ(bytes.size(), pl::ciphertext_size_bytes(kp.pk) + pl::kCiphertextHeaderBytes);
    hefed::wire::Reader r(bytes);
    EXPECT_EQ(pl::read_ciphertext(r, kp.pk).value, c.value);
  }
}

INSTANTIATE_TEST_SUITE_P(Paillier, KeySizes, ::testing::Values(64, 128, 256, 512));

TEST(Paillier, KnownCiphertextSizes) {
  EXPECT_EQ(pl::ciphertext_size_bytes(cached_key(64).pk), 16u);
  EXPECT_EQ(pl::ciphertext_size_bytes(cached_key(512).pk), 128u);
}

TEST(Paillier, KeygenValidatesAndIsFast) {
  Csprng rng(6);
  EXPECT_THROW(pl::keygen(62, rng), std::invalid_argument);
  EXPECT_THROW(pl::keygen(65, rng), std::invalid_argument);
  const auto t0 = std::chrono::steady_clock::now();
  pl::keygen(512, rng);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
}

TEST(Paillier, SeededKeygenIsReproducible) {
  Csprng a(77), b(77);
  EXPECT_EQ(pl::keygen(128, a).pk.n, pl::keygen(128, b).pk.n);
}

TEST(FixedPoint, SignConvention) {
  const auto& pk = cached_key(128).pk;
  const pl::FixedPointCodec codec(pk);
  EXPECT_EQ(codec.encode(0.0), 0);
  EXPECT_EQ(codec.decode(0), 0.0);
  EXPECT_EQ(codec.encode(-1.0), pk.n - (BigInt(1) << 32));
  EXPECT_EQ(codec.decode(codec.encode(-1.0)), -1.0);
}

TEST(FixedPoint, RoundTripWithinHalfStep) {
  const pl::FixedPointCodec codec(cached_key(64).pk);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> dist(-100, 100);
  for (int i = 0; i < 10000; ++i) {
    const double x = dist(gen);
    ASSERT_LE(std::abs(codec.decode(codec.encode(x)) - x), std::ldexp(1.0, -33));
  }
}

TEST(FixedPoint, OverflowIsRejected) {
  const pl::FixedPointCodec codec(cached_key(64).pk);
  EXPECT_GT(codec.max_abs(), 64.0);
  EXPECT_THROW(codec.encode(std::ldexp(1.0, 31)), pl::EncodingOverflow);
  EXPECT_THROW(codec.encode(std::nan("")), pl::EncodingOverflow);
  EXPECT_NO_THROW(codec.encode(-64.0));
}

TEST(FixedPoint, AdditionErrorBounds) {
  const auto& kp = cached_key(128);
  const pl::FixedPointCodec codec(kp.pk);
  Csprng rng(8);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> dist(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(gen), y = dist(gen);
    const auto c = pl::he_add(kp.pk, pl::encrypt(kp.pk, codec.encode(x), rng), pl::encrypt(kp.pk, codec.encode(y), rng));
    ASSERT_LE(std::abs(codec.decode(pl::decrypt(kp.sk, kp.pk, c)) - (x + y)), std::ldexp(1.0, -32));
  }
  // j-term sums accumulate at most j half-steps.
  for (int j : {3, 10, 50}) {
    pl::Ciphertext acc = pl::encrypt(kp.pk, 0, rng);
    double expected = 0;
    for (int k = 0; k < j; ++k) {
      const double x = dist(gen);
      expected += x;
      acc = pl::he_add(kp.pk, acc, pl::encrypt(kp.pk, codec.encode(x), rng));
    }
    EXPECT_LE(std::abs(codec.decode(pl::decrypt(kp.sk, kp.pk, acc)) - expected), j * std::ldexp(1.0, -33) + 1e-12);
  }
}

TEST(Paillier, EncryptionIsProbabilistic) {
  const auto& kp = cached_key(64);
  Csprng rng(9);
  std::set<BigInt> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(pl::encrypt(kp.pk, 12345, rng).value);
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(pl::decrypt(kp.sk, kp.pk, pl::encrypt(kp.pk, 0, rng)), 0);
}

TEST(Paillier, RangeAndKeyChecks) {
  const auto& a = cached_key(64);
  const auto& b = cached_key(128);
  Csprng rng(10);
  EXPECT_THROW(pl::encrypt(a.pk, a.pk.n, rng), std::out_of_range);
  EXPECT_THROW(pl::encrypt(a.pk, -1, rng), std::out_of_range);
  const auto ca = pl::encrypt(a.pk, 5, rng);
  const auto cb = pl::encrypt(b.pk, 5, rng);
  EXPECT_THROW(pl::he_add(a.pk, ca, cb), pl::KeyMismatch);
  EXPECT_THROW(pl::decrypt(a.sk, a.pk, pl::Ciphertext{a.pk.n_sq, a.pk.key_id()}), std::out_of_range);
}

TEST(Paillier, ScalarMultiplication) {
  const auto& kp = cached_key(128);
  Csprng rng(11);
  const BigInt m = 987654321;
  const auto c = pl::encrypt(kp.pk, m, rng);
  EXPECT_EQ(pl::decrypt(kp.sk, kp.pk, pl::he_scalar_mul(kp.pk, c, 1)), m);
  EXPECT_EQ(pl::decrypt(kp.sk, kp.pk, pl::he_scalar_mul(kp.pk, c, 0)), 0);
  for (int i = 0; i < 200; ++i) {
    const BigInt x = hefed::random_below(kp.pk.n, rng), k = hefed::random_below(kp.pk.n, rng);
    ASSERT_EQ(pl::decrypt(kp.sk, kp.pk, pl::he_scalar_mul(kp.pk, pl::encrypt(kp.pk, x, rng), k)), (x * k) % kp.pk.n);
  }
  EXPECT_THROW(pl::he_scalar_mul(kp.pk, c, -1), std::invalid_argument);
}

TEST(Paillier, JsonExportRoundTrips) {
  const auto& kp = cached_key(128);
  const auto back = pl::import_keypair_json(pl::export_keypair_json(kp));
  EXPECT_EQ(back.pk.n, kp.pk.n);
  EXPECT_EQ(back.sk.lambda, kp.sk.lambda);
  EXPECT_EQ(back.sk.mu, kp.sk.mu);
  EXPECT_EQ(pl::import_public_json(pl::export_public_json(kp.pk)).n, kp.pk.n);
  Csprng rng(12);
  EXPECT_EQ(pl::decrypt(back.sk, back.pk, pl::encrypt(kp.pk, 42, rng)), 42);
}
