// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/ckks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

namespace hefed::ckks {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((u128(a) * b) % m);
}

std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod_u64(result, base, m);
    base = mul_mod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t shoup_precompute(std::uint64_t w, std::uint64_t q) {
  return static_cast<std::uint64_t>((u128(w) << 64) / q);
}

// a * w mod q for a < 2^64, w < q < 2^62, w_shoup = floor(w * 2^64 / q).
inline std::uint64_t mul_shoup(std::uint64_t a, std::uint64_t w, std::uint64_t w_shoup, std::uint64_t q) {
  const auto hi = static_cast<std::uint64_t>((u128(a) * w_shoup) >> 64);
  const std::uint64_t r = a * w - hi * q;
  return r >= q ? r - q : r;
}

std::size_t reverse_bits(std::size_t v, unsigned bits) {
  std::size_t r = 0;
  for (unsigned i = 0; i < bits; ++i) {
    r = (r << 1) | (v & 1);
    v >>= 1;
  }
  return r;
}

template <typename T>
void bit_reverse_permute(std::vector<T>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for all n < 3.3e24.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t find_ntt_prime(std::size_t ring_degree, unsigned bits) {
  if (bits < 8 || bits > 62) throw ParameterError("find_ntt_prime: bits must be in [8, 62]");
  const std::uint64_t step = 2 * static_cast<std::uint64_t>(ring_degree);
  const std::uint64_t top = std::uint64_t{1} << bits;
  // Largest candidate below 2^bits that is 1 mod 2N.
  std::uint64_t q = ((top - 1) / step) * step + 1;
  if (q >= top) q -= step;
  for (; q > step; q -= step) {
    if (is_prime_u64(q)) return q;
  }
  throw ParameterError("find_ntt_prime: no prime found");
}

Params Params::make(std::size_t ring_degree, double scale, std::size_t addition_budget) {
  Params p;
  p.ring_degree = ring_degree;
  p.modulus = find_ntt_prime(ring_degree, 62);
  p.scale = scale;
  p.addition_budget = addition_budget;
  p.validate();
  return p;
}

double Params::fresh_noise_bound() const {
  const double tail = std::floor(6.0 * noise_sigma);
  return tail * (2.0 * static_cast<double>(ring_degree) + 1.0);
}

void Params::validate() const {
  if (ring_degree < 4 || !std::has_single_bit(ring_degree)) {
    throw ParameterError("ring degree must be a power of two >= 4");
  }
  if (modulus >= (std::uint64_t{1} << 62) || !is_prime_u64(modulus)) {
    throw ParameterError("modulus must be a prime below 2^62");
  }
  if (modulus % (2 * ring_degree) != 1) throw ParameterError("modulus is not NTT-friendly (q != 1 mod 2N)");
  if (!(scale >= 1.0) || !(value_bound > 0.0) || !(noise_sigma > 0.0)) {
    throw ParameterError("scale, value bound and noise sigma must be positive");
  }
  const double terms = static_cast<double>(addition_budget) + 1.0;
  const double need = scale * value_bound * terms + fresh_noise_bound() * terms;
  if (need >= static_cast<double>(modulus) / 2.0) {
    throw ParameterError("scale * bound * (budget + 1) plus noise does not fit below q/2");
  }
}

Context::Context(Params params) : params_(params) {
  params_.validate();
  const std::size_t n = params_.ring_degree;
  const std::uint64_t q = params_.modulus;
  log_n_ = static_cast<unsigned>(std::countr_zero(n));

  // Primitive 2N-th root of unity: psi^N = -1.
  std::uint64_t psi = 0;
  for (std::uint64_t x = 2; x < q; ++x) {
    const std::uint64_t g = pow_mod_u64(x, (q - 1) / (2 * n), q);
    if (pow_mod_u64(g, n, q) == q - 1) {
      psi = g;
      break;
    }
  }
  if (psi == 0) throw ParameterError("no primitive 2N-th root of unity");
  const std::uint64_t psi_inv = pow_mod_u64(psi, q - 2, q);

  psi_rev_.resize(n);
  psi_inv_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  psi_inv_rev_shoup_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = reverse_bits(k, log_n_);
    psi_rev_[k] = pow_mod_u64(psi, r, q);
    psi_inv_rev_[k] = pow_mod_u64(psi_inv, r, q);
    psi_rev_shoup_[k] = shoup_precompute(psi_rev_[k], q);
    psi_inv_rev_shoup_[k] = shoup_precompute(psi_inv_rev_[k], q);
  }
  n_inv_ = pow_mod_u64(n, q - 2, q);
  n_inv_shoup_ = shoup_precompute(n_inv_, q);

  gaussian_tail_ = static_cast<int>(std::floor(6.0 * params_.noise_sigma));
  double total = 0.0;
  std::vector<double> weights;
  for (int x = -gaussian_tail_; x <= gaussian_tail_; ++x) {
    weights.push_back(std::exp(-0.5 * x * x / (params_.noise_sigma * params_.noise_sigma)));
    total += weights.back();
  }
  double acc = 0.0;
  for (double w : weights) {
    acc += w / total;
    gaussian_cdf_.push_back(acc);
  }
  gaussian_cdf_.back() = 1.0;

  const std::size_t m = 2 * n;
  rot_group_.resize(n / 2);
  std::size_t five_pow = 1;
  for (std::size_t j = 0; j < n / 2; ++j) {
    rot_group_[j] = five_pow;
    five_pow = (five_pow * 5) % m;
  }
  ksi_pows_.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
    ksi_pows_[j] = {std::cos(angle), std::sin(angle)};
  }
}

std::uint64_t Context::mul_mod(std::uint64_t a, std::uint64_t b) const { return mul_mod_u64(a, b, q()); }

std::int64_t Context::centered(std::uint64_t v) const {
  return v > q() / 2 ? -static_cast<std::int64_t>(q() - v) : static_cast<std::int64_t>(v);
}

std::uint64_t Context::from_signed(std::int64_t v) const {
  if (v >= 0) return static_cast<std::uint64_t>(v) % q();
  const std::uint64_t mag = static_cast<std::uint64_t>(-(v + 1)) + 1;
  const std::uint64_t r = mag % q();
  return r == 0 ? 0 : q() - r;
}

void Context::ntt_forward(std::span<std::uint64_t> a) const {
  const std::size_t n = this->n();
  if (a.size() != n) throw std::invalid_argument("ntt_forward: length must equal ring degree");
  const std::uint64_t q = this->q();
  std::size_t t = n;
  for (std::size_t m = 1; m < n; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const std::uint64_t w = psi_rev_[m + i], ws = psi_rev_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const std::uint64_t u = a[j];
        const std::uint64_t v = mul_shoup(a[j + t], w, ws, q);
        a[j] = add_mod(u, v);
        a[j + t] = sub_mod(u, v);
      }
    }
  }
}

void Context::ntt_inverse(std::span<std::uint64_t> a) const {
  const std::size_t n = this->n();
  if (a.size() != n) throw std::invalid_argument("ntt_inverse: length must equal ring degree");
  const std::uint64_t q = this->q();
  std::size_t t = 1;
  for (std::size_t m = n; m > 1; m >>= 1) {
    std::size_t j1 = 0;
    const std::size_t h = m >> 1;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint64_t w = psi_inv_rev_[h + i], ws = psi_inv_rev_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const std::uint64_t u = a[j], v = a[j + t];
        a[j] = add_mod(u, v);
        a[j + t] = mul_shoup(sub_mod(u, v), w, ws, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = mul_shoup(x, n_inv_, n_inv_shoup_, q);
}

RingPoly Context::multiply(const RingPoly& a, const RingPoly& b) const {
  if (a.coeffs.size() != n() || b.coeffs.size() != n()) throw std::invalid_argument("multiply: length mismatch");
  RingPoly fa = a, fb = b;
  ntt_forward(fa.coeffs);
  ntt_forward(fb.coeffs);
  for (std::size_t i = 0; i < n(); ++i) fa.coeffs[i] = mul_mod(fa.coeffs[i], fb.coeffs[i]);
  ntt_inverse(fa.coeffs);
  return fa;
}

RingPoly Context::sample_uniform(Csprng& rng) const {
  RingPoly p{std::vector<std::uint64_t>(n())};
  for (auto& c : p.coeffs) c = rng.uniform_below(q());
  return p;
}

RingPoly Context::sample_ternary(Csprng& rng) const {
  RingPoly p{std::vector<std::uint64_t>(n())};
  for (auto& c : p.coeffs) c = from_signed(static_cast<std::int64_t>(rng.uniform_below(3)) - 1);
  return p;
}

RingPoly Context::sample_gaussian(Csprng& rng) const {
  RingPoly p{std::vector<std::uint64_t>(n())};
  for (auto& c : p.coeffs) {
    const double u = static_cast<double>(rng.next_u64() >> 11) * 0x1p-53;
    const auto it = std::upper_bound(gaussian_cdf_.begin(), gaussian_cdf_.end(), u);
    const auto idx = static_cast<int>(std::min<std::ptrdiff_t>(it - gaussian_cdf_.begin(),
                                                                static_cast<std::ptrdiff_t>(gaussian_cdf_.size()) - 1));
    c = from_signed(idx - gaussian_tail_);
  }
  return p;
}

void Context::embed_inverse(std::vector<std::complex<double>>& vals) const {
  const std::size_t size = vals.size();
  if (size != params_.slots()) throw std::invalid_argument("embed_inverse: expected N/2 slots");
  const std::size_t m = 2 * n();
  for (std::size_t len = size; len >= 1; len >>= 1) {
    const std::size_t lenh = len >> 1, lenq = len << 2, gap = m / lenq;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (lenq - (rot_group_[j] % lenq)) * gap;
        const auto u = vals[i + j] + vals[i + j + lenh];
        auto v = vals[i + j] - vals[i + j + lenh];
        v *= ksi_pows_[idx];
        vals[i + j] = u;
        vals[i + j + lenh] = v;
      }
    }
  }
  bit_reverse_permute(vals);
  const double inv = 1.0 / static_cast<double>(size);
  for (auto& v : vals) v *= inv;
}

void Context::embed_forward(std::vector<std::complex<double>>& vals) const {
  const std::size_t size = vals.size();
  if (size != params_.slots()) throw std::invalid_argument("embed_forward: expected N/2 slots");
  const std::size_t m = 2 * n();
  bit_reverse_permute(vals);
  for (std::size_t len = 2; len <= size; len <<= 1) {
    const std::size_t lenh = len >> 1, lenq = len << 2, gap = m / lenq;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (rot_group_[j] % lenq) * gap;
        const auto u = vals[i + j];
        const auto v = vals[i + j + lenh] * ksi_pows_[idx];
        vals[i + j] = u + v;
        vals[i + j + lenh] = u - v;
      }
    }
  }
}

RingPoly encode(const Context& ctx, std::span<const double> values) {
  const auto& p = ctx.params();
  const std::size_t slots = p.slots();
  if (values.size() > slots) {
    throw EncodeError("encode: " + std::to_string(values.size()) + " values exceed " + std::to_string(slots) +
                      " slots");
  }
  std::vector<std::complex<double>> u(slots);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || std::fabs(values[i]) > p.value_bound) {
      throw EncodeError("encode: value " + std::to_string(values[i]) + " outside bound");
    }
    u[i] = values[i];
  }
  ctx.embed_inverse(u);
  RingPoly out{std::vector<std::uint64_t>(ctx.n())};
  for (std::size_t i = 0; i < slots; ++i) {
    const auto re = static_cast<std::int64_t>(std::llround(u[i].real() * p.scale));
    const auto im = static_cast<std::int64_t>(std::llround(u[i].imag() * p.scale));
    out.coeffs[i] = ctx.from_signed(re);
    out.coeffs[i + slots] = ctx.from_signed(im);
  }
  return out;
}

std::vector<std::complex<double>> decode_complex(const Context& ctx, const RingPoly& poly) {
  if (poly.coeffs.size() != ctx.n()) throw std::invalid_argument("decode: polynomial length mismatch");
  const std::size_t slots = ctx.params().slots();
  const double inv_scale = 1.0 / ctx.params().scale;
  std::vector<std::complex<double>> u(slots);
  for (std::size_t i = 0; i < slots; ++i) {
    u[i] = {static_cast<double>(ctx.centered(poly.coeffs[i])) * inv_scale,
            static_cast<double>(ctx.centered(poly.coeffs[i + slots])) * inv_scale};
  }
  ctx.embed_forward(u);
  return u;
}

std::vector<double> decode(const Context& ctx, const RingPoly& poly, std::size_t count) {
  const auto slots = decode_complex(ctx, poly);
  if (count == 0) count = slots.size();
  if (count > slots.size()) throw std::invalid_argument("decode: count exceeds slot count");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = slots[i].real();
  return out;
}

Ciphertext encrypt(const Context& ctx, const PublicKey& pk, const RingPoly& plaintext, Csprng& rng) {
  const std::size_t n = ctx.n();
  if (plaintext.coeffs.size() != n) throw std::invalid_argument("encrypt: plaintext length mismatch");
  RingPoly u = ctx.sample_ternary(rng);
  const RingPoly e0 = ctx.sample_gaussian(rng);
  const RingPoly e1 = ctx.sample_gaussian(rng);
  ctx.ntt_forward(u.coeffs);
  Ciphertext ct;
  ct.c0.coeffs.resize(n);
  ct.c1.coeffs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ct.c0.coeffs[i] = ctx.mul_mod(pk.b_ntt.coeffs[i], u.coeffs[i]);
    ct.c1.coeffs[i] = ctx.mul_mod(pk.a_ntt.coeffs[i], u.coeffs[i]);
  }
  ctx.ntt_inverse(ct.c0.coeffs);
  ctx.ntt_inverse(ct.c1.coeffs);
  for (std::size_t i = 0; i < n; ++i) {
    ct.c0.coeffs[i] = ctx.add_mod(ctx.add_mod(ct.c0.coeffs[i], e0.coeffs[i]), plaintext.coeffs[i]);
    ct.c1.coeffs[i] = ctx.add_mod(ct.c1.coeffs[i], e1.coeffs[i]);
  }
  ct.scale = ctx.params().scale;
  ct.additions_used = 0;
  return ct;
}

Ciphertext add(const Context& ctx, const Ciphertext& a, const Ciphertext& b) {
  if (a.scale != b.scale) throw std::invalid_argument("ckks add: scale mismatch");
  if (a.c0.coeffs.size() != ctx.n() || b.c0.coeffs.size() != ctx.n()) {
    throw std::invalid_argument("ckks add: ring degree mismatch");
  }
  const std::size_t used = a.additions_used + b.additions_used + 1;
  if (used > ctx.params().addition_budget) {
    throw BudgetExceeded("ckks add: addition budget of " + std::to_string(ctx.params().addition_budget) +
                         " exhausted; result would not decrypt reliably");
  }
  Ciphertext out;
  out.c0.coeffs.resize(ctx.n());
  out.c1.coeffs.resize(ctx.n());
  for (std::size_t i = 0; i < ctx.n(); ++i) {
    out.c0.coeffs[i] = ctx.add_mod(a.c0.coeffs[i], b.c0.coeffs[i]);
    out.c1.coeffs[i] = ctx.add_mod(a.c1.coeffs[i], b.c1.coeffs[i]);
  }
  out.scale = a.scale;
  out.additions_used = used;
  return out;
}

std::size_t ciphertext_size_bytes(const Context& ctx) { return kCiphertextHeaderBytes + 2 * ctx.n() * 8; }

void write_ciphertext(wire::Writer& w, const Context& ctx, const Ciphertext& ct) {
  w.u32_le(static_cast<std::uint32_t>(ctx.n()));
  w.u64_le(ctx.q());
  w.f64_le(ct.scale);
  w.u32_le(static_cast<std::uint32_t>(ct.additions_used));
  for (auto c : ct.c0.coeffs) w.u64_le(c);
  for (auto c : ct.c1.coeffs) w.u64_le(c);
}

Ciphertext read_ciphertext(wire::Reader& r, const Context& ctx) {
  const std::uint32_t n = r.u32_le();
  const std::uint64_t q = r.u64_le();
  if (n != ctx.n() || q != ctx.q()) throw wire::WireError("CKKS ciphertext parameters do not match context");
  Ciphertext ct;
  ct.scale = r.f64_le();
  ct.additions_used = r.u32_le();
  for (auto* poly : {&ct.c0, &ct.c1}) {
    poly->coeffs.resize(n);
    for (auto& c : poly->coeffs) {
      c = r.u64_le();
      if (c >= q) throw wire::WireError("CKKS coefficient not reduced mod q");
    }
  }
  return ct;
}

}  // namespace hefed::ckks
