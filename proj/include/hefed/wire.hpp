// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hefed::wire {

using Bytes = std::vector<std::uint8_t>;

class WireError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32_le(std::uint32_t v) { put_le(v, 4); }
  void u64_le(std::uint64_t v) { put_le(v, 8); }
  void u32_be(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64_le(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64_le(bits);
  }
  void tag(const char (&t)[5]) { out_.insert(out_.end(), t, t + 4); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  Bytes take() { return std::move(out_); }
  std::size_t size() const { return out_.size(); }

 private:
  void put_le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() { return need(1)[0]; }
  std::uint32_t u32_le() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64_le() { return get_le(8); }
  std::uint32_t u32_be() {
    auto p = need(4);
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
  }
  double f64_le() {
    const std::uint64_t bits = u64_le();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  void expect_tag(const char (&t)[5]) {
    auto p = need(4);
    if (std::memcmp(p.data(), t, 4) != 0) throw WireError(std::string("expected frame tag ") + t);
  }
  std::span<const std::uint8_t> bytes(std::size_t n) { return need(n); }

  std::size_t remaining() const { return in_.size() - pos_; }
  void expect_end() const {
    if (remaining() != 0) throw WireError("trailing bytes after frame");
  }

 private:
  std::span<const std::uint8_t> need(std::size_t n) {
    if (remaining() < n) throw WireError("truncated frame");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint64_t get_le(int n) {
    auto p = need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{p[static_cast<std::size_t>(i)]} << (8 * i);
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace hefed::wire
