// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "hefed/rng.hpp"

namespace hefed::data {

Eigen::Matrix2Xd ring_centers(std::size_t modes, double radius) {
  Eigen::Matrix2Xd c(2, static_cast<Eigen::Index>(modes));
  for (std::size_t k = 0; k < modes; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(modes);
    c(0, static_cast<Eigen::Index>(k)) = radius * std::cos(angle);
    c(1, static_cast<Eigen::Index>(k)) = radius * std::sin(angle);
  }
  return c;
}

Dataset gen_gaussian_ring(std::size_t modes, std::size_t per_mode, double radius, double sigma,
                          std::uint64_t seed) {
  if (modes == 0 || per_mode == 0) throw std::invalid_argument("gen_gaussian_ring: modes and per_mode must be >= 1");
  if (sigma < 0.0) throw std::invalid_argument("gen_gaussian_ring: sigma must be non-negative");
  const Eigen::Matrix2Xd centers = ring_centers(modes, radius);
  SimRng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset ds;
  ds.source = Source::kSynthetic;
  ds.samples.resize(2, static_cast<Eigen::Index>(modes * per_mode));
  Eigen::Index col = 0;
  for (std::size_t k = 0; k < modes; ++k) {
    for (std::size_t i = 0; i < per_mode; ++i, ++col) {
      const double dx = normal(rng), dy = normal(rng);
      ds.samples(0, col) = centers(0, static_cast<Eigen::Index>(k)) + sigma * dx;
      ds.samples(1, col) = centers(1, static_cast<Eigen::Index>(k)) + sigma * dy;
    }
  }
  return ds;
}

double mean_distance_to_nearest(const Eigen::MatrixXd& points, const Eigen::Matrix2Xd& centers) {
  if (points.rows() != 2) throw std::invalid_argument("mean_distance_to_nearest: points must be 2-D");
  if (points.cols() == 0 || centers.cols() == 0) return 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const double best = (centers.colwise() - points.col(i)).colwise().norm().minCoeff();
    total += best;
  }
  return total / static_cast<double>(points.cols());
}

Dataset load_cifar10(const std::filesystem::path& path, std::size_t max_records) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_cifar10: cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
    throw FormatError("load_cifar10: " + path.string() + " has " + std::to_string(bytes.size()) +
                      " bytes, not a positive multiple of 3073");
  }
  std::size_t records = bytes.size() / kCifarRecordBytes;
  if (max_records != 0) records = std::min(records, max_records);

  Dataset ds;
  ds.source = Source::kCifar10;
  ds.samples.resize(static_cast<Eigen::Index>(kCifarPixels), static_cast<Eigen::Index>(records));
  ds.labels.reserve(records);
  for (std::size_t r = 0; r < records; ++r) {
    const unsigned char* rec = bytes.data() + r * kCifarRecordBytes;
    if (rec[0] > 9) {
      throw FormatError("load_cifar10: record " + std::to_string(r) + " has label " +
                        std::to_string(rec[0]));
    }
    ds.labels.push_back(rec[0]);
    for (std::size_t p = 0; p < kCifarPixels; ++p) {
      ds.samples(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(r)) =
          static_cast<double>(rec[1 + p]) / 127.5 - 1.0;
    }
  }
  return ds;
}

Dataset pool_cifar_gray8(const Dataset& cifar) {
  if (cifar.dim() != static_cast<Eigen::Index>(kCifarPixels)) {
    throw std::invalid_argument("pool_cifar_gray8: expected 3072-dim samples");
  }
  constexpr int kSide = 32, kPlane = kSide * kSide, kOut = 8, kCell = kSide / kOut;
  Dataset out;
  out.source = cifar.source;
  out.labels = cifar.labels;
  out.samples.resize(kOut * kOut, cifar.size());
  for (Eigen::Index s = 0; s < cifar.size(); ++s) {
    const auto col = cifar.samples.col(s);
    for (int oy = 0; oy < kOut; ++oy) {
      for (int ox = 0; ox < kOut; ++ox) {
        double acc = 0.0;
        for (int dy = 0; dy < kCell; ++dy) {
          for (int dx = 0; dx < kCell; ++dx) {
            const int pix = (oy * kCell + dy) * kSide + (ox * kCell + dx);
            acc += col(pix) + col(kPlane + pix) + col(2 * kPlane + pix);
          }
        }
        out.samples(oy * kOut + ox, s) = acc / (3.0 * kCell * kCell);
      }
    }
  }
  return out;
}

std::vector<Partition> partition(const Dataset& dd, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("partition: client count must be >= 1");
  const auto total = static_cast<std::size_t>(dd.size());
  if (n > total) {
    throw std::invalid_argument("partition: " + std::to_string(n) + " clients but only " +
                                std::to_string(total) + " samples");
  }
  std::vector<Eigen::Index> order(total);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  SimRng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Partition> parts;
  const std::size_t base = total / n, extra = total % n;
  std::size_t pos = 0;
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t count = base + (c < extra ? 1 : 0);
    Partition p;
    p.client_id = c;
    p.data.source = dd.source;
    p.data.samples.resize(dd.dim(), static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
      const Eigen::Index src = order[pos + i];
      p.data.samples.col(static_cast<Eigen::Index>(i)) = dd.samples.col(src);
      if (!dd.labels.empty()) p.data.labels.push_back(dd.labels[static_cast<std::size_t>(src)]);
    }
    pos += count;
    parts.push_back(std::move(p));
  }
  return parts;
}

}  // namespace hefed::data
