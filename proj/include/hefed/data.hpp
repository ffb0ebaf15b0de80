// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace hefed::data {

enum class Source { kSynthetic, kCifar10 };

/// Samples are stored one per column (dim x count).
struct Dataset {
  Eigen::MatrixXd samples;
  std::vector<int> labels;  // empty for synthetic data
  Source source = Source::kSynthetic;

  Eigen::Index dim() const { return samples.rows(); }
  Eigen::Index size() const { return samples.cols(); }
};

struct Partition {
  std::size_t client_id = 0;
  Dataset data;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Centres of a ring mixture: equally spaced on a circle, first at (radius, 0).
Eigen::Matrix2Xd ring_centers(std::size_t modes, double radius);

Dataset gen_gaussian_ring(std::size_t modes, std::size_t per_mode, double radius, double sigma,
                          std::uint64_t seed);

/// Mean Euclidean distance from each column of points to its nearest centre.
double mean_distance_to_nearest(const Eigen::MatrixXd& points, const Eigen::Matrix2Xd& centers);

inline constexpr std::size_t kCifarRecordBytes = 3073;
inline constexpr std::size_t kCifarPixels = 3072;

/// CIFAR-10 binary batch: records of 1 label byte followed by 3072 channel-planar
/// pixel bytes. Pixels are mapped affinely from [0, 255] onto [-1, 1].
/// max_records == 0 loads everything.
Dataset load_cifar10(const std::filesystem::path& path, std::size_t max_records = 0);

/// 32x32x3 -> 8x8 grayscale (channel mean, then 4x4 average pool). Input must
/// have dim 3072; output has dim 64.
Dataset pool_cifar_gray8(const Dataset& cifar);

/// Seeded shuffle, then near-equal contiguous split. The first size % n
/// partitions carry one extra sample.
std::vector<Partition> partition(const Dataset& dd, std::size_t n, std::uint64_t seed);

}  // namespace hefed::data
