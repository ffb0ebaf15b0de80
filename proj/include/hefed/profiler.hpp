// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// Micro-benchmark harness and the overhead extrapolators.
//
// Two cost models are supported. Per-parameter: every value is encrypted on
// its own, so one client-epoch costs p * (enc + dec). Per-tensor: whole
// tensors go through at once and one client-epoch costs tt, the summed
// tensor encryption and decryption time. Either way the run total is the
// per-client-epoch figure times clients times epochs.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hefed/backend.hpp"

namespace hefed::prof {

using fed::PackingMode;

struct BenchSpec {
  std::string label;
  std::size_t warmup_iters = 100;
  std::size_t min_iters = 10000;  // raised to kMinTimedIters if set lower
  double min_wall_s = 1.0;
};

inline constexpr std::size_t kMinTimedIters = 10000;

struct TimingResult {
  std::string label;
  double mean_s = 0.0;
  double stddev_s = 0.0;
  std::size_t iters = 0;
};

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Times `op` on the steady clock, one sample per call, after the warmup
/// calls. Keeps going until both the iteration floor and the wall floor are met.
TimingResult bench(const BenchSpec& spec, const std::function<void()>& op);

/// As bench(), but `setup` runs untimed before every call to `op`.
TimingResult bench(const BenchSpec& spec, const std::function<void()>& setup, const std::function<void()>& op);

class ModeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExtrapolationInput {
  double p = 6342272;  // parameters in the reference model
  double t = 24;       // tensors in the reference model (13 + 11)
  double c = 3;
  double e = 50;
  double enc_s = 0.0;  // per value, or per tensor set
  double dec_s = 0.0;
  PackingMode mode = PackingMode::kPerParam;
};

struct Extrapolation {
  double per_client_epoch_s = 0.0;
  double total_s = 0.0;
};

/// per_client_epoch = p * (enc + dec); total = per_client_epoch * c * e.
Extrapolation extrapolate_per_param(const ExtrapolationInput& in);

/// tt = enc + dec (already summed over the tensor set); total = tt * c * e.
Extrapolation extrapolate_per_tensor(const ExtrapolationInput& in);

/// Dispatches on in.mode.
Extrapolation extrapolate(const ExtrapolationInput& in);

/// A reference measurement used as extrapolator input, with the total it
/// reported. For per-tensor rows enc_s holds tt and dec_s is zero.
struct ReferenceRow {
  std::string label;
  std::string backend;
  std::size_t key_bits;
  PackingMode mode;
  double enc_s;
  double dec_s;
  double per_client_epoch_s;
  double total_s;
};

const std::vector<ReferenceRow>& reference_rows();

/// Row whose mode and timings equal the input (relative 1e-9), if any.
std::optional<ReferenceRow> match_reference(const ExtrapolationInput& in);

struct OverheadRow {
  std::string backend;
  std::size_t key_bits = 0;
  PackingMode mode = PackingMode::kPerParam;
  double t_enc_s = 0.0;  // one value (per-param) or one ciphertext/block (per-tensor)
  double t_dec_s = 0.0;
  std::size_t ct_bytes = 0;  // serialized size of one ciphertext or share word
  std::size_t values_per_unit = 1;
  double per_client_epoch_s = 0.0;
  double total_s = 0.0;
  double p = 0, t = 0, c = 0, e = 0;

  /// Overhead attributable to one parameter per client-epoch.
  double per_param_s() const { return p > 0 ? per_client_epoch_s / p : 0.0; }
};

struct OverheadReport {
  std::vector<OverheadRow> rows;
};

struct ProfileOptions {
  BenchSpec bench;  // label is filled per measurement
  double p = 6342272;
  double t = 24;
  double c = 3;
  double e = 50;
  std::size_t ckks_ring_degree = 4096;
  double ckks_scale = 0x1p40;
  std::size_t mpc_block = 4096;  // values per timed MPC share/reconstruct call
  unsigned mpc_frac_bits = 16;
  std::uint64_t seed = 7;
};

/// Per-tensor unit count for p values split into t tensors, each packed into
/// `width`-value units: ceil(p / width) + t, an upper bound on the sum of
/// per-tensor ceilings.
double per_tensor_units(double p, double t, std::size_t width);

OverheadRow profile_paillier(std::size_t key_bits, const ProfileOptions& opt);
OverheadRow profile_ckks(PackingMode mode, const ProfileOptions& opt);
OverheadRow profile_mpc(const ProfileOptions& opt);

/// Paillier at each key size, CKKS in both modes, then MPC.
OverheadReport profile_all(const ProfileOptions& opt, const std::vector<std::size_t>& paillier_bits = {64, 128, 256, 512});

enum class ReportFormat { kCsv, kJson };

inline constexpr const char* kReportCsvHeader =
    "backend,key_bits,mode,t_enc_s,t_dec_s,ct_bytes,per_client_epoch_s,total_s,p,t,c,e";

/// Throws std::invalid_argument on an empty report and std::runtime_error on I/O failure.
void emit_report(const OverheadReport& report, ReportFormat format, const std::filesystem::path& path);
OverheadReport read_report_json(const std::filesystem::path& path);

/// Whitespace-separated columns for gnuplot: index, key_bits, total_s,
/// per_param_s, then "backend/mode" as a quoted label.
void emit_gnuplot(const OverheadReport& report, const std::filesystem::path& path);

}  // namespace hefed::prof
