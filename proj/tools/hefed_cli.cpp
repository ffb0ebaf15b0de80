// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// hefed: train | bench | extrapolate | report
//
// Exit status: 0 success, 1 usage error, 2 runtime error. Diagnostics go to
// stderr; results go to stdout or the requested files.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hefed/config.hpp"
#include "hefed/federation.hpp"
#include "hefed/profiler.hpp"
#include "hefed/report.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;
constexpr std::size_t kSecureKeyBits = 2048;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void warn_insecure(std::size_t bits) {
  if (bits < kSecureKeyBits) {
    std::cerr << "warning: " << bits << "-bit Paillier keys are insecure; benchmark use only\n";
  }
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("HEFED_SEED");
  if (!raw || !*raw) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(raw, &used, 0);
    if (used != std::string(raw).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("HEFED_SEED is not an unsigned integer: '") + raw + "'");
  }
}

struct TrainArgs {
  std::string config;
  std::string out = "run";
};

int run_train(const TrainArgs& a) {
  auto cfg = hefed::load_run_config(a.config);
  if (auto seed = seed_from_env()) cfg.seed = *seed;
  if (cfg.backend.kind == hefed::fed::BackendKind::kPaillier) warn_insecure(cfg.backend.paillier_bits);
  const auto report = hefed::fed::run_training(cfg);
  hefed::write_run_outputs(report, a.out);
  std::cout << "rounds: " << report.rounds.size() << "\n";
  std::cout << "initial_mode_distance: " << hefed::format_double(report.initial_mode_distance) << "\n";
  if (!report.rounds.empty()) {
    const auto& last = report.rounds.back();
    std::cout << "final_mode_distance: " << hefed::format_double(last.mode_distance) << "\n";
    std::cout << "max_aggregation_error: " << hefed::format_double(last.max_aggregation_error) << "\n";
  }
  std::cout << "total_bytes: " << report.total_bytes << "\n";
  std::cout << "outputs: " << std::filesystem::path(a.out).string() << "\n";
  return 0;
}

struct BenchArgs {
  std::string backend = "all";
  std::vector<std::size_t> key_bits{64, 128, 256, 512};
  std::string mode = "both";
  std::size_t warmup = 100;
  std::size_t min_iters = hefed::prof::kMinTimedIters;
  double min_wall = 1.0;
  double p = 6342272, t = 24, c = 3, e = 50;
  std::size_t ring_degree = 4096;
  std::string out;
  std::string format = "csv";
  std::string gnuplot;
};

hefed::prof::ReportFormat parse_format(const std::string& f) {
  if (f == "csv") return hefed::prof::ReportFormat::kCsv;
  if (f == "json") return hefed::prof::ReportFormat::kJson;
  throw UsageError("unknown format '" + f + "'");
}

void print_rows(const hefed::prof::OverheadReport& report) {
  std::cout << hefed::prof::kReportCsvHeader << "\n";
  for (const auto& r : report.rows) {
    std::cout << r.backend << ',' << r.key_bits << ',' << hefed::fed::to_string(r.mode) << ','
              << hefed::format_double(r.t_enc_s) << ',' << hefed::format_double(r.t_dec_s) << ',' << r.ct_bytes << ','
              << hefed::format_double(r.per_client_epoch_s) << ',' << hefed::format_double(r.total_s) << ','
              << hefed::format_double(r.p) << ',' << hefed::format_double(r.t) << ',' << hefed::format_double(r.c)
              << ',' << hefed::format_double(r.e) << "\n";
  }
}

int run_bench(const BenchArgs& a) {
  namespace prof = hefed::prof;
  const auto format = parse_format(a.format);
  prof::ProfileOptions opt;
  opt.bench.warmup_iters = a.warmup;
  opt.bench.min_iters = a.min_iters;
  opt.bench.min_wall_s = a.min_wall;
  opt.p = a.p, opt.t = a.t, opt.c = a.c, opt.e = a.e;
  opt.ckks_ring_degree = a.ring_degree;

  prof::OverheadReport report;
  const bool all = a.backend == "all";
  if (all || a.backend == "paillier") {
    for (auto bits : a.key_bits) {
      warn_insecure(bits);
      report.rows.push_back(prof::profile_paillier(bits, opt));
    }
  }
  if (all || a.backend == "ckks") {
    if (a.mode == "both" || a.mode == "per-param" || a.mode == "per_param") {
      report.rows.push_back(prof::profile_ckks(prof::PackingMode::kPerParam, opt));
    }
    if (a.mode == "both" || a.mode == "per-tensor" || a.mode == "per_tensor") {
      report.rows.push_back(prof::profile_ckks(prof::PackingMode::kPerTensor, opt));
    }
  }
  if (all || a.backend == "mpc") report.rows.push_back(prof::profile_mpc(opt));

  print_rows(report);
  if (!a.out.empty()) prof::emit_report(report, format, a.out);
  if (!a.gnuplot.empty()) prof::emit_gnuplot(report, a.gnuplot);
  return 0;
}

struct ExtrapolateArgs {
  std::string mode;
  double p = 6342272, t = 24, c = 3, e = 50;
  std::optional<double> enc, dec, tt;
};

int run_extrapolate(const ExtrapolateArgs& a) {
  namespace prof = hefed::prof;
  prof::ExtrapolationInput in;
  in.mode = hefed::fed::parse_packing_mode(a.mode);
  in.p = a.p, in.t = a.t, in.c = a.c, in.e = a.e;
  if (in.mode == prof::PackingMode::kPerParam) {
    if (!a.enc || !a.dec) throw UsageError("per-param mode needs --enc and --dec");
    if (a.tt) throw UsageError("--tt applies to per-tensor mode only");
    in.enc_s = *a.enc;
    in.dec_s = *a.dec;
  } else if (a.tt) {
    if (a.enc || a.dec) throw UsageError("give either --tt or --enc/--dec, not both");
    in.enc_s = *a.tt;
  } else {
    if (!a.enc || !a.dec) throw UsageError("per-tensor mode needs --tt or both --enc and --dec");
    in.enc_s = *a.enc;
    in.dec_s = *a.dec;
  }
  const auto ex = prof::extrapolate(in);
  std::cout << "per_client_epoch_s: " << hefed::format_double(ex.per_client_epoch_s) << "\n";
  std::cout << "total_s: " << hefed::format_double(ex.total_s) << "\n";
  if (const auto ref = prof::match_reference(in)) {
    const double delta = ex.total_s - ref->total_s;
    std::cout << "reference " << ref->label << ": total_s " << hefed::format_double(ref->total_s) << ", delta "
              << hefed::format_double(delta) << " s (" << hefed::format_double(100.0 * delta / ref->total_s)
              << "%)\n";
  }
  return 0;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string format = "csv";
  std::string output;
  std::string gnuplot;
};

int run_report(const ReportArgs& a) {
  namespace prof = hefed::prof;
  const auto format = parse_format(a.format);
  prof::OverheadReport merged;
  for (const auto& path : a.inputs) {
    auto part = prof::read_report_json(path);
    merged.rows.insert(merged.rows.end(), part.rows.begin(), part.rows.end());
  }
  prof::emit_report(merged, format, a.output);
  if (!a.gnuplot.empty()) prof::emit_gnuplot(merged, a.gnuplot);
  std::cout << "rows: " << merged.rows.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated GAN simulator with encrypted aggregation backends", "hefed"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hefed::code_version());

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Run federated training from a JSON config");
  train_cmd->add_option("--config", train.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Output directory")->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure per-operation costs and extrapolate overhead");
  bench_cmd->add_option("--backend", bench.backend, "paillier, ckks, mpc or all")->capture_default_str()
      ->check(CLI::IsMember({"paillier", "ckks", "mpc", "all"}));
  bench_cmd->add_option("--key-bits", bench.key_bits, "Paillier key sizes")->capture_default_str();
  bench_cmd->add_option("--mode", bench.mode, "CKKS packing: per-param, per-tensor or both")->capture_default_str()
      ->check(CLI::IsMember({"per-param", "per_param", "per-tensor", "per_tensor", "both"}));
  bench_cmd->add_option("--warmup", bench.warmup, "Untimed warmup calls")->capture_default_str();
  bench_cmd->add_option("--min-iters", bench.min_iters, "Timed calls (at least 10000)")->capture_default_str();
  bench_cmd->add_option("--min-wall", bench.min_wall, "Minimum timed seconds per measurement")->capture_default_str();
  bench_cmd->add_option("--ring-degree", bench.ring_degree, "CKKS ring degree")->capture_default_str();
  bench_cmd->add_option("--p", bench.p, "Parameters in the extrapolated model")->capture_default_str();
  bench_cmd->add_option("--t", bench.t, "Tensors in the extrapolated model")->capture_default_str();
  bench_cmd->add_option("--c", bench.c, "Clients")->capture_default_str();
  bench_cmd->add_option("--e", bench.e, "Epochs")->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Write the report here");
  bench_cmd->add_option("--format", bench.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  bench_cmd->add_option("--gnuplot", bench.gnuplot, "Also write a gnuplot data file");

  ExtrapolateArgs ex;
  auto* ex_cmd = app.add_subcommand("extrapolate", "Apply the overhead formulas to given timings");
  ex_cmd->add_option("--mode", ex.mode, "per-param or per-tensor")
      ->required()
      ->check(CLI::IsMember({"per-param", "per_param", "per-tensor", "per_tensor"}));
  ex_cmd->add_option("--p", ex.p, "Parameter count")->capture_default_str()->check(CLI::NonNegativeNumber);
  ex_cmd->add_option("--t", ex.t, "Tensor count")->capture_default_str()->check(CLI::NonNegativeNumber);
  ex_cmd->add_option("--c", ex.c, "Clients")->capture_default_str()->check(CLI::NonNegativeNumber);
  ex_cmd->add_option("--e", ex.e, "Epochs")->capture_default_str()->check(CLI::NonNegativeNumber);
  ex_cmd->add_option("--enc", ex.enc, "Encryption time (s)")->check(CLI::NonNegativeNumber);
  ex_cmd->add_option("--dec", ex.dec, "Decryption time (s)")->check(CLI::NonNegativeNumber);
  ex_cmd->add_option("--tt", ex.tt, "Total tensor encryption+decryption time (s)")->check(CLI::NonNegativeNumber);

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Merge JSON bench reports and convert");
  rep_cmd->add_option("--input", rep.inputs, "Bench report(s) in JSON")->required()->check(CLI::ExistingFile);
  rep_cmd->add_option("--format", rep.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  rep_cmd->add_option("--output", rep.output, "Output path")->required();
  rep_cmd->add_option("--gnuplot", rep.gnuplot, "Also write a gnuplot data file");

  if (argc <= 1) {
    std::cerr << app.help();
    return kUsageError;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return kUsageError;
  }

  try {
    if (*train_cmd) return run_train(train);
    if (*bench_cmd) return run_bench(bench);
    if (*ex_cmd) return run_extrapolate(ex);
    if (*rep_cmd) return run_report(rep);
  } catch (const UsageError& e) {
    std::cerr << "hefed: " << e.what() << "\n";
    return kUsageError;
  } catch (const hefed::ConfigError& e) {
    std::cerr << "hefed: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "hefed: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}
