// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/profiler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hefed/ckks.hpp"
#include "hefed/ckks_secret.hpp"
#include "hefed/mpc.hpp"
#include "hefed/paillier.hpp"
#include "hefed/paillier_secret.hpp"
#include "hefed/report.hpp"

namespace hefed::prof {

namespace {

using Clock = std::chrono::steady_clock;

TimingResult run_bench(const BenchSpec& spec, const std::function<void()>* setup, const std::function<void()>& op) {
  const std::size_t floor = std::max(spec.min_iters, kMinTimedIters);
  try {
    for (std::size_t i = 0; i < spec.warmup_iters; ++i) {
      if (setup) (*setup)();
      op();
    }
    // Welford running mean and variance over per-call samples.
    double mean = 0.0, m2 = 0.0;
    std::size_t n = 0;
    const auto start = Clock::now();
    while (n < floor || std::chrono::duration<double>(Clock::now() - start).count() < spec.min_wall_s) {
      if (setup) (*setup)();
      const auto t0 = Clock::now();
      op();
      const auto t1 = Clock::now();
      const double x = std::chrono::duration<double>(t1 - t0).count();
      ++n;
      const double delta = x - mean;
      mean += delta / static_cast<double>(n);
      m2 += delta * (x - mean);
    }
    return {spec.label, mean, n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0, n};
  } catch (const BenchError&) {
    throw;
  } catch (const std::exception& e) {
    throw BenchError("bench '" + spec.label + "': " + e.what());
  }
}

BenchSpec labelled(const BenchSpec& base, std::string label) {
  BenchSpec s = base;
  s.label = std::move(label);
  return s;
}

void check_positive(const ExtrapolationInput& in) {
  if (in.p < 0 || in.t < 0 || in.c < 0 || in.e < 0 || in.enc_s < 0 || in.dec_s < 0) {
    throw std::invalid_argument("extrapolation inputs must be non-negative");
  }
}

// Keeps the optimiser from discarding benchmarked results.
template <typename T>
void sink(const T& v) {
  asm volatile("" : : "g"(&v) : "memory");
}

}  // namespace

TimingResult bench(const BenchSpec& spec, const std::function<void()>& op) { return run_bench(spec, nullptr, op); }

TimingResult bench(const BenchSpec& spec, const std::function<void()>& setup, const std::function<void()>& op) {
  return run_bench(spec, &setup, op);
}

Extrapolation extrapolate_per_param(const ExtrapolationInput& in) {
  if (in.mode != PackingMode::kPerParam) throw ModeMismatch("extrapolate_per_param needs per_param input");
  check_positive(in);
  const double per_epoch = in.p * (in.enc_s + in.dec_s);
  return {per_epoch, per_epoch * in.c * in.e};
}

Extrapolation extrapolate_per_tensor(const ExtrapolationInput& in) {
  if (in.mode != PackingMode::kPerTensor) throw ModeMismatch("extrapolate_per_tensor needs per_tensor input");
  check_positive(in);
  const double tt = in.enc_s + in.dec_s;
  return {tt, tt * in.c * in.e};
}

Extrapolation extrapolate(const ExtrapolationInput& in) {
  return in.mode == PackingMode::kPerParam ? extrapolate_per_param(in) : extrapolate_per_tensor(in);
}

const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows = {
      {"paillier-64", "paillier", 64, PackingMode::kPerParam, 0.000105, 1.612e-5, 771, 115650},
      {"paillier-128", "paillier", 128, PackingMode::kPerParam, 0.0005040, 0.00018, 4311, 646650},
      {"paillier-256", "paillier", 256, PackingMode::kPerParam, 0.00134, 0.00058, 12177, 1826574},
      {"paillier-512", "paillier", 512, PackingMode::kPerParam, 0.00671, 0.00023, 44015, 6602305},
      {"ckks-per-param", "ckks", 128, PackingMode::kPerParam, 0.00397, 0.00113, 32322, 4848408},
      {"ckks-per-tensor", "ckks", 128, PackingMode::kPerTensor, 14.25, 0.0, 14.25, 2137},
      {"mpc", "mpc", 0, PackingMode::kPerTensor, 0.368, 0.0, 0.368, 55.2},
  };
  return rows;
}

std::optional<ReferenceRow> match_reference(const ExtrapolationInput& in) {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
  for (const auto& row : reference_rows()) {
    if (row.mode != in.mode) continue;
    if (in.mode == PackingMode::kPerParam && close(row.enc_s, in.enc_s) && close(row.dec_s, in.dec_s)) return row;
    if (in.mode == PackingMode::kPerTensor && close(row.enc_s, in.enc_s + in.dec_s)) return row;
  }
  return std::nullopt;
}

double per_tensor_units(double p, double t, std::size_t width) {
  if (width == 0) throw std::invalid_argument("per_tensor_units: width must be positive");
  return std::ceil(p / static_cast<double>(width)) + t;
}

OverheadRow profile_paillier(std::size_t key_bits, const ProfileOptions& opt) {
  Csprng rng(opt.seed + key_bits);
  const auto kp = paillier::keygen(key_bits, rng);
  const paillier::FixedPointCodec codec(kp.pk, 32);
  const double x = 0.123456789;
  const std::string tag = "paillier-" + std::to_string(key_bits);

  paillier::Ciphertext ct = paillier::encrypt(kp.pk, codec.encode(x), rng);
  const auto enc = bench(labelled(opt.bench, tag + " encrypt"), [&] {
    auto c = paillier::encrypt(kp.pk, codec.encode(x), rng);
    sink(c);
  });
  const auto dec = bench(labelled(opt.bench, tag + " decrypt"), [&] {
    double v = codec.decode(paillier::decrypt(kp.sk, kp.pk, ct));
    sink(v);
  });

  wire::Writer w;
  paillier::write_ciphertext(w, kp.pk, ct);
  OverheadRow row{"paillier", key_bits, PackingMode::kPerParam, enc.mean_s, dec.mean_s, w.take().size()};
  const auto ex = extrapolate_per_param({opt.p, opt.t, opt.c, opt.e, enc.mean_s, dec.mean_s, PackingMode::kPerParam});
  row.per_client_epoch_s = ex.per_client_epoch_s;
  row.total_s = ex.total_s;
  row.p = opt.p, row.t = opt.t, row.c = opt.c, row.e = opt.e;
  return row;
}

OverheadRow profile_ckks(PackingMode mode, const ProfileOptions& opt) {
  const ckks::Context ctx(ckks::Params::make(opt.ckks_ring_degree, opt.ckks_scale));
  Csprng rng(opt.seed + opt.ckks_ring_degree);
  const auto kp = ckks::keygen(ctx, rng);
  const std::size_t width = mode == PackingMode::kPerParam ? 1 : ctx.params().slots();

  std::mt19937_64 gen(opt.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(width);
  for (auto& v : values) v = dist(gen);

  const std::string tag = "ckks-" + fed::to_string(mode);
  ckks::Ciphertext ct = ckks::encrypt(ctx, kp.pk, ckks::encode(ctx, values), rng);
  const auto enc = bench(labelled(opt.bench, tag + " encrypt"), [&] {
    auto c = ckks::encrypt(ctx, kp.pk, ckks::encode(ctx, values), rng);
    sink(c);
  });
  const auto dec = bench(labelled(opt.bench, tag + " decrypt"), [&] {
    auto out = ckks::decode(ctx, ckks::decrypt(ctx, kp.sk, ct), width);
    sink(out);
  });

  wire::Writer w;
  ckks::write_ciphertext(w, ctx, ct);
  OverheadRow row{"ckks", 0, mode, enc.mean_s, dec.mean_s, w.take().size(), width};
  Extrapolation ex;
  if (mode == PackingMode::kPerParam) {
    ex = extrapolate_per_param({opt.p, opt.t, opt.c, opt.e, enc.mean_s, dec.mean_s, mode});
  } else {
    const double units = per_tensor_units(opt.p, opt.t, width);
    ex = extrapolate_per_tensor({opt.p, opt.t, opt.c, opt.e, units * enc.mean_s, units * dec.mean_s, mode});
  }
  row.per_client_epoch_s = ex.per_client_epoch_s;
  row.total_s = ex.total_s;
  row.p = opt.p, row.t = opt.t, row.c = opt.c, row.e = opt.e;
  return row;
}

OverheadRow profile_mpc(const ProfileOptions& opt) {
  const auto parties = static_cast<std::size_t>(std::max(2.0, opt.c));
  Csprng rng(opt.seed + 0x6d7063);
  std::mt19937_64 gen(opt.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(opt.mpc_block);
  for (auto& v : values) v = dist(gen);

  const auto shares = mpc::share(mpc::fp_encode(values, opt.mpc_frac_bits), parties, rng);
  const auto enc = bench(labelled(opt.bench, "mpc share"), [&] {
    auto s = mpc::share(mpc::fp_encode(values, opt.mpc_frac_bits), parties, rng);
    sink(s);
  });
  const auto dec = bench(labelled(opt.bench, "mpc reconstruct"), [&] {
    auto out = mpc::fp_decode(mpc::reconstruct(shares), opt.mpc_frac_bits);
    sink(out);
  });

  OverheadRow row{"mpc", 0, PackingMode::kPerTensor, enc.mean_s, dec.mean_s, sizeof(mpc::Ring), opt.mpc_block};
  // Shares are elementwise, so cost is linear in p with no per-tensor padding.
  const double units = opt.p / static_cast<double>(opt.mpc_block);
  const auto ex = extrapolate_per_tensor(
      {opt.p, opt.t, opt.c, opt.e, units * enc.mean_s, units * dec.mean_s, PackingMode::kPerTensor});
  row.per_client_epoch_s = ex.per_client_epoch_s;
  row.total_s = ex.total_s;
  row.p = opt.p, row.t = opt.t, row.c = opt.c, row.e = opt.e;
  return row;
}

OverheadReport profile_all(const ProfileOptions& opt, const std::vector<std::size_t>& paillier_bits) {
  OverheadReport report;
  for (auto bits : paillier_bits) report.rows.push_back(profile_paillier(bits, opt));
  report.rows.push_back(profile_ckks(PackingMode::kPerParam, opt));
  report.rows.push_back(profile_ckks(PackingMode::kPerTensor, opt));
  report.rows.push_back(profile_mpc(opt));
  return report;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

nlohmann::json row_json(const OverheadRow& r) {
  return {{"backend", r.backend},     {"key_bits", r.key_bits},
          {"mode", fed::to_string(r.mode)},
          {"t_enc_s", r.t_enc_s},     {"t_dec_s", r.t_dec_s},
          {"ct_bytes", r.ct_bytes},   {"values_per_unit", r.values_per_unit},
          {"per_client_epoch_s", r.per_client_epoch_s},
          {"total_s", r.total_s},     {"p", r.p},
          {"t", r.t},                 {"c", r.c},
          {"e", r.e}};
}

}  // namespace

void emit_report(const OverheadReport& report, ReportFormat format, const std::filesystem::path& path) {
  if (report.rows.empty()) throw std::invalid_argument("emit_report: report has no rows");
  auto out = open_out(path);
  if (format == ReportFormat::kCsv) {
    out << kReportCsvHeader << '\n';
    for (const auto& r : report.rows) {
      out << r.backend << ',' << r.key_bits << ',' << fed::to_string(r.mode) << ',' << format_double(r.t_enc_s) << ','
          << format_double(r.t_dec_s) << ',' << r.ct_bytes << ',' << format_double(r.per_client_epoch_s) << ','
          << format_double(r.total_s) << ',' << format_double(r.p) << ',' << format_double(r.t) << ','
          << format_double(r.c) << ',' << format_double(r.e) << '\n';
    }
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) rows.push_back(row_json(r));
    out << nlohmann::json{{"rows", rows}}.dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

OverheadReport read_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto j = nlohmann::json::parse(in);
  OverheadReport report;
  for (const auto& r : j.at("rows")) {
    OverheadRow row;
    row.backend = r.at("backend").get<std::string>();
    row.key_bits = r.at("key_bits").get<std::size_t>();
    row.mode = fed::parse_packing_mode(r.at("mode").get<std::string>());
    row.t_enc_s = r.at("t_enc_s").get<double>();
    row.t_dec_s = r.at("t_dec_s").get<double>();
    row.ct_bytes = r.at("ct_bytes").get<std::size_t>();
    row.values_per_unit = r.value("values_per_unit", std::size_t{1});
    row.per_client_epoch_s = r.at("per_client_epoch_s").get<double>();
    row.total_s = r.at("total_s").get<double>();
    row.p = r.at("p").get<double>();
    row.t = r.at("t").get<double>();
    row.c = r.at("c").get<double>();
    row.e = r.at("e").get<double>();
    report.rows.push_back(std::move(row));
  }
  return report;
}

void emit_gnuplot(const OverheadReport& report, const std::filesystem::path& path) {
  if (report.rows.empty()) throw std::invalid_argument("emit_gnuplot: report has no rows");
  auto out = open_out(path);
  out << "# index key_bits total_s per_param_s label\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out << i << ' ' << r.key_bits << ' ' << format_double(r.total_s) << ' ' << format_double(r.per_param_s()) << " \""
        << r.backend << '/' << fed::to_string(r.mode) << "\"\n";
  }
}

}  // namespace hefed::prof
