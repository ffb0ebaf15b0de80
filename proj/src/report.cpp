// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/report.hpp"

#include <sodium.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hefed/config.hpp"

#ifndef HEFED_VERSION
#define HEFED_VERSION "unknown"
#endif

namespace hefed {

using nlohmann::json;

std::string code_version() { return HEFED_VERSION; }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[crypto_hash_sha256_BYTES];
  crypto_hash_sha256(digest, reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 15]);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json report_to_json(const fed::RunReport& r) {
  json rounds = json::array();
  for (const auto& rec : r.rounds) {
    rounds.push_back({{"round", rec.round},
                      {"mode_distance", rec.mode_distance},
                      {"max_aggregation_error", rec.max_aggregation_error},
                      {"max_client_divergence", rec.max_client_divergence},
                      {"client_bytes_out", rec.client_bytes_out},
                      {"server_bytes_out", rec.server_bytes_out}});
  }
  auto vec = [](const nn::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return {{"config", to_json(r.config)},
          {"generator_params", r.generator_params},
          {"discriminator_params", r.discriminator_params},
          {"initial_mode_distance", r.initial_mode_distance},
          {"rounds", rounds},
          {"total_bytes", r.total_bytes},
          {"final_generator", vec(r.final_generator)},
          {"final_discriminator", vec(r.final_discriminator)}};
}

namespace {

std::string metrics_csv(const fed::RunReport& r) {
  std::ostringstream os;
  os << "round,client,d_loss,g_loss,d_real_acc,d_fake_acc,steps,bytes_out,mode_distance,max_aggregation_error\n";
  for (const auto& row : r.rows) {
    const auto& rec = r.rounds.at(row.round);
    os << row.round << ',' << row.client << ',' << format_double(row.metrics.d_loss) << ','
       << format_double(row.metrics.g_loss) << ',' << format_double(row.metrics.d_real_acc) << ','
       << format_double(row.metrics.d_fake_acc) << ',' << row.metrics.steps << ',' << row.bytes_out << ','
       << format_double(rec.mode_distance) << ',' << format_double(rec.max_aggregation_error) << '\n';
  }
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void write_run_outputs(const fed::RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string report_text = report_to_json(report).dump(2) + "\n";
  const std::string csv = metrics_csv(report);

  json timing = {{"wall_s", report.wall_s}, {"rounds", json::array()}};
  for (const auto& rec : report.rounds) timing["rounds"].push_back({{"round", rec.round}, {"wall_s", rec.wall_s}});

  const std::string config_text = to_json(report.config).dump();
  const json manifest = {{"config_sha256", sha256_hex(config_text)},
                         {"seed", report.config.seed},
                         {"code_version", code_version()},
                         {"files",
                          {{"report.json", sha256_hex(report_text)},
                           {"metrics.csv", sha256_hex(csv)}}}};

  write_file(dir / "report.json", report_text);
  write_file(dir / "metrics.csv", csv);
  write_file(dir / "timing.json", timing.dump(2) + "\n");
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace hefed
