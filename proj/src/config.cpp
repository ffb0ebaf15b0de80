// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#include "hefed/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace hefed {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, _] : j.items()) {
    if (!keys.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_positive(const json& j, const char* key, T& out, const std::string& where) {
  read(j, key, out, where);
  if (!(out > T(0))) throw ConfigError(where + "." + key + " must be positive");
}

std::vector<Eigen::Index> read_widths(const json& j, const char* key, std::vector<Eigen::Index> fallback,
                                      const std::string& where) {
  if (!j.contains(key)) return fallback;
  std::vector<long long> raw;
  read(j, key, raw, where);
  std::vector<Eigen::Index> out;
  for (auto w : raw) {
    if (w <= 0) throw ConfigError(where + "." + key + ": widths must be positive");
    out.push_back(static_cast<Eigen::Index>(w));
  }
  return out;
}

}  // namespace

fed::BackendConfig parse_backend_config(const json& j) {
  reject_unknown(j, "backend", {"type", "params"});
  fed::BackendConfig b;
  std::string type = "plaintext";
  read(j, "type", type, "backend");
  try {
    b.kind = fed::parse_backend_kind(type);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("backend.type: ") + e.what());
  }
  const json params = j.value("params", json::object());
  const std::string where = "backend.params";
  switch (b.kind) {
    case fed::BackendKind::kPlaintext:
      reject_unknown(params, where, {});
      break;
    case fed::BackendKind::kPaillier:
      reject_unknown(params, where, {"key_bits", "frac_bits", "clip"});
      read(params, "key_bits", b.paillier_bits, where);
      read(params, "frac_bits", b.paillier_frac_bits, where);
      read_positive(params, "clip", b.paillier_clip, where);
      if (b.paillier_bits < 64 || b.paillier_bits % 2) throw ConfigError(where + ".key_bits must be even and >= 64");
      break;
    case fed::BackendKind::kCkks: {
      reject_unknown(params, where, {"ring_degree", "scale_bits", "addition_budget", "mode"});
      read_positive(params, "ring_degree", b.ckks_ring_degree, where);
      if (params.contains("scale_bits")) {
        int bits = 0;
        read(params, "scale_bits", bits, where);
        if (bits < 1 || bits > 55) throw ConfigError(where + ".scale_bits must be in [1, 55]");
        b.ckks_scale = std::ldexp(1.0, bits);
      }
      read(params, "addition_budget", b.ckks_addition_budget, where);
      std::string mode = fed::to_string(b.ckks_mode);
      read(params, "mode", mode, where);
      try {
        b.ckks_mode = fed::parse_packing_mode(mode);
      } catch (const std::exception& e) {
        throw ConfigError(where + ".mode: " + e.what());
      }
      break;
    }
    case fed::BackendKind::kMpc:
      reject_unknown(params, where, {"frac_bits"});
      read(params, "frac_bits", b.mpc_frac_bits, where);
      if (b.mpc_frac_bits < 1 || b.mpc_frac_bits > 40) throw ConfigError(where + ".frac_bits must be in [1, 40]");
      break;
  }
  return b;
}

json to_json(const fed::BackendConfig& b) {
  json params = json::object();
  switch (b.kind) {
    case fed::BackendKind::kPlaintext:
      break;
    case fed::BackendKind::kPaillier:
      params = {{"key_bits", b.paillier_bits}, {"frac_bits", b.paillier_frac_bits}, {"clip", b.paillier_clip}};
      break;
    case fed::BackendKind::kCkks:
      params = {{"ring_degree", b.ckks_ring_degree},
                {"scale_bits", std::ilogb(b.ckks_scale)},
                {"addition_budget", b.ckks_addition_budget},
                {"mode", fed::to_string(b.ckks_mode)}};
      break;
    case fed::BackendKind::kMpc:
      params = {{"frac_bits", b.mpc_frac_bits}};
      break;
  }
  return {{"type", fed::to_string(b.kind)}, {"params", params}};
}

fed::RunConfig parse_run_config(const json& j) {
  reject_unknown(j, "config", {"clients", "rounds", "seed", "shared_init", "eval_samples", "backend", "gan", "data"});
  fed::RunConfig cfg;
  read_positive(j, "clients", cfg.clients, "config");
  read(j, "rounds", cfg.rounds, "config");
  read(j, "seed", cfg.seed, "config");
  read(j, "shared_init", cfg.shared_init, "config");
  read(j, "eval_samples", cfg.eval_samples, "config");
  if (j.contains("backend")) cfg.backend = parse_backend_config(j.at("backend"));

  if (j.contains("gan")) {
    const json& g = j.at("gan");
    const std::string w = "gan";
    reject_unknown(g, w, {"latent_dim", "generator_hidden", "discriminator_hidden", "batch_size", "local_epochs",
                          "d_steps_per_g", "lr_g", "lr_d"});
    read_positive(g, "latent_dim", cfg.gan.latent_dim, w);
    cfg.gan.generator_hidden = read_widths(g, "generator_hidden", cfg.gan.generator_hidden, w);
    cfg.gan.discriminator_hidden = read_widths(g, "discriminator_hidden", cfg.gan.discriminator_hidden, w);
    read_positive(g, "batch_size", cfg.gan.batch_size, w);
    read(g, "local_epochs", cfg.gan.local_epochs, w);
    read_positive(g, "d_steps_per_g", cfg.gan.d_steps_per_g, w);
    read(g, "lr_g", cfg.gan.lr_g, w);
    read(g, "lr_d", cfg.gan.lr_d, w);
    if (cfg.gan.lr_g < 0 || cfg.gan.lr_d < 0) throw ConfigError("gan: learning rates must be non-negative");
  }

  if (j.contains("data")) {
    const json& d = j.at("data");
    const std::string w = "data";
    reject_unknown(d, w, {"source", "modes", "per_mode", "radius", "sigma", "cifar_path", "max_records", "pool_gray8"});
    read(d, "source", cfg.data.source, w);
    if (cfg.data.source != "ring" && cfg.data.source != "cifar10") {
      throw ConfigError("data.source must be 'ring' or 'cifar10'");
    }
    read_positive(d, "modes", cfg.data.modes, w);
    read_positive(d, "per_mode", cfg.data.per_mode, w);
    read(d, "radius", cfg.data.radius, w);
    read(d, "sigma", cfg.data.sigma, w);
    if (cfg.data.sigma < 0) throw ConfigError("data.sigma must be non-negative");
    read(d, "cifar_path", cfg.data.cifar_path, w);
    read(d, "max_records", cfg.data.max_records, w);
    read(d, "pool_gray8", cfg.data.pool_gray8, w);
  }
  return cfg;
}

fed::RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  auto cfg = parse_run_config(j);
  if (cfg.data.source == "cifar10" && !cfg.data.cifar_path.empty()) {
    std::filesystem::path p = cfg.data.cifar_path;
    if (p.is_relative()) cfg.data.cifar_path = (path.parent_path() / p).string();
  }
  return cfg;
}

json to_json(const fed::RunConfig& cfg) {
  return {{"clients", cfg.clients},
          {"rounds", cfg.rounds},
          {"seed", cfg.seed},
          {"shared_init", cfg.shared_init},
          {"eval_samples", cfg.eval_samples},
          {"backend", to_json(cfg.backend)},
          {"gan",
           {{"latent_dim", cfg.gan.latent_dim},
            {"generator_hidden", cfg.gan.generator_hidden},
            {"discriminator_hidden", cfg.gan.discriminator_hidden},
            {"batch_size", cfg.gan.batch_size},
            {"local_epochs", cfg.gan.local_epochs},
            {"d_steps_per_g", cfg.gan.d_steps_per_g},
            {"lr_g", cfg.gan.lr_g},
            {"lr_d", cfg.gan.lr_d}}},
          {"data",
           {{"source", cfg.data.source},
            {"modes", cfg.data.modes},
            {"per_mode", cfg.data.per_mode},
            {"radius", cfg.data.radius},
            {"sigma", cfg.data.sigma},
            {"cifar_path", cfg.data.cifar_path},
            {"max_records", cfg.data.max_records},
            {"pool_gray8", cfg.data.pool_gray8}}}};
}

}  // namespace hefed
