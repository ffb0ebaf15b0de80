// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// JSON run configuration:
//
//   {"clients": 3, "rounds": 10, "seed": 42, "shared_init": false,
//    "eval_samples": 2000,
//    "backend": {"type": "paillier", "params": {"key_bits": 128}},
//    "gan": {"latent_dim": 2, "hidden": [32, 32], "batch_size": 64, ...},
//    "data": {"source": "ring", "modes": 8, ...}}
//
// Every key is optional; unknown keys are rejected so that typos surface.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hefed/federation.hpp"

namespace hefed {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

fed::RunConfig parse_run_config(const nlohmann::json& j);
fed::RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const fed::RunConfig& cfg);

fed::BackendConfig parse_backend_config(const nlohmann::json& j);
nlohmann::json to_json(const fed::BackendConfig& cfg);

}  // namespace hefed
