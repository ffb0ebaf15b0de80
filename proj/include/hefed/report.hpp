// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hefed/federation.hpp"

namespace hefed {

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Everything in the report that is a pure function of config and seed.
nlohmann::json report_to_json(const fed::RunReport& report);

/// Writes report.json, metrics.csv (one row per client per round), timing.json
/// (wall-clock figures, the only non-deterministic output) and manifest.json
/// (config hash, seed, code version, digests of the deterministic files).
void write_run_outputs(const fed::RunReport& report, const std::filesystem::path& dir);

/// Version string baked in at build time.
std::string code_version();

}  // namespace hefed
