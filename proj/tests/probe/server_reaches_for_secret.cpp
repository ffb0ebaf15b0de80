// Copyright 2026 The hefed Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled like the server library. It must fail: a server translation unit
// that tries to see a secret key is rejected by the preprocessor.

#include "hefed/paillier_secret.hpp"
#include "hefed/server.hpp"

namespace {
[[maybe_unused]] hefed::paillier::SecretKey stolen;
}
