// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace nnmig {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nnmig
