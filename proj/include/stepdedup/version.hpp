// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 stepdedup contributors

#pragma once

namespace stepdedup {

inline constexpr const char* kToolName = "stepdedup";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace stepdedup
