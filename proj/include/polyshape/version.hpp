// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace polyshape {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polyshape
