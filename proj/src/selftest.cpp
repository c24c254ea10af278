// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0

#include "polyshape/selftest.hpp"

namespace polyshape {

std::vector<CriterionResult> run_selftest(const SelftestOptions& opts) {
  (void)opts;
  return {};
}

}  // namespace polyshape
