// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace polyshape {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelftestOptions {
  int threads = 1;
  unsigned seed = 20260810u;
  // invoked after each criterion finishes, in order
  std::function<void(const CriterionResult&)> on_result;
};

/// Runs the full verification suite (one entry per acceptance criterion)
/// and returns the results in criterion order.
std::vector<CriterionResult> run_selftest(const SelftestOptions& opts = {});

}  // namespace polyshape
