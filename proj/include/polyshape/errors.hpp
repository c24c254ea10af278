// Copyright (c) 2026 the polyshape authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace polyshape {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched orders, base points, sizes or index ranges.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Jacobian of a map is (numerically) singular at the evaluation point.
class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// A domain map failed the bi-Lipschitz admissibility check.
class NotBiLipschitz : public Error {
 public:
  using Error::Error;
};

/// The assembled leading form is not positive definite (Cholesky failed).
class NotCoercive : public Error {
 public:
  using Error::Error;
};

/// Invalid user-facing configuration (CLI flags, config files, presets).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Runtime numerical failure that is not a configuration mistake.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace polyshape
