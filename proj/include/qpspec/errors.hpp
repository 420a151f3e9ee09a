// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>

namespace qpspec {

/// Raised when an input violates a documented precondition: malformed
/// configuration, duplicate or out-of-range frequency indices, mismatched
/// lattices, oversized dense assemblies, and similar caller errors.
class invalid_input : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical procedure fails at runtime: iterative-solver
/// non-convergence or breakdown, non-finite values detected mid-run.
class solve_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qpspec
