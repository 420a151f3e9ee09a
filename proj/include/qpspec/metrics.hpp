// SPDX-License-Identifier: MIT
#pragma once

#include "qpspec/manufactured.hpp"
#include "qpspec/spectral.hpp"

namespace qpspec {

/// Quasiperiodic L2 norm via Parseval: sqrt(sum_k |coeffs[k]|^2).
double l2qp_norm(const SpectralField& s);

/// Final-time error Err = || u_num - T_N(u_exact(t)) ||: the coefficient-side
/// l2 distance over the lattice's modes. Exact-solution modes outside K_N^n
/// do not contribute (the measurement matches the solver's resolved space).
double final_error(const SpectralField& u_num, const ExactSolution& sol,
                   double t);

/// Temporal convergence order between two runs:
///   kappa = ln(err1/err2) / ln(tau1/tau2).
/// Requires err1, err2 > 0 (throws invalid_input on zero/negative error —
/// the order is undefined there) and tau1 != tau2.
double order_kappa(double err1, double tau1, double err2, double tau2);

}  // namespace qpspec
