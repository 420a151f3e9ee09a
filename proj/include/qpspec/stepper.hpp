// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qpspec/qoperator.hpp"
#include "qpspec/spectral.hpp"

namespace qpspec {

/// Uniform time grid t_m = m*tau, m = 0..M, with T = M*tau.
struct TimeGrid {
  double tau;
  std::int64_t M;
  double T;
};

/// Validating factory: tau > 0, M >= 1; T is computed as M*tau.
TimeGrid make_time_grid(double tau, std::int64_t M);

/// Linear-solver selection for the implicit steps.
struct SolveConfig {
  enum class Method { iterative, direct };
  Method method = Method::iterative;
  /// Relative residual target for the iterative method; must be in (0, 1).
  double rel_tol = 1e-13;
  /// Iteration cap; 0 means the default ceil(10*sqrt(D)).
  std::int64_t max_iter = 0;
};

/// Time-dependent source in frequency space: F(t) returns the coefficients
/// of the source's parent function on the run's lattice.
using SourceProvider = std::function<SpectralField(double)>;

/// Which first step starts the two-step recurrence.
enum class FirstStep {
  /// Explicit: u^1 = u^0 - tau*Q u^0 + tau*F(0). Default.
  paper_explicit,
  /// Implicit Euler: solve (I + tau*Q) u^1 = u^0 + tau*F(tau).
  implicit,
};

/// Per-step solver record: iteration count and achieved relative residual
/// (both zero for explicit or direct steps).
struct StepRecord {
  std::int64_t iterations = 0;
  double rel_residual = 0.0;
};

struct StepStats {
  std::vector<StepRecord> steps;
  std::int64_t total_iterations() const noexcept;
};

/// Explicit first step: u^0 - tau*(Q u^0) + tau*F(0). No solve.
SpectralField step_first(const QOperator& op, const SpectralField& u0,
                         const SourceProvider& f, double tau);

/// One BDF2 step: solve (3I + 2*tau*Q) x = 4*u_prev - u_prev2 + 2*tau*f_m.
/// The warm start, when given, seeds the iterative solver (u_prev is the
/// natural choice). Appends one StepRecord when stats is non-null.
SpectralField step_bdf2(const QOperator& op, const SpectralField& u_prev,
                        const SpectralField& u_prev2, const SpectralField& f_m,
                        double tau, const SolveConfig& cfg,
                        const SpectralField* warm_start = nullptr,
                        StepStats* stats = nullptr);

/// Solve (shift*I + scale*Q) x = rhs for a Hermitian positive-definite
/// shifted operator by conjugate gradients on apply() alone; requires a
/// conjugate-symmetric (real-valued) coefficient and shift > 0. The direct
/// method assembles the dense matrix (D <= 65536) and factorizes it.
/// Throws solve_failure on breakdown or iteration exhaustion.
SpectralField solve_hpd(const QOperator& op, double shift, double scale,
                        const SpectralField& rhs, const SolveConfig& cfg,
                        const SpectralField* warm_start = nullptr,
                        StepRecord* record = nullptr);

struct RunResult {
  SpectralField u;
  StepStats stats;
};

/// Full integration: the first step (per `first`), then M-1 BDF2 steps with
/// the source sampled at t_m = m*tau; returns u^M and per-step stats.
/// M = 1 returns exactly the first-step output. Non-finite fields abort
/// with the offending step index. Only u^(m-1) and u^(m-2) are retained.
RunResult run(const QOperator& op, const SpectralField& u0,
              const SourceProvider& f, const TimeGrid& grid,
              const SolveConfig& cfg,
              FirstStep first = FirstStep::paper_explicit);

}  // namespace qpspec
