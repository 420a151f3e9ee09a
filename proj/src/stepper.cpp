// SPDX-License-Identifier: MIT
#include "qpspec/stepper.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "qpspec/errors.hpp"

namespace qpspec {

namespace {

double norm2(const SpectralField& s) {
  double acc = 0.0;
  for (const Complex& c : s.coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

Complex vdot(const SpectralField& a, const SpectralField& b) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
    acc += std::conj(a.coeffs[i]) * b.coeffs[i];
  }
  return acc;
}

/// out = shift*x + scale*(Q x).
void apply_shifted(const QOperator& op, double shift, double scale,
                   const SpectralField& x, SpectralField& qx,
                   SpectralField& out) {
  op.apply(x, qx);
  out.lat = x.lat;
  out.coeffs.resize(x.coeffs.size());
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
    out.coeffs[i] = shift * x.coeffs[i] + scale * qx.coeffs[i];
  }
}

SpectralField solve_direct(const QOperator& op, double shift, double scale,
                           const SpectralField& rhs, StepRecord* record) {
  const VectorIndex D = op.lattice().size();
  const std::vector<Complex> dense = assemble_dense(op);
  Eigen::MatrixXcd a(D, D);
  for (VectorIndex i = 0; i < D; ++i) {
    for (VectorIndex j = 0; j < D; ++j) {
      a(i, j) = scale * dense[static_cast<std::size_t>(i) *
                                  static_cast<std::size_t>(D) +
                              static_cast<std::size_t>(j)];
    }
    a(i, i) += shift;
  }
  Eigen::VectorXcd b(D);
  for (VectorIndex i = 0; i < D; ++i) b(i) = rhs.coeffs[static_cast<std::size_t>(i)];
  Eigen::VectorXcd x = Eigen::PartialPivLU<Eigen::MatrixXcd>(a).solve(b);
  SpectralField out = zero_field(op.lattice());
  for (VectorIndex i = 0; i < D; ++i) out.coeffs[static_cast<std::size_t>(i)] = x(i);
  if (record != nullptr) {
    const double nb = b.norm();
    record->iterations = 0;
    record->rel_residual = nb > 0.0 ? (a * x - b).norm() / nb : 0.0;
  }
  return out;
}

}  // namespace

TimeGrid make_time_grid(double tau, std::int64_t M) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw invalid_input("time grid: tau must be finite and > 0");
  }
  if (M < 1) {
    throw invalid_input("time grid: M must be >= 1, got " + std::to_string(M));
  }
  return TimeGrid{tau, M, static_cast<double>(M) * tau};
}

std::int64_t StepStats::total_iterations() const noexcept {
  std::int64_t acc = 0;
  for (const StepRecord& r : steps) acc += r.iterations;
  return acc;
}

SpectralField step_first(const QOperator& op, const SpectralField& u0,
                         const SourceProvider& f, double tau) {
  if (!(tau > 0.0)) throw invalid_input("step_first: tau must be > 0");
  SpectralField out = u0;
  axpy(out, Complex{-tau, 0.0}, op.apply(u0));
  axpy(out, Complex{tau, 0.0}, f(0.0));
  return out;
}

SpectralField solve_hpd(const QOperator& op, double shift, double scale,
                        const SpectralField& rhs, const SolveConfig& cfg,
                        const SpectralField* warm_start, StepRecord* record) {
  if (!(shift > 0.0)) throw invalid_input("solve_hpd: shift must be > 0");
  if (!(rhs.lat == op.lattice())) {
    throw invalid_input("solve_hpd: lattice mismatch");
  }
  if (cfg.method == SolveConfig::Method::direct) {
    return solve_direct(op, shift, scale, rhs, record);
  }
  if (!(cfg.rel_tol > 0.0) || !(cfg.rel_tol < 1.0)) {
    throw invalid_input("solve_hpd: rel_tol must lie in (0, 1)");
  }
  if (!op.alpha().real_valued && !op.alpha().modes.empty()) {
    throw invalid_input(
        "solve_hpd: conjugate gradients requires a conjugate-symmetric "
        "(real-valued) coefficient");
  }

  const VectorIndex D = op.lattice().size();
  const std::int64_t max_iter =
      cfg.max_iter > 0
          ? cfg.max_iter
          : static_cast<std::int64_t>(
                std::ceil(10.0 * std::sqrt(static_cast<double>(D))));

  const double nb = norm2(rhs);
  SpectralField x = warm_start != nullptr ? *warm_start : zero_field(op.lattice());
  if (warm_start != nullptr && !(x.lat == op.lattice())) {
    throw invalid_input("solve_hpd: warm start lattice mismatch");
  }
  if (nb == 0.0) {
    if (record != nullptr) *record = StepRecord{0, 0.0};
    return zero_field(op.lattice());
  }

  SpectralField qx = zero_field(op.lattice());
  SpectralField ax = zero_field(op.lattice());
  apply_shifted(op, shift, scale, x, qx, ax);
  SpectralField r = rhs - ax;
  SpectralField p = r;
  double rs = 0.0;
  for (const Complex& c : r.coeffs) rs += std::norm(c);

  const double target = cfg.rel_tol * nb;
  std::int64_t it = 0;
  std::vector<double> history;
  while (std::sqrt(rs) > target && it < max_iter) {
    apply_shifted(op, shift, scale, p, qx, ax);  // ax = A p
    const double p_ap = vdot(p, ax).real();
    if (!(p_ap > 0.0) || !std::isfinite(p_ap)) {
      throw solve_failure(
          "solve_hpd: conjugate-gradient breakdown (p^H A p = " +
          std::to_string(p_ap) + " at iteration " + std::to_string(it) + ")");
    }
    const double alpha = rs / p_ap;
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
      x.coeffs[i] += alpha * p.coeffs[i];
      r.coeffs[i] -= alpha * ax.coeffs[i];
    }
    double rs_next = 0.0;
    for (const Complex& c : r.coeffs) rs_next += std::norm(c);
    const double beta = rs_next / rs;
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
      p.coeffs[i] = r.coeffs[i] + beta * p.coeffs[i];
    }
    rs = rs_next;
    ++it;
    history.push_back(std::sqrt(rs) / nb);
  }
  const double achieved = std::sqrt(rs) / nb;
  if (achieved > cfg.rel_tol) {
    std::string tail;
    const std::size_t keep = std::min<std::size_t>(history.size(), 5);
    for (std::size_t i = history.size() - keep; i < history.size(); ++i) {
      tail += (tail.empty() ? "" : ", ") + std::to_string(history[i]);
    }
    throw solve_failure("solve_hpd: no convergence within " +
                        std::to_string(max_iter) +
                        " iterations (relative residual " +
                        std::to_string(achieved) + "; history tail: " + tail +
                        ")");
  }
  if (record != nullptr) *record = StepRecord{it, achieved};
  return x;
}

SpectralField step_bdf2(const QOperator& op, const SpectralField& u_prev,
                        const SpectralField& u_prev2, const SpectralField& f_m,
                        double tau, const SolveConfig& cfg,
                        const SpectralField* warm_start, StepStats* stats) {
  if (!(tau > 0.0)) throw invalid_input("step_bdf2: tau must be > 0");
  if (!(u_prev.lat == op.lattice()) || !(u_prev2.lat == op.lattice()) ||
      !(f_m.lat == op.lattice())) {
    throw invalid_input("step_bdf2: lattice mismatch");
  }
  SpectralField rhs = scaled(u_prev, Complex{4.0, 0.0});
  axpy(rhs, Complex{-1.0, 0.0}, u_prev2);
  axpy(rhs, Complex{2.0 * tau, 0.0}, f_m);
  if (!all_finite(rhs)) {
    throw solve_failure("step_bdf2: non-finite right-hand side");
  }
  StepRecord record;
  SpectralField x = solve_hpd(op, 3.0, 2.0 * tau, rhs, cfg, warm_start, &record);
  if (stats != nullptr) stats->steps.push_back(record);
  return x;
}

RunResult run(const QOperator& op, const SpectralField& u0,
              const SourceProvider& f, const TimeGrid& grid,
              const SolveConfig& cfg, FirstStep first) {
  if (!(u0.lat == op.lattice())) {
    throw invalid_input("run: initial data lattice mismatch");
  }
  if (grid.M < 1) throw invalid_input("run: M must be >= 1");

  StepStats stats;
  SpectralField u_prev2 = u0;
  SpectralField u_prev = [&] {
    if (first == FirstStep::paper_explicit) {
      SpectralField u1 = step_first(op, u0, f, grid.tau);
      stats.steps.push_back(StepRecord{0, 0.0});
      return u1;
    }
    SpectralField rhs = u0;
    axpy(rhs, Complex{grid.tau, 0.0}, f(grid.tau));
    StepRecord record;
    SpectralField u1 = solve_hpd(op, 1.0, grid.tau, rhs, cfg, &u0, &record);
    stats.steps.push_back(record);
    return u1;
  }();
  if (!all_finite(u_prev)) {
    throw solve_failure("run: non-finite solution after step 1");
  }
  for (std::int64_t m = 2; m <= grid.M; ++m) {
    const double t_m = static_cast<double>(m) * grid.tau;
    SpectralField u_next =
        step_bdf2(op, u_prev, u_prev2, f(t_m), grid.tau, cfg, &u_prev, &stats);
    if (!all_finite(u_next)) {
      throw solve_failure("run: non-finite solution after step " +
                          std::to_string(m));
    }
    u_prev2 = std::move(u_prev);
    u_prev = std::move(u_next);
  }
  return RunResult{std::move(u_prev), std::move(stats)};
}

}  // namespace qpspec
