// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpspec/manufactured.hpp"
#include "qpspec/qoperator.hpp"
#include "qpspec/stepper.hpp"

namespace qpspec {

/// One experiment: coefficient, exact solution, projection matrix, and the
/// sweep axes. Loaded from a JSON document (see docs in README and the
/// shipped files under configs/).
///
/// JSON schema (field names match the members):
///   d, n            integers
///   projection      d x n matrix; entries are numbers or expression strings
///                   ("2*pi", "sqrt(5)", products/quotients thereof)
///   alpha           mode list: [[k-vector], re, im]
///   exact_solution  {"carrier": tag, "modes": mode list}
///                   carrier: "exp(-i*t)" or {"re": expr, "im": expr} giving
///                   sigma in exp(sigma*t)
///   N_list          even integers, ascending
///   tau_list        positive reals (strictly decreasing for time sweeps)
///   T               final time; every (N, tau) must give an integer
///                   M = round(T/tau) with |M*tau - T| <= 1e-9*T
///   solver          {"method": "iterative"|"direct", "rel_tol": r,
///                    "max_iter": m}; optional, defaults shown in SolveConfig
///   first_step      "paper_explicit" (default) | "implicit"
///   sampling        "truncate" (default) | "collocation2x" — how the initial
///                   data and source are restricted onto the lattice
///   convolution     "wrapped" (default) | "dealiased" — operator policy
///   output          optional default output path for sweep tables
struct ExperimentConfig {
  int d = 0;
  int n = 0;
  std::vector<double> projection;  // d x n, row-major
  ModeList alpha;
  ExactSolution exact;
  std::vector<int> N_list;
  std::vector<double> tau_list;
  double T = 0.0;
  SolveConfig solver;
  FirstStep first_step = FirstStep::paper_explicit;
  SamplingPolicy sampling = SamplingPolicy::truncate;
  ConvolutionPolicy convolution = ConvolutionPolicy::wrapped;
  std::string output;
};

/// Parse a JSON document (text) into a validated config.
/// Throws invalid_input with a field-level message on any violation.
ExperimentConfig parse_config(const std::string& json_text);

/// Read and parse a config file.
ExperimentConfig load_config(const std::string& path);

/// One convergence-table row.
struct ResultRow {
  int N = 0;
  double tau = 0.0;
  std::int64_t M = 0;
  double err = 0.0;
  /// Pairwise temporal order; empty for the first row of a time sweep and
  /// whenever it is undefined (an error underflowed to zero).
  std::optional<double> kappa;
  /// Wall time of the time-stepping loop only (setup excluded).
  double wall_seconds = 0.0;
  std::int64_t iters = 0;
};

/// Run one (N, tau) experiment: build lattice, operator and source, run the
/// stepper, and measure the final error. Wall time covers the stepper only.
ResultRow run_single(const ExperimentConfig& cfg, int N, double tau);

/// One row per N in N_list at fixed tau = tau_list.front(), ascending N.
/// Rows may be computed concurrently (`threads`); reported values are
/// identical for every thread count.
std::vector<ResultRow> space_sweep(const ExperimentConfig& cfg,
                                   int threads = 1);

/// One row per tau in tau_list at fixed N = N_list.front(), strictly
/// decreasing tau; kappa is filled pairwise between consecutive rows.
std::vector<ResultRow> time_sweep(const ExperimentConfig& cfg,
                                  int threads = 1);

/// CSV emission. space mode: header "N,err,wall_seconds,iters"; time mode:
/// header "tau,err,kappa,wall_seconds,iters". Scientific notation with 4
/// significant digits (e.g. 6.713e-03); kappa with 2 decimals, empty when
/// undefined.
std::string to_csv(const std::vector<ResultRow>& rows, bool space_mode);

/// Inverse of to_csv for round-trip checks; parses either header.
std::vector<ResultRow> parse_csv(const std::string& text);

/// JSON emission of the same rows (array of objects, M included).
std::string to_json(const std::vector<ResultRow>& rows);

/// Command-line entry point. Subcommands: solve, space-sweep, time-sweep,
/// selftest. Flags: --config <path>, --output <path>, --format {csv,json},
/// --threads <k>. Exit codes: 0 success, 2 configuration/usage error,
/// 3 solver/runtime failure.
int cli_main(int argc, char** argv);

}  // namespace qpspec
