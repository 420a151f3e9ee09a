// SPDX-License-Identifier: MIT
#include "qpspec/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "qpspec/errors.hpp"
#include "qpspec/expr.hpp"
#include "qpspec/metrics.hpp"

namespace qpspec {

namespace {

using nlohmann::json;

[[noreturn]] void fail_field(const std::string& field, const std::string& what) {
  throw invalid_input("config field '" + field + "': " + what);
}

const json& at(const json& obj, const std::string& key,
               const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) fail_field(context + key, "missing");
  return *it;
}

double number_or_expression(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return eval_expression(j.get<std::string>());
    } catch (const invalid_input& e) {
      fail_field(field, e.what());
    }
  }
  fail_field(field, "expected a number or an expression string");
}

int require_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail_field(field, "expected an integer");
  return j.get<int>();
}

/// Mode list entries are [[k_1, ..., k_n], re, im].
ModeList parse_mode_list(const json& arr, int n, const std::string& field) {
  if (!arr.is_array()) fail_field(field, "expected an array of modes");
  ModeList out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string entry = field + "[" + std::to_string(i) + "]";
    const json& e = arr[i];
    if (!e.is_array() || e.size() != 3) {
      fail_field(entry, "expected [[k-vector], re, im]");
    }
    const json& kj = e[0];
    if (!kj.is_array() || kj.size() != static_cast<std::size_t>(n)) {
      fail_field(entry, "frequency index must have length n=" +
                            std::to_string(n));
    }
    FrequencyIndex k(kj.size());
    for (std::size_t l = 0; l < kj.size(); ++l) {
      k[l] = require_int(kj[l], entry + ".k[" + std::to_string(l) + "]");
    }
    const double re = number_or_expression(e[1], entry + ".re");
    const double im = number_or_expression(e[2], entry + ".im");
    out.push_back(Mode{std::move(k), Complex{re, im}});
  }
  return out;
}

Complex parse_carrier(const json& j, const std::string& field) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "exp(-i*t)") return Complex{0.0, -1.0};
    fail_field(field, "unknown carrier tag \"" + s +
                          "\"; use \"exp(-i*t)\" or {\"re\":..., \"im\":...}");
  }
  if (j.is_object()) {
    const double re = number_or_expression(at(j, "re", field + "."), field + ".re");
    const double im = number_or_expression(at(j, "im", field + "."), field + ".im");
    return Complex{re, im};
  }
  fail_field(field, "expected a tag string or {re, im}");
}

std::int64_t steps_for(double T, double tau, int N) {
  const double ratio = T / tau;
  const std::int64_t M = static_cast<std::int64_t>(std::llround(ratio));
  if (M < 1 || std::abs(static_cast<double>(M) * tau - T) > 1e-9 * T) {
    throw invalid_input(
        "config: T/tau is not an integer step count for (N=" +
        std::to_string(N) + ", tau=" + std::to_string(tau) +
        "): M*tau must match T to 1e-9 relative");
  }
  return M;
}

/// Run `body(i)` for i in [0, count), on up to `threads` workers. Each row's
/// arithmetic is sequential, so results do not depend on the thread count.
template <typename F>
void parallel_rows(std::size_t count, int threads, F&& body) {
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string fmt_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fmt_kappa(const std::optional<double>& kappa) {
  if (!kappa.has_value()) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", *kappa);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

int run_selftest();

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw invalid_input(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw invalid_input("config: top level must be an object");

  static const std::set<std::string> known = {
      "d",      "n",          "projection", "alpha",      "exact_solution",
      "N_list", "tau_list",   "T",          "solver",     "first_step",
      "sampling", "convolution", "output"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (!known.contains(key)) fail_field(key, "unknown field");
  }

  ExperimentConfig cfg;
  cfg.d = require_int(at(doc, "d", ""), "d");
  cfg.n = require_int(at(doc, "n", ""), "n");
  if (cfg.d < 1) fail_field("d", "must be >= 1");
  if (cfg.n < 1) fail_field("n", "must be >= 1");

  const json& proj = at(doc, "projection", "");
  if (!proj.is_array() || proj.size() != static_cast<std::size_t>(cfg.d)) {
    fail_field("projection", "expected d=" + std::to_string(cfg.d) + " rows");
  }
  for (std::size_t r = 0; r < proj.size(); ++r) {
    const json& row = proj[r];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(cfg.n)) {
      fail_field("projection[" + std::to_string(r) + "]",
                 "expected n=" + std::to_string(cfg.n) + " entries");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      cfg.projection.push_back(number_or_expression(
          row[c], "projection[" + std::to_string(r) + "][" +
                      std::to_string(c) + "]"));
    }
  }

  cfg.alpha = parse_mode_list(at(doc, "alpha", ""), cfg.n, "alpha");

  const json& exact = at(doc, "exact_solution", "");
  if (!exact.is_object()) fail_field("exact_solution", "expected an object");
  for (const auto& [key, value] : exact.items()) {
    (void)value;
    if (key != "carrier" && key != "modes") {
      fail_field("exact_solution." + key, "unknown field");
    }
  }
  cfg.exact.modes = parse_mode_list(at(exact, "modes", "exact_solution."),
                                    cfg.n, "exact_solution.modes");
  if (exact.contains("carrier")) {
    cfg.exact.sigma = parse_carrier(exact["carrier"], "exact_solution.carrier");
  }

  const json& nl = at(doc, "N_list", "");
  if (!nl.is_array() || nl.empty()) fail_field("N_list", "expected a non-empty array");
  for (std::size_t i = 0; i < nl.size(); ++i) {
    const int N = require_int(nl[i], "N_list[" + std::to_string(i) + "]");
    if (N < 2 || N % 2 != 0) {
      fail_field("N_list[" + std::to_string(i) + "]", "N must be even and >= 2");
    }
    if (!cfg.N_list.empty() && N <= cfg.N_list.back()) {
      fail_field("N_list", "must be strictly ascending");
    }
    cfg.N_list.push_back(N);
  }

  const json& tl = at(doc, "tau_list", "");
  if (!tl.is_array() || tl.empty()) fail_field("tau_list", "expected a non-empty array");
  for (std::size_t i = 0; i < tl.size(); ++i) {
    const double tau =
        number_or_expression(tl[i], "tau_list[" + std::to_string(i) + "]");
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      fail_field("tau_list[" + std::to_string(i) + "]", "must be finite and > 0");
    }
    cfg.tau_list.push_back(tau);
  }

  cfg.T = number_or_expression(at(doc, "T", ""), "T");
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) fail_field("T", "must be finite and > 0");

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (!s.is_object()) fail_field("solver", "expected an object");
    for (const auto& [key, value] : s.items()) {
      (void)value;
      if (key != "method" && key != "rel_tol" && key != "max_iter") {
        fail_field("solver." + key, "unknown field");
      }
    }
    if (s.contains("method")) {
      const std::string m = s["method"].is_string()
                                ? s["method"].get<std::string>()
                                : std::string();
      if (m == "iterative") {
        cfg.solver.method = SolveConfig::Method::iterative;
      } else if (m == "direct") {
        cfg.solver.method = SolveConfig::Method::direct;
      } else {
        fail_field("solver.method", "expected \"iterative\" or \"direct\"");
      }
    }
    if (s.contains("rel_tol")) {
      cfg.solver.rel_tol = number_or_expression(s["rel_tol"], "solver.rel_tol");
      if (!(cfg.solver.rel_tol > 0.0) || !(cfg.solver.rel_tol < 1.0)) {
        fail_field("solver.rel_tol", "must lie in (0, 1)");
      }
    }
    if (s.contains("max_iter")) {
      const int mi = require_int(s["max_iter"], "solver.max_iter");
      if (mi < 0) fail_field("solver.max_iter", "must be >= 0 (0 = default)");
      cfg.solver.max_iter = mi;
    }
  }

  if (doc.contains("first_step")) {
    const std::string f = doc["first_step"].is_string()
                              ? doc["first_step"].get<std::string>()
                              : std::string();
    if (f == "paper_explicit") {
      cfg.first_step = FirstStep::paper_explicit;
    } else if (f == "implicit") {
      cfg.first_step = FirstStep::implicit;
    } else {
      fail_field("first_step", "expected \"paper_explicit\" or \"implicit\"");
    }
  }

  if (doc.contains("sampling")) {
    const std::string s = doc["sampling"].is_string()
                              ? doc["sampling"].get<std::string>()
                              : std::string();
    if (s == "truncate") {
      cfg.sampling = SamplingPolicy::truncate;
    } else if (s == "collocation2x") {
      cfg.sampling = SamplingPolicy::collocation2x;
    } else {
      fail_field("sampling", "expected \"truncate\" or \"collocation2x\"");
    }
  }

  if (doc.contains("convolution")) {
    const std::string c = doc["convolution"].is_string()
                              ? doc["convolution"].get<std::string>()
                              : std::string();
    if (c == "wrapped") {
      cfg.convolution = ConvolutionPolicy::wrapped;
    } else if (c == "dealiased") {
      cfg.convolution = ConvolutionPolicy::dealiased;
    } else {
      fail_field("convolution", "expected \"wrapped\" or \"dealiased\"");
    }
  }

  if (doc.contains("output")) {
    if (!doc["output"].is_string()) fail_field("output", "expected a string path");
    cfg.output = doc["output"].get<std::string>();
  }

  // Cross-field checks: the projection must be a valid d x n embedding and
  // every (N, tau) combination must give an integral step count.
  try {
    ProjectionMatrix probe(cfg.d, cfg.n, cfg.projection);
  } catch (const invalid_input& e) {
    fail_field("projection", e.what());
  }
  for (const int N : cfg.N_list) {
    for (const double tau : cfg.tau_list) steps_for(cfg.T, tau, N);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("config file not readable: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const invalid_input& e) {
    throw invalid_input(std::string(e.what()) + " (in " + path + ")");
  }
}

ResultRow run_single(const ExperimentConfig& cfg, int N, double tau) {
  const std::int64_t M = steps_for(cfg.T, tau, N);
  const Lattice lat(N, cfg.n, ProjectionMatrix(cfg.d, cfg.n, cfg.projection));
  const SparseCoefficient alpha = build_sparse_from_modes(lat, cfg.alpha);
  const QOperator op(alpha, cfg.convolution);
  const SpectralField u0 = project_modes(cfg.exact.modes, lat, cfg.sampling);
  const SourceProvider f =
      source_provider(cfg.exact, cfg.alpha, lat, cfg.sampling);
  const TimeGrid grid = make_time_grid(tau, M);

  const auto start = std::chrono::steady_clock::now();
  const RunResult result = run(op, u0, f, grid, cfg.solver, cfg.first_step);
  const auto stop = std::chrono::steady_clock::now();

  ResultRow row;
  row.N = N;
  row.tau = tau;
  row.M = M;
  row.err = final_error(result.u, cfg.exact, grid.T);
  row.wall_seconds = std::chrono::duration<double>(stop - start).count();
  row.iters = result.stats.total_iterations();
  return row;
}

std::vector<ResultRow> space_sweep(const ExperimentConfig& cfg, int threads) {
  if (cfg.N_list.empty() || cfg.tau_list.empty()) {
    throw invalid_input("space_sweep: N_list and tau_list must be non-empty");
  }
  const double tau = cfg.tau_list.front();
  std::vector<ResultRow> rows(cfg.N_list.size());
  parallel_rows(cfg.N_list.size(), threads, [&](std::size_t i) {
    rows[i] = run_single(cfg, cfg.N_list[i], tau);
  });
  return rows;
}

std::vector<ResultRow> time_sweep(const ExperimentConfig& cfg, int threads) {
  if (cfg.N_list.empty() || cfg.tau_list.empty()) {
    throw invalid_input("time_sweep: N_list and tau_list must be non-empty");
  }
  for (std::size_t i = 1; i < cfg.tau_list.size(); ++i) {
    if (!(cfg.tau_list[i] < cfg.tau_list[i - 1])) {
      throw invalid_input("time_sweep: tau_list must be strictly decreasing");
    }
  }
  const int N = cfg.N_list.front();
  std::vector<ResultRow> rows(cfg.tau_list.size());
  parallel_rows(cfg.tau_list.size(), threads, [&](std::size_t i) {
    rows[i] = run_single(cfg, N, cfg.tau_list[i]);
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i - 1].err > 0.0 && rows[i].err > 0.0) {
      rows[i].kappa = order_kappa(rows[i - 1].err, rows[i - 1].tau,
                                  rows[i].err, rows[i].tau);
    } else {
      rows[i].kappa.reset();  // order undefined: an error underflowed to zero
    }
  }
  return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows, bool space_mode) {
  std::string out = space_mode ? "N,err,wall_seconds,iters\n"
                               : "tau,err,kappa,wall_seconds,iters\n";
  for (const ResultRow& r : rows) {
    if (space_mode) {
      out += std::to_string(r.N) + "," + fmt_sci(r.err) + "," +
             fmt_sci(r.wall_seconds) + "," + std::to_string(r.iters) + "\n";
    } else {
      out += fmt_sci(r.tau) + "," + fmt_sci(r.err) + "," + fmt_kappa(r.kappa) +
             "," + fmt_sci(r.wall_seconds) + "," + std::to_string(r.iters) +
             "\n";
    }
  }
  return out;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw invalid_input("csv: empty document");
  bool space_mode;
  if (line == "N,err,wall_seconds,iters") {
    space_mode = true;
  } else if (line == "tau,err,kappa,wall_seconds,iters") {
    space_mode = false;
  } else {
    throw invalid_input("csv: unrecognized header \"" + line + "\"");
  }
  std::vector<ResultRow> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    const std::size_t want = space_mode ? 4 : 5;
    if (cells.size() != want) {
      throw invalid_input("csv: expected " + std::to_string(want) +
                          " cells, got " + std::to_string(cells.size()));
    }
    ResultRow r;
    std::size_t c = 0;
    if (space_mode) {
      r.N = std::stoi(cells[c++]);
    } else {
      r.tau = std::stod(cells[c++]);
    }
    r.err = std::stod(cells[c++]);
    if (!space_mode) {
      if (!cells[c].empty()) r.kappa = std::stod(cells[c]);
      ++c;
    }
    r.wall_seconds = std::stod(cells[c++]);
    r.iters = std::stoll(cells[c++]);
    rows.push_back(r);
  }
  return rows;
}

std::string to_json(const std::vector<ResultRow>& rows) {
  json arr = json::array();
  for (const ResultRow& r : rows) {
    json o;
    o["N"] = r.N;
    o["tau"] = r.tau;
    o["M"] = r.M;
    o["err"] = r.err;
    if (r.kappa.has_value()) {
      o["kappa"] = *r.kappa;
    } else {
      o["kappa"] = nullptr;
    }
    o["wall_seconds"] = r.wall_seconds;
    o["iters"] = r.iters;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

namespace {

/// Quick built-in checks behind `selftest`: index bijection, discrete
/// orthogonality, Parseval, compressed-vs-dense agreement, temporal order on
/// the analytic decay model. Returns a process exit code.
int run_selftest() {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "ok: " : "FAIL: ") << name << "\n";
    if (!ok) ++failures;
  };

  // Index maps are inverse bijections.
  {
    bool ok = true;
    for (int n = 1; n <= 2 && ok; ++n) {
      for (int N : {2, 4, 8}) {
        std::vector<double> entries(static_cast<std::size_t>(n), 0.0);
        entries[0] = 1.0;
        Lattice lat(N, n, ProjectionMatrix(1, n, entries));
        for (VectorIndex i = 0; i < lat.size(); ++i) {
          if (lat.tensor_to_vector(lat.vector_to_tensor(i)) != i) {
            ok = false;
            break;
          }
        }
      }
    }
    report("frequency index maps are inverse bijections", ok);
  }

  // Discrete orthogonality on N=4, n=2.
  {
    Lattice lat(4, 2, ProjectionMatrix(1, 2, {1.0, 2.0}));
    const VectorIndex D = lat.size();
    bool ok = true;
    for (VectorIndex a = 0; a < D && ok; ++a) {
      SpectralField s = zero_field(lat);
      s.coeffs[static_cast<std::size_t>(a)] = 1.0;
      const GridField g = inverse_dft(s);
      const SpectralField back = forward_dft(g);
      for (VectorIndex b = 0; b < D; ++b) {
        const Complex want = a == b ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
        if (std::abs(back.coeffs[static_cast<std::size_t>(b)] - want) > 1e-13) {
          ok = false;
          break;
        }
      }
    }
    report("discrete orthogonality (N=4, n=2)", ok);
  }

  // Parseval on random fields.
  {
    Lattice lat(8, 2, ProjectionMatrix(2, 2, {1.0, 0.5, 0.0, 1.0}));
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 10 && ok; ++trial) {
      SpectralField s = zero_field(lat);
      for (Complex& c : s.coeffs) c = Complex{dist(rng), dist(rng)};
      const GridField g = inverse_dft(s);
      double grid_ms = 0.0;
      for (const Complex& v : g.values) grid_ms += std::norm(v);
      grid_ms /= static_cast<double>(lat.size());
      const double coeff = l2qp_norm(s);
      ok = std::abs(std::sqrt(grid_ms) - coeff) <= 1e-12 * std::max(1.0, coeff);
    }
    report("discrete Parseval identity", ok);
  }

  // Compressed apply equals the dense assembly.
  {
    bool ok = true;
    for (int n = 1; n <= 2 && ok; ++n) {
      std::vector<double> entries(static_cast<std::size_t>(n), 1.0);
      if (n == 2) entries[1] = std::sqrt(5.0);
      Lattice lat(4, n, ProjectionMatrix(1, n, entries));
      ModeList am;
      FrequencyIndex zero(static_cast<std::size_t>(n), 0);
      am.push_back(Mode{zero, Complex{6.0, 0.0}});
      for (int l = 0; l < n; ++l) {
        FrequencyIndex e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(l)] = 1;
        am.push_back(Mode{e, Complex{0.5, 0.0}});
        e[static_cast<std::size_t>(l)] = -1;
        am.push_back(Mode{e, Complex{0.5, 0.0}});
      }
      const QOperator op(build_sparse_from_modes(lat, am));
      const std::vector<Complex> dense = assemble_dense(op);
      std::mt19937 rng(99 + n);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      SpectralField v = zero_field(lat);
      for (Complex& c : v.coeffs) c = Complex{dist(rng), dist(rng)};
      const SpectralField fast = op.apply(v);
      const VectorIndex D = lat.size();
      double diff = 0.0, scale = 0.0;
      for (VectorIndex i = 0; i < D; ++i) {
        Complex acc{0.0, 0.0};
        for (VectorIndex j = 0; j < D; ++j) {
          acc += dense[static_cast<std::size_t>(i) * static_cast<std::size_t>(D) +
                       static_cast<std::size_t>(j)] *
                 v.coeffs[static_cast<std::size_t>(j)];
        }
        diff += std::norm(fast.coeffs[static_cast<std::size_t>(i)] - acc);
        scale += std::norm(acc);
      }
      ok = std::sqrt(diff) <= 1e-12 * std::max(1.0, std::sqrt(scale));
    }
    report("compressed matvec matches dense assembly", ok);
  }

  // Temporal order on the analytic decay model.
  {
    Lattice lat(4, 1, ProjectionMatrix(1, 1, {1.0}));
    ModeList am{Mode{{0}, Complex{2.0, 0.0}}};
    const QOperator op(build_sparse_from_modes(lat, am));
    SpectralField u0 = zero_field(lat);
    u0.coeffs[static_cast<std::size_t>(lat.tensor_to_vector({1}))] = 1.0;
    const SourceProvider f = [&lat](double) { return zero_field(lat); };
    const double T = 1.0;
    const double exact = std::exp(-2.0 * T);
    std::vector<double> errs;
    for (std::int64_t M : {64, 128, 256}) {
      const RunResult r =
          run(op, u0, f, make_time_grid(T / static_cast<double>(M), M), {});
      const Complex got =
          r.u.coeffs[static_cast<std::size_t>(lat.tensor_to_vector({1}))];
      errs.push_back(std::abs(got - exact));
    }
    bool ok = true;
    for (std::size_t i = 1; i < errs.size(); ++i) {
      const double ratio = errs[i - 1] / errs[i];
      if (!(ratio > 3.6 && ratio < 4.4)) ok = false;
    }
    report("second-order decay on the diagonal model", ok);
  }

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 3;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{
      "Spectral solver for parabolic problems with quasiperiodic "
      "coefficients (projection method + BDF2)"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::string format = "csv";
  int threads = 1;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config (JSON)")
        ->required();
    cmd->add_option("--output", output_path,
                    "Output path (overrides the config's `output`)");
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", threads, "Worker threads for sweep rows")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "Run a single experiment (first N, first tau)");
  add_common(solve);
  CLI::App* space = app.add_subcommand(
      "space-sweep", "One run per N in N_list at fixed tau");
  add_common(space);
  CLI::App* time = app.add_subcommand(
      "time-sweep", "One run per tau in tau_list at fixed N");
  add_common(time);
  app.add_subcommand("selftest", "Run built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the parse error
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("selftest")) return run_selftest();

    const ExperimentConfig cfg = load_config(config_path);
    std::vector<ResultRow> rows;
    bool space_mode = true;
    if (app.got_subcommand(solve)) {
      rows.push_back(
          run_single(cfg, cfg.N_list.front(), cfg.tau_list.front()));
      // Single-run output keeps both sweep axes visible.
      std::string text;
      if (format == "json") {
        text = to_json(rows);
      } else {
        const ResultRow& r = rows.front();
        text = "N,tau,M,err,wall_seconds,iters\n" + std::to_string(r.N) + "," +
               fmt_sci(r.tau) + "," + std::to_string(r.M) + "," +
               fmt_sci(r.err) + "," + fmt_sci(r.wall_seconds) + "," +
               std::to_string(r.iters) + "\n";
      }
      const std::string dest = !output_path.empty() ? output_path : cfg.output;
      if (dest.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(dest);
        if (!out) throw solve_failure("cannot open output file: " + dest);
        out << text;
      }
      return 0;
    }
    if (app.got_subcommand(space)) {
      rows = space_sweep(cfg, threads);
      space_mode = true;
    } else if (app.got_subcommand(time)) {
      rows = time_sweep(cfg, threads);
      space_mode = false;
    }
    const std::string text =
        format == "json" ? to_json(rows) : to_csv(rows, space_mode);
    const std::string dest = !output_path.empty() ? output_path : cfg.output;
    if (dest.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(dest);
      if (!out) throw solve_failure("cannot open output file: " + dest);
      out << text;
    }
    return 0;
  } catch (const invalid_input& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace qpspec
