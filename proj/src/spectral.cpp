// SPDX-License-Identifier: MIT
#include "qpspec/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "qpspec/errors.hpp"

namespace qpspec {

namespace {

/// FFTW plan creation is not thread-safe; execution of a created plan is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Rank-n complex transform of `in` (length D = N^n, row-major), writing to
/// `out`. sign is FFTW_FORWARD (-1) or FFTW_BACKWARD (+1); no normalization.
void run_fftw(const Lattice& lat, const std::vector<Complex>& in,
              std::vector<Complex>& out, int sign) {
  out.resize(in.size());
  std::vector<int> sizes(static_cast<std::size_t>(lat.dims()), lat.N());
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft(
        lat.dims(), sizes.data(),
        reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()), sign,
        FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  if (plan == nullptr) {
    throw solve_failure("fftw: failed to create a transform plan");
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
}

void check_size(const char* what, std::size_t have, VectorIndex want) {
  if (have != static_cast<std::size_t>(want)) {
    throw invalid_input(std::string(what) + ": storage has " +
                        std::to_string(have) + " entries, lattice needs " +
                        std::to_string(want));
  }
}

/// Rejects duplicate frequency indices in an analytic mode list.
void check_unique(const ModeList& modes) {
  std::map<FrequencyIndex, std::size_t> seen;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    auto [it, inserted] = seen.emplace(modes[i].k, i);
    if (!inserted) {
      std::string s = "(";
      for (std::size_t l = 0; l < modes[i].k.size(); ++l) {
        if (l) s += ",";
        s += std::to_string(modes[i].k[l]);
      }
      throw invalid_input("mode list: duplicate frequency index " + s + ")");
    }
  }
}

}  // namespace

SpectralField zero_field(const Lattice& lat) {
  return SpectralField{lat, std::vector<Complex>(
                                static_cast<std::size_t>(lat.size()))};
}

SpectralField forward_dft(const GridField& g) {
  check_size("forward_dft", g.values.size(), g.lat.size());
  SpectralField s{g.lat, {}};
  run_fftw(g.lat, g.values, s.coeffs, FFTW_FORWARD);
  const double inv_d = 1.0 / static_cast<double>(g.lat.size());
  for (auto& c : s.coeffs) c *= inv_d;
  return s;
}

GridField inverse_dft(const SpectralField& s) {
  check_size("inverse_dft", s.coeffs.size(), s.lat.size());
  GridField g{s.lat, {}};
  run_fftw(s.lat, s.coeffs, g.values, FFTW_BACKWARD);
  return g;
}

Complex evaluate_at(const SpectralField& s, const std::vector<double>& x) {
  check_size("evaluate_at", s.coeffs.size(), s.lat.size());
  if (x.size() != static_cast<std::size_t>(s.lat.projection().rows())) {
    throw invalid_input("evaluate_at: point has length " +
                        std::to_string(x.size()) + ", expected d=" +
                        std::to_string(s.lat.projection().rows()));
  }
  Complex acc{0.0, 0.0};
  const VectorIndex D = s.lat.size();
  for (VectorIndex i = 0; i < D; ++i) {
    if (s.coeffs[static_cast<std::size_t>(i)] == Complex{0.0, 0.0}) continue;
    std::vector<double> lambda = s.lat.frequency_of(s.lat.vector_to_tensor(i));
    double phase = 0.0;
    for (std::size_t r = 0; r < x.size(); ++r) phase += lambda[r] * x[r];
    acc += s.coeffs[static_cast<std::size_t>(i)] *
           Complex{std::cos(phase), std::sin(phase)};
  }
  return acc;
}

SpectralField project_modes(const ModeList& modes, const Lattice& lat,
                            SamplingPolicy policy) {
  check_unique(modes);
  SpectralField out = zero_field(lat);
  const int N = lat.N();
  if (policy == SamplingPolicy::truncate) {
    for (const Mode& m : modes) {
      if (m.k.size() != static_cast<std::size_t>(lat.dims())) {
        throw invalid_input("project_modes: mode index length " +
                            std::to_string(m.k.size()) + ", expected n=" +
                            std::to_string(lat.dims()));
      }
      if (!lat.in_box(m.k)) continue;  // T_N drops out-of-box modes
      out.coeffs[static_cast<std::size_t>(lat.tensor_to_vector(m.k))] +=
          m.amplitude;
    }
    return out;
  }
  // collocation2x: alias each mode onto the 2N-per-axis grid (fold mod 2N
  // into [-N, N)), then truncate to K_N. Coincident folds accumulate — that
  // is precisely the aliasing the oversampled sampling incurs.
  const int M2 = 2 * N;
  FrequencyIndex folded(static_cast<std::size_t>(lat.dims()));
  for (const Mode& m : modes) {
    if (m.k.size() != static_cast<std::size_t>(lat.dims())) {
      throw invalid_input("project_modes: mode index length " +
                          std::to_string(m.k.size()) + ", expected n=" +
                          std::to_string(lat.dims()));
    }
    bool keep = true;
    for (std::size_t l = 0; l < m.k.size(); ++l) {
      int r = ((m.k[l] % M2) + M2) % M2;  // [0, 2N)
      if (r >= N) r -= M2;                // [-N, N)
      if (r < -N / 2 || r >= N / 2) {
        keep = false;
        break;
      }
      folded[l] = r;
    }
    if (!keep) continue;
    out.coeffs[static_cast<std::size_t>(lat.tensor_to_vector(folded))] +=
        m.amplitude;
  }
  return out;
}

SpectralField truncate(const ModeList& modes, const Lattice& lat) {
  return project_modes(modes, lat, SamplingPolicy::truncate);
}

void axpy(SpectralField& y, Complex a, const SpectralField& x) {
  if (!(y.lat == x.lat)) throw invalid_input("axpy: lattice mismatch");
  for (std::size_t i = 0; i < y.coeffs.size(); ++i) y.coeffs[i] += a * x.coeffs[i];
}

SpectralField scaled(const SpectralField& x, Complex a) {
  SpectralField out = x;
  for (auto& c : out.coeffs) c *= a;
  return out;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  if (!(a.lat == b.lat)) throw invalid_input("field sum: lattice mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  if (!(a.lat == b.lat)) throw invalid_input("field difference: lattice mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

bool all_finite(const SpectralField& s) {
  for (const Complex& c : s.coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

}  // namespace qpspec
