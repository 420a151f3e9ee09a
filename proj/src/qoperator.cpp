// SPDX-License-Identifier: MIT
#include "qpspec/qoperator.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "qpspec/errors.hpp"

namespace qpspec {

namespace {

constexpr double kAmplitudeFloor = 1e-15;

std::string index_to_string(const FrequencyIndex& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + ")";
}

/// Conjugate-symmetry check: every (k, a) has a partner (-k folded, conj a).
bool detect_real_valued(const Lattice& lat, const ModeList& modes) {
  std::map<VectorIndex, Complex> amp;
  for (const Mode& m : modes) amp[lat.tensor_to_vector(m.k)] = m.amplitude;
  for (const Mode& m : modes) {
    FrequencyIndex neg(m.k.size());
    for (std::size_t l = 0; l < m.k.size(); ++l) neg[l] = -m.k[l];
    auto it = amp.find(lat.tensor_to_vector(lat.fold(neg)));
    if (it == amp.end()) return false;
    const Complex want = std::conj(m.amplitude);
    if (std::abs(it->second - want) >
        1e-14 * std::max(1.0, std::abs(want))) {
      return false;
    }
  }
  return true;
}

}  // namespace

SparseCoefficient build_sparse_from_modes(const Lattice& lat,
                                          const ModeList& modes) {
  // Fold analytic frequencies onto the lattice; two distinct inputs landing
  // on the same residue would silently sum, so that is rejected outright.
  std::map<VectorIndex, FrequencyIndex> origin;
  std::map<VectorIndex, Complex> folded;
  for (const Mode& m : modes) {
    if (m.k.size() != static_cast<std::size_t>(lat.dims())) {
      throw invalid_input("coefficient: mode index length " +
                          std::to_string(m.k.size()) + ", expected n=" +
                          std::to_string(lat.dims()));
    }
    if (!std::isfinite(m.amplitude.real()) ||
        !std::isfinite(m.amplitude.imag())) {
      throw invalid_input("coefficient: non-finite amplitude at " +
                          index_to_string(m.k));
    }
    const FrequencyIndex k = lat.fold(m.k);
    const VectorIndex i = lat.tensor_to_vector(k);
    auto it = origin.find(i);
    if (it != origin.end()) {
      if (it->second == m.k) {
        throw invalid_input("coefficient: duplicate frequency index " +
                            index_to_string(m.k));
      }
      throw invalid_input(
          "coefficient: modes " + index_to_string(it->second) + " and " +
          index_to_string(m.k) + " alias to the same residue " +
          index_to_string(k) + " at N=" + std::to_string(lat.N()) +
          "; the lattice is too small for this coefficient");
    }
    origin.emplace(i, m.k);
    folded[i] += m.amplitude;
  }

  SparseCoefficient out{lat, {}, false};
  for (const auto& [i, a] : folded) {
    if (std::abs(a) < kAmplitudeFloor) continue;
    out.modes.push_back(Mode{lat.vector_to_tensor(i), a});
  }
  out.real_valued = detect_real_valued(lat, out.modes);
  return out;
}

SparseCoefficient build_sparse_from_samples(const GridField& g,
                                            double threshold) {
  if (threshold < 0.0 || !std::isfinite(threshold)) {
    throw invalid_input("coefficient: threshold must be finite and >= 0");
  }
  const SpectralField s = forward_dft(g);
  ModeList modes;
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    if (std::abs(s.coeffs[i]) > threshold) {
      modes.push_back(
          Mode{s.lat.vector_to_tensor(static_cast<VectorIndex>(i)),
               s.coeffs[i]});
    }
  }
  if (modes.empty()) {
    throw invalid_input(
        "coefficient: all modes filtered (threshold exceeds every DFT "
        "amplitude)");
  }
  return build_sparse_from_modes(g.lat, modes);
}

QOperator::QOperator(SparseCoefficient alpha, ConvolutionPolicy policy)
    : alpha_(std::move(alpha)), policy_(policy) {
  const Lattice& lat = alpha_.lat;
  const int N = lat.N();
  const int n = lat.dims();
  const int d = lat.projection().rows();
  const VectorIndex D = lat.size();

  // Frequency cache lambda_i = P*k_i for every flat index, via a row-major
  // odometer over the signed box coordinates.
  freq_.assign(static_cast<std::size_t>(D) * d, 0.0);
  FrequencyIndex k(static_cast<std::size_t>(n), -N / 2);
  // Flat index of the all-(-N/2) corner is not 0, so walk in flat order:
  for (VectorIndex i = 0; i < D; ++i) {
    k = lat.vector_to_tensor(i);
    const std::vector<double> lambda = lat.frequency_of(k);
    for (int r = 0; r < d; ++r) {
      freq_[static_cast<std::size_t>(i) * d + r] = lambda[r];
    }
  }

  // Per-mode source-index tables: source_[t*D + i] = flat index of k_i - m_t
  // (folded for the wrapped policy, -1 when dealiasing drops the term).
  const std::size_t g = alpha_.modes.size();
  source_.assign(g * static_cast<std::size_t>(D), VectorIndex{-1});
  FrequencyIndex diff(static_cast<std::size_t>(n), 0);
  for (VectorIndex i = 0; i < D; ++i) {
    k = lat.vector_to_tensor(i);
    for (std::size_t t = 0; t < g; ++t) {
      const FrequencyIndex& m = alpha_.modes[t].k;
      bool keep = true;
      VectorIndex j = 0;
      for (int l = 0; l < n; ++l) {
        int c = k[static_cast<std::size_t>(l)] - m[static_cast<std::size_t>(l)];
        // c lies in (-N, N); one conditional folds it into [-N/2, N/2).
        if (c < -N / 2) {
          if (policy_ == ConvolutionPolicy::dealiased) { keep = false; break; }
          c += N;
        } else if (c >= N / 2) {
          if (policy_ == ConvolutionPolicy::dealiased) { keep = false; break; }
          c -= N;
        }
        j = j * N + (c < 0 ? c + N : c);
      }
      if (keep) source_[t * static_cast<std::size_t>(D) + i] = j;
    }
  }
}

void QOperator::apply(const SpectralField& v, SpectralField& out) const {
  const Lattice& lat = alpha_.lat;
  if (!(v.lat == lat)) throw invalid_input("apply_Q: lattice mismatch");
  if (v.coeffs.size() != static_cast<std::size_t>(lat.size())) {
    throw invalid_input("apply_Q: field storage size mismatch");
  }
  const VectorIndex D = lat.size();
  const int d = lat.projection().rows();
  out.lat = lat;
  out.coeffs.assign(static_cast<std::size_t>(D), Complex{0.0, 0.0});

  for (std::size_t t = 0; t < alpha_.modes.size(); ++t) {
    const Complex a = alpha_.modes[t].amplitude;
    const VectorIndex* row = source_.data() + t * static_cast<std::size_t>(D);
    for (VectorIndex i = 0; i < D; ++i) {
      const VectorIndex j = row[i];
      if (j < 0) continue;
      const double* li = freq_.data() + static_cast<std::size_t>(i) * d;
      const double* lj = freq_.data() + static_cast<std::size_t>(j) * d;
      double w = 0.0;
      for (int r = 0; r < d; ++r) w += li[r] * lj[r];
      out.coeffs[static_cast<std::size_t>(i)] +=
          a * w * v.coeffs[static_cast<std::size_t>(j)];
    }
  }
}

SpectralField QOperator::apply(const SpectralField& v) const {
  SpectralField out = zero_field(alpha_.lat);
  apply(v, out);
  return out;
}

std::vector<Complex> assemble_dense(const QOperator& op) {
  const Lattice& lat = op.lattice();
  const VectorIndex D = lat.size();
  if (D > 65536) {
    throw invalid_input("assemble_dense: D = " + std::to_string(D) +
                        " exceeds the 65536 guard (dense assembly is a "
                        "testing facility)");
  }
  const int N = lat.N();
  const int n = lat.dims();
  const int d = lat.projection().rows();
  const bool wrap = op.policy() == ConvolutionPolicy::wrapped;

  // Sparse amplitude lookup keyed by the flat index of the (in-box) mode.
  std::map<VectorIndex, Complex> amp;
  for (const Mode& m : op.alpha().modes) {
    amp.emplace(lat.tensor_to_vector(m.k), m.amplitude);
  }

  // Direct evaluation of the definition, independent of the compressed
  // tables: Q[i][j] = A~[k_i - k_j] * (lambda_i . lambda_j).
  std::vector<Complex> q(static_cast<std::size_t>(D) * static_cast<std::size_t>(D),
                         Complex{0.0, 0.0});
  const std::vector<double>& freq = op.frequency_cache();
  std::vector<FrequencyIndex> tensors(static_cast<std::size_t>(D));
  for (VectorIndex i = 0; i < D; ++i) {
    tensors[static_cast<std::size_t>(i)] = lat.vector_to_tensor(i);
  }
  for (VectorIndex i = 0; i < D; ++i) {
    const FrequencyIndex& ki = tensors[static_cast<std::size_t>(i)];
    for (VectorIndex j = 0; j < D; ++j) {
      const FrequencyIndex& kj = tensors[static_cast<std::size_t>(j)];
      bool keep = true;
      VectorIndex flat = 0;
      for (int l = 0; l < n; ++l) {
        int c = ki[static_cast<std::size_t>(l)] - kj[static_cast<std::size_t>(l)];
        if (c < -N / 2) {
          if (!wrap) { keep = false; break; }
          c += N;
        } else if (c >= N / 2) {
          if (!wrap) { keep = false; break; }
          c -= N;
        }
        flat = flat * N + (c < 0 ? c + N : c);
      }
      if (!keep) continue;
      auto it = amp.find(flat);
      if (it == amp.end()) continue;
      const double* li = freq.data() + static_cast<std::size_t>(i) * d;
      const double* lj = freq.data() + static_cast<std::size_t>(j) * d;
      double w = 0.0;
      for (int r = 0; r < d; ++r) w += li[r] * lj[r];
      q[static_cast<std::size_t>(i) * static_cast<std::size_t>(D) +
        static_cast<std::size_t>(j)] = it->second * w;
    }
  }
  return q;
}

}  // namespace qpspec
