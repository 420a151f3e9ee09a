// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <vector>

#include "qpspec/lattice.hpp"
#include "qpspec/spectral.hpp"

namespace qpspec {

/// Sparse Fourier representation of the diffusion coefficient's parent
/// function: g modes (k, a) with k in K_N^n, unique, |a| > 0.
///
/// real_valued is true when the mode set is conjugate-symmetric — for every
/// (k, a) the mode (-k folded into K_N^n, conj(a)) is present — which makes
/// the operator Hermitian.
struct SparseCoefficient {
  Lattice lat;
  ModeList modes;
  bool real_valued = false;

  std::size_t g() const noexcept { return modes.size(); }
};

/// Build from an analytic mode list. Out-of-box frequencies are folded into
/// K_N^n (they alias on the grid); if two distinct input frequencies fold to
/// the same residue the construction fails with a diagnostic, because silent
/// aliasing of the coefficient itself would corrupt downstream runs
/// undetectably. Entries with |a| < 1e-15 are dropped. Duplicate input k is
/// an error.
SparseCoefficient build_sparse_from_modes(const Lattice& lat,
                                          const ModeList& modes);

/// Build from grid samples: forward_dft, then keep modes with
/// |amplitude| > threshold. Throws invalid_input if nothing survives.
SparseCoefficient build_sparse_from_samples(const GridField& g,
                                            double threshold);

/// How the coefficient convolution treats products leaving the box.
enum class ConvolutionPolicy {
  /// Index the coefficient at (k_out - k_in) mod N: the convolution wraps,
  /// matching the multi-level block-circulant structure B = sum_k A_k
  /// Z^(k_1) x ... x Z^(k_n). Default.
  wrapped,
  /// Drop contributions whose integer difference k_out - m leaves K_N^n
  /// (equivalent to a zero-padded, dealiased spectral product).
  dealiased,
};

/// The discrete elliptic operator Q = B o W with W_ij = lambda_i . lambda_j:
/// in frequency space,
///   (Q v)[i] = sum_(m, a) a * (lambda_i . lambda_j(i,m)) * v[j(i,m)],
/// where j(i, m) indexes k_i - m per the convolution policy. Immutable after
/// construction; apply() is O(g*D) and forms no D x D matrix.
///
/// Construction precomputes the frequency cache lambda_i for every flat
/// index (O(D*d) memory) and the per-mode source-index tables (O(g*D)),
/// trading memory to keep the matvec inner loop free of index arithmetic.
class QOperator {
 public:
  QOperator(SparseCoefficient alpha,
            ConvolutionPolicy policy = ConvolutionPolicy::wrapped);

  const Lattice& lattice() const noexcept { return alpha_.lat; }
  const SparseCoefficient& alpha() const noexcept { return alpha_; }
  ConvolutionPolicy policy() const noexcept { return policy_; }

  /// out = Q v. Throws invalid_input on lattice mismatch.
  void apply(const SpectralField& v, SpectralField& out) const;
  SpectralField apply(const SpectralField& v) const;

  /// Frequency cache: lambda_i components at [i*d, (i+1)*d).
  const std::vector<double>& frequency_cache() const noexcept { return freq_; }

 private:
  SparseCoefficient alpha_;
  ConvolutionPolicy policy_;
  std::vector<double> freq_;        // D x d, row-major
  std::vector<VectorIndex> source_; // g x D; source_[t*D+i] = j(i, m_t) or -1
};

/// Dense D x D assembly (row-major), a testing oracle:
///   wrapped:   Q[i][j] = A~[(k_i - k_j) mod N] * (lambda_i . lambda_j)
///   dealiased: Q[i][j] = A~[k_i - k_j] * (lambda_i . lambda_j), no fold,
/// with A~ zero off the sparse support. Guarded to D <= 65536; computed
/// directly from the definition, independent of the compressed tables.
std::vector<Complex> assemble_dense(const QOperator& op);

}  // namespace qpspec
