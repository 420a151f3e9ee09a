// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <vector>

namespace qpspec {

/// Integer frequency multi-index k in Z^n.
using FrequencyIndex = std::vector<int>;

/// Flat position in the length-D coefficient array.
using VectorIndex = std::int64_t;

/// Dense d x n real matrix P mapping integer lattice frequencies to physical
/// frequencies lambda_k = P*k. Rows d is the physical dimension, columns n
/// the lattice dimension; quasiperiodic embeddings require d <= n and full
/// row rank (smallest singular value > 1e-12 times the largest).
///
/// Storage is row-major. Entries are exact doubles; configuration files may
/// specify them symbolically (see expr.hpp) to avoid decimal truncation.
class ProjectionMatrix {
 public:
  /// Validates shape and row rank; throws invalid_input on failure.
  ProjectionMatrix(int rows, int cols, std::vector<double> entries);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  double at(int r, int c) const { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }

  /// lambda = P*k for an integer frequency index (length-d result).
  std::vector<double> apply(const FrequencyIndex& k) const;

  /// x = P*y for a real length-n vector (used for collocation points).
  std::vector<double> apply_real(const std::vector<double>& y) const;

  bool operator==(const ProjectionMatrix& other) const noexcept;

 private:
  int rows_;
  int cols_;
  std::vector<double> entries_;
};

/// The truncated frequency box K_N^n = {k in Z^n : -N/2 <= k_j < N/2} with
/// D = N^n retained modes, its flat enumeration, and the projection matrix.
///
/// Enumeration is row-major over the non-negative residues k mod N:
///   i = sum_l (k_l mod N) * N^(n-1-l),
/// the natural layout of an n-dimensional DFT array. The map is a bijection
/// between K_N^n and {0, ..., D-1}.
class Lattice {
 public:
  /// Requires N even and >= 2, n >= 1, P.cols() == n, and D = N^n <= 2^31.
  /// Throws invalid_input otherwise.
  Lattice(int N, int n, ProjectionMatrix projection);

  int N() const noexcept { return N_; }
  int dims() const noexcept { return n_; }
  VectorIndex size() const noexcept { return D_; }
  const ProjectionMatrix& projection() const noexcept { return P_; }

  /// Flat index of k; requires every component in [-N/2, N/2).
  VectorIndex tensor_to_vector(const FrequencyIndex& k) const;

  /// Inverse of tensor_to_vector; returns k with components in [-N/2, N/2).
  FrequencyIndex vector_to_tensor(VectorIndex i) const;

  /// Componentwise representative of k mod N inside [-N/2, N/2).
  /// Accepts arbitrary integer input.
  FrequencyIndex fold(const FrequencyIndex& k) const;

  /// Whether every component of k already lies in [-N/2, N/2).
  bool in_box(const FrequencyIndex& k) const noexcept;

  /// Physical frequency lambda_k = P*k (length-d). Accepts any integer k,
  /// in-box or not; the map is linear in k.
  std::vector<double> frequency_of(const FrequencyIndex& k) const;

  /// Collocation point x_j = P*y_j for the grid multi-index j in [0, N)^n,
  /// where y_j = (2*pi/N) * j on the torus.
  std::vector<double> collocation_point(const FrequencyIndex& j) const;

  /// All D collocation points, row-major in j, flattened to a D*d array
  /// (point i occupies entries [i*d, (i+1)*d)).
  std::vector<double> collocation_points() const;

  bool operator==(const Lattice& other) const noexcept;

 private:
  int N_;
  int n_;
  VectorIndex D_;
  ProjectionMatrix P_;
};

}  // namespace qpspec
