// SPDX-License-Identifier: MIT
#include "qpspec/lattice.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <string>

#include "qpspec/errors.hpp"

namespace qpspec {

namespace {

std::string index_to_string(const FrequencyIndex& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + ")";
}

}  // namespace

ProjectionMatrix::ProjectionMatrix(int rows, int cols,
                                   std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ < 1 || cols_ < 1) {
    throw invalid_input("projection matrix: dimensions must be positive");
  }
  if (rows_ > cols_) {
    throw invalid_input(
        "projection matrix: physical dimension d exceeds lattice dimension n "
        "(d=" +
        std::to_string(rows_) + ", n=" + std::to_string(cols_) + ")");
  }
  if (entries_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw invalid_input("projection matrix: expected " +
                        std::to_string(rows_ * cols_) + " entries, got " +
                        std::to_string(entries_.size()));
  }
  for (double e : entries_) {
    if (!std::isfinite(e)) {
      throw invalid_input("projection matrix: non-finite entry");
    }
  }
  Eigen::MatrixXd m(rows_, cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) m(r, c) = at(r, c);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(sv.size() - 1) <= 1e-12 * sv(0)) {
    throw invalid_input(
        "projection matrix: rows are rank deficient (smallest singular value "
        "<= 1e-12 of largest)");
  }
}

std::vector<double> ProjectionMatrix::apply(const FrequencyIndex& k) const {
  if (k.size() != static_cast<std::size_t>(cols_)) {
    throw invalid_input("projection matrix: frequency index has length " +
                        std::to_string(k.size()) + ", expected " +
                        std::to_string(cols_));
  }
  std::vector<double> out(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < cols_; ++c) acc += at(r, c) * k[c];
    out[r] = acc;
  }
  return out;
}

std::vector<double> ProjectionMatrix::apply_real(
    const std::vector<double>& y) const {
  if (y.size() != static_cast<std::size_t>(cols_)) {
    throw invalid_input("projection matrix: vector has length " +
                        std::to_string(y.size()) + ", expected " +
                        std::to_string(cols_));
  }
  std::vector<double> out(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < cols_; ++c) acc += at(r, c) * y[c];
    out[r] = acc;
  }
  return out;
}

bool ProjectionMatrix::operator==(const ProjectionMatrix& other) const noexcept {
  return rows_ == other.rows_ && cols_ == other.cols_ &&
         entries_ == other.entries_;
}

Lattice::Lattice(int N, int n, ProjectionMatrix projection)
    : N_(N), n_(n), D_(0), P_(std::move(projection)) {
  if (N_ < 2 || N_ % 2 != 0) {
    throw invalid_input("lattice: N must be even and >= 2, got " +
                        std::to_string(N_));
  }
  if (n_ < 1) {
    throw invalid_input("lattice: n must be >= 1, got " + std::to_string(n_));
  }
  if (P_.cols() != n_) {
    throw invalid_input("lattice: projection has " +
                        std::to_string(P_.cols()) + " columns, expected n=" +
                        std::to_string(n_));
  }
  constexpr VectorIndex kMaxD = VectorIndex{1} << 31;
  VectorIndex d = 1;
  for (int l = 0; l < n_; ++l) {
    if (d > kMaxD / N_) {
      throw invalid_input("lattice: D = N^n exceeds 2^31 (N=" +
                          std::to_string(N_) + ", n=" + std::to_string(n_) +
                          ")");
    }
    d *= N_;
  }
  D_ = d;
}

VectorIndex Lattice::tensor_to_vector(const FrequencyIndex& k) const {
  if (k.size() != static_cast<std::size_t>(n_)) {
    throw invalid_input("lattice: frequency index has length " +
                        std::to_string(k.size()) + ", expected n=" +
                        std::to_string(n_));
  }
  VectorIndex i = 0;
  for (int l = 0; l < n_; ++l) {
    int c = k[l];
    if (c < -N_ / 2 || c >= N_ / 2) {
      throw invalid_input("lattice: frequency index " + index_to_string(k) +
                          " outside K_N with N=" + std::to_string(N_));
    }
    int residue = c < 0 ? c + N_ : c;
    i = i * N_ + residue;
  }
  return i;
}

FrequencyIndex Lattice::vector_to_tensor(VectorIndex i) const {
  if (i < 0 || i >= D_) {
    throw invalid_input("lattice: flat index " + std::to_string(i) +
                        " outside [0, D) with D=" + std::to_string(D_));
  }
  FrequencyIndex k(static_cast<std::size_t>(n_), 0);
  for (int l = n_ - 1; l >= 0; --l) {
    int residue = static_cast<int>(i % N_);
    i /= N_;
    k[static_cast<std::size_t>(l)] = residue < N_ / 2 ? residue : residue - N_;
  }
  return k;
}

FrequencyIndex Lattice::fold(const FrequencyIndex& k) const {
  if (k.size() != static_cast<std::size_t>(n_)) {
    throw invalid_input("lattice: frequency index has length " +
                        std::to_string(k.size()) + ", expected n=" +
                        std::to_string(n_));
  }
  FrequencyIndex out(k.size());
  for (std::size_t l = 0; l < k.size(); ++l) {
    int r = ((k[l] % N_) + N_) % N_;
    out[l] = r < N_ / 2 ? r : r - N_;
  }
  return out;
}

bool Lattice::in_box(const FrequencyIndex& k) const noexcept {
  if (k.size() != static_cast<std::size_t>(n_)) return false;
  for (int c : k) {
    if (c < -N_ / 2 || c >= N_ / 2) return false;
  }
  return true;
}

std::vector<double> Lattice::frequency_of(const FrequencyIndex& k) const {
  return P_.apply(k);
}

std::vector<double> Lattice::collocation_point(const FrequencyIndex& j) const {
  if (j.size() != static_cast<std::size_t>(n_)) {
    throw invalid_input("lattice: grid index has length " +
                        std::to_string(j.size()) + ", expected n=" +
                        std::to_string(n_));
  }
  std::vector<double> y(j.size());
  for (std::size_t l = 0; l < j.size(); ++l) {
    if (j[l] < 0 || j[l] >= N_) {
      throw invalid_input("lattice: grid index component " +
                          std::to_string(j[l]) + " outside [0, N)");
    }
    y[l] = 2.0 * std::numbers::pi * j[l] / N_;
  }
  return P_.apply_real(y);
}

std::vector<double> Lattice::collocation_points() const {
  const int d = P_.rows();
  std::vector<double> pts(static_cast<std::size_t>(D_) * d);
  FrequencyIndex j(static_cast<std::size_t>(n_), 0);
  for (VectorIndex i = 0; i < D_; ++i) {
    std::vector<double> x = collocation_point(j);
    for (int r = 0; r < d; ++r) pts[static_cast<std::size_t>(i) * d + r] = x[r];
    // Row-major odometer increment.
    for (int l = n_ - 1; l >= 0; --l) {
      if (++j[static_cast<std::size_t>(l)] < N_) break;
      j[static_cast<std::size_t>(l)] = 0;
    }
  }
  return pts;
}

bool Lattice::operator==(const Lattice& other) const noexcept {
  return N_ == other.N_ && n_ == other.n_ && P_ == other.P_;
}

}  // namespace qpspec
