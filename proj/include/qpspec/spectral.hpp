// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <vector>

#include "qpspec/lattice.hpp"

namespace qpspec {

using Complex = std::complex<double>;

/// One analytic Fourier mode: integer frequency and complex amplitude.
/// Mode lists describe parent functions whose support may exceed K_N^n.
struct Mode {
  FrequencyIndex k;
  Complex amplitude;
};

using ModeList = std::vector<Mode>;

/// Fourier-side representation of a parent function on the lattice:
/// coeffs[i] is the amplitude of the mode vector_to_tensor(i).
struct SpectralField {
  Lattice lat;
  std::vector<Complex> coeffs;
};

/// Sample-side representation: values[i] is the parent function at the grid
/// point y_j with flat row-major index i (j_l = 2*pi*l/N per axis).
struct GridField {
  Lattice lat;
  std::vector<Complex> values;
};

/// Zero field on the given lattice.
SpectralField zero_field(const Lattice& lat);

/// Forward transform with the 1/D normalization:
///   coeffs[k] = (1/D) * sum_j values[j] * exp(-i k . y_j).
/// O(D log D) via FFT; the direct O(D^2) sum is kept as a test oracle.
SpectralField forward_dft(const GridField& g);

/// Inverse transform (unnormalized synthesis):
///   values[j] = sum_k coeffs[k] * exp(+i k . y_j).
GridField inverse_dft(const SpectralField& s);

/// Evaluate the quasiperiodic function at a physical point x (length d):
///   u(x) = sum_k coeffs[k] * exp(i lambda_k . x),  lambda_k = P*k.
/// Direct summation, O(D*d).
Complex evaluate_at(const SpectralField& s, const std::vector<double>& x);

/// How analytic mode lists are restricted onto a lattice.
enum class SamplingPolicy {
  /// Exact truncation T_N: keep modes inside K_N^n, drop the rest.
  truncate,
  /// Sample the parent function on the 2x-oversampled collocation grid
  /// (2N points per axis) and truncate the resulting DFT to K_N^n.
  /// Realized exactly in frequency space: each mode k folds to its
  /// representative mod 2N in [-N, N)^n and is kept if that lands in K_N^n;
  /// coincident folds accumulate.
  collocation2x,
};

/// Restriction of a mode list onto the lattice under the given policy.
/// Throws invalid_input on duplicate k in the input.
SpectralField project_modes(const ModeList& modes, const Lattice& lat,
                            SamplingPolicy policy);

/// Exact truncation T_N; equivalent to project_modes(..., truncate).
SpectralField truncate(const ModeList& modes, const Lattice& lat);

// --- small field arithmetic used by the time stepper ---

/// y += a*x (lattices must match).
void axpy(SpectralField& y, Complex a, const SpectralField& x);

/// Elementwise a*x.
SpectralField scaled(const SpectralField& x, Complex a);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);

/// True if every coefficient is finite.
bool all_finite(const SpectralField& s);

}  // namespace qpspec
