// SPDX-License-Identifier: MIT
#pragma once

#include <complex>

#include "qpspec/lattice.hpp"
#include "qpspec/spectral.hpp"
#include "qpspec/stepper.hpp"

namespace qpspec {

/// A separable exact solution u(x, t) = exp(sigma*t) * v(x), where v is a
/// finite sum of quasiperiodic modes. The spatial support may exceed K_N^n.
/// sigma defaults to -i (carrier exp(-i t)); any complex exponential is
/// accepted.
struct ExactSolution {
  Complex sigma{0.0, -1.0};
  ModeList modes;
};

/// Lattice coefficients of the exact solution at time t: the truncation T_N
/// of the spatial modes scaled by exp(sigma*t). Modes outside K_N^n drop.
SpectralField exact_coefficients(const ExactSolution& sol, const Lattice& lat,
                                 double t);

/// Modes of L v = -div(alpha * grad v) by exact (unwrapped) convolution:
///   c_k = sum_m a_(k-m) * (P k . P m) * b_m
/// over exact integer index arithmetic; the support grows to
/// supp(alpha) + supp(v). No wrapping, no truncation; zero amplitudes that
/// arise analytically (orthogonal frequencies) are kept. Output is sorted
/// lexicographically in k for reproducibility.
ModeList exact_convolution_Lu(const ModeList& alpha_modes,
                              const ModeList& sol_modes,
                              const ProjectionMatrix& P);

/// Source provider realizing f = du/dt + L u for the exact solution:
///   F(t) = exp(sigma*t) * (S_N(L v) + sigma * S_N(v)),
/// where S_N restricts onto the lattice under `policy` (exact truncation by
/// default, collocation sampling when the experiment calls for it). The
/// convolution is computed once at construction; per-call work is the time
/// factor only.
SourceProvider source_provider(const ExactSolution& sol,
                               const ModeList& alpha_modes, const Lattice& lat,
                               SamplingPolicy policy = SamplingPolicy::truncate);

}  // namespace qpspec
