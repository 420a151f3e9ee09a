// SPDX-License-Identifier: MIT
#include "qpspec/manufactured.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "qpspec/errors.hpp"

namespace qpspec {

SpectralField exact_coefficients(const ExactSolution& sol, const Lattice& lat,
                                 double t) {
  SpectralField out = truncate(sol.modes, lat);
  const Complex factor = std::exp(sol.sigma * t);
  for (Complex& c : out.coeffs) c *= factor;
  return out;
}

ModeList exact_convolution_Lu(const ModeList& alpha_modes,
                              const ModeList& sol_modes,
                              const ProjectionMatrix& P) {
  // c_k = sum over (m_a, a), (m_v, b) with k = m_a + m_v of
  //       a * (P k . P m_v) * b — exact integer arithmetic, no wrapping.
  std::map<FrequencyIndex, Complex> acc;
  FrequencyIndex k(static_cast<std::size_t>(P.cols()));
  for (const Mode& v : sol_modes) {
    const std::vector<double> lambda_v = P.apply(v.k);
    for (const Mode& a : alpha_modes) {
      if (a.k.size() != v.k.size()) {
        throw invalid_input(
            "exact_convolution_Lu: mode index lengths disagree");
      }
      for (std::size_t l = 0; l < k.size(); ++l) k[l] = a.k[l] + v.k[l];
      const std::vector<double> lambda_k = P.apply(k);
      double w = 0.0;
      for (std::size_t r = 0; r < lambda_k.size(); ++r) {
        w += lambda_k[r] * lambda_v[r];
      }
      acc[k] += a.amplitude * w * v.amplitude;
    }
  }
  ModeList out;
  out.reserve(acc.size());
  for (const auto& [key, c] : acc) out.push_back(Mode{key, c});
  return out;  // std::map iteration is already lexicographic in k
}

SourceProvider source_provider(const ExactSolution& sol,
                               const ModeList& alpha_modes, const Lattice& lat,
                               SamplingPolicy policy) {
  const ModeList lu = exact_convolution_Lu(alpha_modes, sol.modes,
                                           lat.projection());
  SpectralField base = project_modes(lu, lat, policy);
  axpy(base, sol.sigma, project_modes(sol.modes, lat, policy));
  const Complex sigma = sol.sigma;
  return [base = std::move(base), sigma](double t) {
    return scaled(base, std::exp(sigma * t));
  };
}

}  // namespace qpspec
