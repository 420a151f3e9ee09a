// SPDX-License-Identifier: MIT
#include "qpspec/metrics.hpp"

#include <cmath>
#include <string>

#include "qpspec/errors.hpp"

namespace qpspec {

double l2qp_norm(const SpectralField& s) {
  double acc = 0.0;
  for (const Complex& c : s.coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

double final_error(const SpectralField& u_num, const ExactSolution& sol,
                   double t) {
  const SpectralField exact = exact_coefficients(sol, u_num.lat, t);
  return l2qp_norm(u_num - exact);
}

double order_kappa(double err1, double tau1, double err2, double tau2) {
  if (!(err1 > 0.0) || !(err2 > 0.0)) {
    throw invalid_input(
        "order_kappa: undefined order — errors must be strictly positive "
        "(err1=" +
        std::to_string(err1) + ", err2=" + std::to_string(err2) + ")");
  }
  if (!(tau1 > 0.0) || !(tau2 > 0.0) || tau1 == tau2) {
    throw invalid_input(
        "order_kappa: step sizes must be positive and distinct");
  }
  return std::log(err1 / err2) / std::log(tau1 / tau2);
}

}  // namespace qpspec
