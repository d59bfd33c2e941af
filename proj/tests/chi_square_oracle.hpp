#pragma once

// Independent chi-square quantile oracle for even degrees of freedom:
// P(X > x) = exp(-x/2) sum_{j < k/2} (x/2)^j / j!, inverted by bisection.

#include <cmath>

namespace bohm::testing {

inline double even_dof_survival(double x, int dof) {
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < dof / 2; ++j) {
    term *= (x / 2.0) / j;
    sum += term;
  }
  return std::exp(-x / 2.0) * sum;
}

inline double even_dof_critical(double alpha, int dof) {
  double lo = 0.0;
  double hi = 1.0;
  while (even_dof_survival(hi, dof) > alpha) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (even_dof_survival(mid, dof) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bohm::testing
