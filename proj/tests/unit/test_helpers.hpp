#pragma once

#include <cmath>
#include <complex>

#include "doctest.h"
#include "ffmop/polynomial.hpp"

namespace ffmop::test {

inline bool close(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

inline void check_poly(const Poly& p, const Poly& q, double tol) {
  CAPTURE(p.coeffs());
  CAPTURE(q.coeffs());
  CHECK(p.degree() == q.degree());
  CHECK(max_coeff_diff(p, q) <= tol);
}

}  // namespace ffmop::test
