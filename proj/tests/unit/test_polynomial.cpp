#include <algorithm>
#include <random>

#include "doctest.h"
#include "ffmop/polynomial.hpp"
#include "test_helpers.hpp"

using namespace ffmop;
using ffmop::test::check_poly;

TEST_CASE("Poly normalization") {
  Poly p{1, 2, 0, 0};
  CHECK(p.degree() == 1);
  CHECK(Poly{0, 0}.is_zero());
  CHECK(Poly{}.degree() == -1);
  CHECK(Poly::monomial(3, 2.0) == Poly{0, 0, 0, 2});
  CHECK((Poly{1, 1} * Poly{-1, 1}) == Poly{-1, 0, 1});
  CHECK((Poly{1, 1} - Poly{1, 1}).is_zero());
}

TEST_CASE("ff_mul_conv") {
  check_poly(ff_mul_conv(Poly{5, 3, 1}, Poly{1, -2, 1}, 2), Poly{5, 3, 1}, 0);
  double m1 = 1.5, m2 = -0.4;
  check_poly(ff_mul_conv(Poly{-m1, 1}, Poly{-m2, 1}, 1), Poly{-m1 * m2, 1}, 1e-15);
  check_poly(ff_mul_conv(Poly{-1, 0, 1}, Poly{-1, 0, 1}, 2), Poly{1, 0, 1}, 1e-15);
}

TEST_CASE("ff_add_conv") {
  Poly p{0.3, -1.2, 0.5, 1};
  check_poly(ff_add_conv(p, Poly::monomial(3), 3), p, 1e-15);
  check_poly(ff_add_conv(Poly{-2, 1}, Poly{-3, 1}, 1), Poly{-5, 1}, 1e-15);
  check_poly(ff_add_conv(Poly{-1, 0, 1}, Poly{-1, 0, 1}, 2), Poly{-2, 0, 1}, 1e-15);
}

TEST_CASE("convolutions are commutative") {
  Poly p = from_roots({0.5, 1.2, 3.0}), q = from_roots({0.1, 2.0, 2.5});
  check_poly(ff_mul_conv(p, q, 3), ff_mul_conv(q, p, 3), 1e-13);
  check_poly(ff_add_conv(p, q, 3), ff_add_conv(q, p, 3), 1e-13);
}

TEST_CASE("derivative and evaluation") {
  CHECK(poly_derivative(Poly{0, 0, 1}) == Poly{0, 2});
  CHECK(poly_derivative(Poly{4}).is_zero());
  CHECK(poly_derivative(Poly{0, -1, 0, 1}) == Poly{-1, 0, 3});
  CHECK(poly_eval(Poly{-1, 0, 1}, 2.0) == 3.0);
  CHECK(poly_eval(Poly{7, 1, 2}, 0.0) == 7.0);
  CHECK(poly_eval(ff_mul_conv(Poly{-1, 1}, Poly{-1, 1}, 1), 1.0) == 0.0);
  CHECK(std::abs(poly_eval(Poly{1, 0, 1}, cplx(0, 1))) == 0.0);
}

TEST_CASE("from_roots") {
  CHECK(from_roots({1, 2}) == Poly{2, -3, 1});
  CHECK(from_roots({}) == Poly{1});
  CHECK(from_roots({0, 0, 0}) == Poly::monomial(3));
}

namespace {
std::vector<cplx> sorted_roots(const Poly& p) {
  auto r = roots(p);
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return r;
}
}  // namespace

TEST_CASE("roots") {
  auto r = sorted_roots(Poly{2, -3, 1});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - 1.0) < 1e-12);
  CHECK(std::abs(r[1] - 2.0) < 1e-12);
  r = sorted_roots(Poly{1, 0, 1});
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] - cplx(0, -1)) < 1e-12);
  CHECK(std::abs(r[1] - cplx(0, 1)) < 1e-12);
  r = sorted_roots(Poly{-2, 0, 1});
  CHECK(std::abs(r[0] + std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(r[1] - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("real-rootedness is preserved") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> deg(1, 5);
  std::uniform_real_distribution<double> any(-3, 3), pos(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    int n = deg(gen);
    std::vector<double> a(n), b(n), c(n), d(n);
    for (int i = 0; i < n; ++i) {
      a[i] = any(gen);
      b[i] = any(gen);
      c[i] = pos(gen);
      d[i] = pos(gen);
    }
    for (cplx z : roots(ff_add_conv(from_roots(a), from_roots(b), n))) CHECK(std::abs(z.imag()) < 1e-8);
    for (cplx z : roots(ff_mul_conv(from_roots(c), from_roots(d), n))) {
      CHECK(std::abs(z.imag()) < 1e-8);
      CHECK(z.real() >= -1e-8);
    }
  }
}
