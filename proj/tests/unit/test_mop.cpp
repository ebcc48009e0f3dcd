#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ffmop/mop.hpp"
#include "ffmop/transform.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace ffmop;
using ffmop::test::check_poly;
using ffmop::test::close;

TEST_CASE("mop_mdt examples") {
  check_poly(mop_mdt(specs::lue(0), 1), Poly{-1, 1}, 1e-14);
  check_poly(mop_mdt(specs::lue(0), 2), Poly{2, -4, 1}, 1e-14);
  auto spec = specs::jue(0.5, 2.5, 1.7);
  double m1 = mdt_omega_transform(spec, 1, 1.0).real(), m2 = mdt_omega_transform(spec, 1, 2.0).real();
  check_poly(mop_mdt(spec, 1), Poly{-m2 / m1, 1}, 1e-14);
}

TEST_CASE("mop_adt examples") {
  check_poly(mop_adt(specs::gaussian(), 2), Poly{-0.5, 0, 1}, 1e-14);
  check_poly(mop_adt(specs::lue_type(0), 2), Poly{2, -4, 1}, 1e-13);
  auto spec = specs::be1(1, 0.5, 1);
  auto J = reciprocal_laplace_jet(spec, 1, 1);
  check_poly(mop_adt(spec, 1), Poly{-J.coeffs[1] / J.coeffs[0], 1}, 1e-14);
  check_poly(mop_adt(specs::lue_type(0), 1), Poly{-1, 1}, 1e-15);
}

TEST_CASE("single-weight families match recurrence oracles") {
  for (int n = 1; n <= 8; ++n) {
    for (double a : {0.0, 0.5, 2.0}) {
      Poly p = mop_mdt(specs::lue(a), n), q = oracle::laguerre_monic(n, a);
      double scale = 0;
      for (double c : q.coeffs()) scale = std::max(scale, std::abs(c));
      CHECK(max_coeff_diff(p, q) <= 1e-10 * scale);
    }
    Poly p = mop_mdt(specs::jue(1, 3), n), q = oracle::jacobi_monic_01(n, 1, 1);
    CHECK(max_coeff_diff(p, q) <= 1e-10);
    p = mop_mdt(specs::jue(0.5, 3.0), n);
    q = oracle::jacobi_monic_01(n, 0.5, 1.5);
    CHECK(max_coeff_diff(p, q) <= 1e-10);
    p = mop_adt(specs::gaussian(), n);
    q = oracle::hermite_monic(n);
    CHECK(max_coeff_diff(p, q) <= 1e-10 * std::max(1.0, std::abs(q[0])));
  }
}

TEST_CASE("outputs are monic of exact degree") {
  for (int n = 1; n <= 16; ++n) {
    Poly p = mop_mdt(specs::gamma_product({0, 0.5, 1}), n);
    CHECK(p.degree() == n);
    CHECK(p.leading() == 1.0);
    p = mop_adt(specs::gaussian_lue_mixture(), n);
    CHECK(p.degree() == n);
    CHECK(p.leading() == 1.0);
  }
}

TEST_CASE("scale invariance") {
  for (double lam : {0.5, 3.0}) {
    std::vector<cplx> m, ms;
    auto spec = specs::gamma_product({0.2, 1.0});
    for (int k = 1; k <= 5; ++k) {
      m.push_back(mdt_omega_transform(spec, 4, double(k)));
      ms.push_back(lam * m.back());
    }
    Poly p = mop_mdt_from_values(m, 4);
    double scale = 0;
    for (double c : p.coeffs()) scale = std::max(scale, std::abs(c));
    CHECK(max_coeff_diff(p, mop_mdt_from_values(ms, 4)) <= 1e-13 * scale);
    auto J = reciprocal_laplace_jet(specs::be1(1, 0.5, 1), 4, 4), Js = J;
    for (double& c : Js.coeffs) c /= lam;
    CHECK(max_coeff_diff(mop_adt_from_jet(J, 4), mop_adt_from_jet(Js, 4)) <= 1e-13);
  }
}

TEST_CASE("orthogonality residuals") {
  auto R = orthogonality_residuals(Poly{-1, 1}, specs::lue(0), 1);
  CHECK(std::abs(R[0][0]) < 1e-10);
  R = orthogonality_residuals(Poly{-0.5, 0, 1}, specs::gaussian(), 2);
  CHECK(max_abs(R) < 1e-8);
  R = orthogonality_residuals(Poly{0, 0, 1}, specs::lue(0), 2);
  CHECK(max_abs(R) > 0.1);
  for (int n = 1; n <= 4; ++n) {
    CHECK(max_abs(orthogonality_residuals(mop_mdt(specs::jue(1, 3), n), specs::jue(1, 3), n)) < 1e-6);
    CHECK(max_abs(orthogonality_residuals(mop_adt(specs::be1(1, 0.5, 1), n), specs::be1(1, 0.5, 1), n)) < 1e-6);
  }
}

TEST_CASE("decomposition_check") {
  auto d = decomposition_check(specs::lue(0), specs::lue(0), 2);
  CHECK(d.max_deviation < 1e-12);
  check_poly(d.convolved, ff_mul_conv(Poly{2, -4, 1}, Poly{2, -4, 1}, 2), 1e-12);
  d = decomposition_check(specs::gaussian(), specs::gaussian(), 2);
  CHECK(d.max_deviation < 1e-12);
  check_poly(d.combined, Poly{-1, 0, 1}, 1e-12);
  MDTWeightSpec unit{1.0, {}, 0.0};
  d = decomposition_check(specs::jue(1, 3), unit, 3);
  CHECK(d.abs_deviation <= 1e-14);
  for (int n = 1; n <= 6; ++n) {
    CHECK(decomposition_check(specs::lue(0.5), specs::jue(1, 3.5), n).max_deviation < 1e-10);
    CHECK(decomposition_check(specs::lue_type(0.5), specs::be1(1, 0.5, 1), n).max_deviation < 1e-10);
  }
}

TEST_CASE("biorthogonal_partner") {
  auto g0 = [](double x) { return std::exp(-x); };
  auto gauss = [](double x) { return std::exp(-x * x); };
  CHECK(close(biorthogonal_partner(g0, Support{}, specs::lue(0), 1.0), 2 * oracle::bessel_k0(2.0), 1e-9));
  CHECK(close(biorthogonal_partner(g0, Support{0, kInf}, specs::lue_type(0), 1.0), std::exp(-1.0), 1e-9));
  // The Gaussian spec's omega is e^{-x^2}/sqrt(pi), so the self-convolution carries a 1/sqrt(pi) factor.
  CHECK(close(biorthogonal_partner(gauss, kRealLine, specs::gaussian(), 0.0), std::sqrt(std::numbers::pi / 2) / std::sqrt(std::numbers::pi), 1e-9));
}

TEST_CASE("ratio_structure_check") {
  std::vector<double> ss{1.1, 1.4, 1.8, 2.3, 2.9, 3.4, 4.0};
  CHECK(ratio_structure_check(mdt_family(specs::lue(0)), 4, ss).max_residual < 1e-10);
  CHECK(ratio_structure_check(adt_family(specs::gaussian()), 2, ss).max_residual < 1e-8);
  auto broken = ratio_structure_check(broken_mixture_family(), 4, ss);
  CHECK_FALSE(broken.pass);
  CHECK(broken.max_residual > 1e-3);
}
