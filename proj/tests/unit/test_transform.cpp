#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ffmop/error.hpp"
#include "ffmop/specialfn.hpp"
#include "ffmop/transform.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace ffmop;
using ffmop::test::close;

namespace {
const double kPi = std::numbers::pi;
const Support kUnit{0.0, 1.0, 0.0, 0.0};
double g0(double x) { return std::exp(-x); }
double g1(double x) { return x * std::exp(-x); }
double gauss(double x) { return std::exp(-x * x); }
double unit_box(double x) { return x > 0 && x < 1 ? 1.0 : 0.0; }
}  // namespace

TEST_CASE("quadrature config validation") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.contour_nodes = 8;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = {};
  cfg.abs_tol = 0;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK(parse_scheme(to_string(Scheme::MappedHalfline)) == Scheme::MappedHalfline);
}

TEST_CASE("mellin_numeric") {
  QuadratureConfig cfg;
  CHECK(std::abs(mellin_numeric(BetaDensity{0, 1}, 2.0, cfg).value - 0.5) < 1e-12);
  CHECK(std::abs(mellin_numeric(GammaDensity{0}, 3.0, cfg).value - 2.0) < 1e-12);
  CHECK(std::abs(mellin_numeric(GammaDensity{0.5}, 1.5, cfg).value - 1.0) < 1e-12);
  auto r = mellin_numeric(g0, cplx(2.0, 1.0), cfg);
  CHECK(std::abs(r.value - gamma(cplx(2.0, 1.0))) < 1e-11);
  CHECK(r.nodes_used > 0);
}

TEST_CASE("mellin_numeric exhausts its budget") {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 1;
  cfg.abs_tol = 1e-300;
  cfg.rel_tol = 1e-300;
  CHECK_THROWS_AS(mellin_numeric([](double x) { return std::sin(50 * x) * std::exp(-x); }, 2.0, cfg), NumericalError);
}

TEST_CASE("laplace_numeric") {
  QuadratureConfig cfg;
  CHECK(std::abs(laplace_numeric(GammaDensity{0}, 1.0, cfg).value - 0.5) < 1e-12);
  CHECK(std::abs(laplace_numeric(GaussianDensity{}, 1.0, cfg).value - std::sqrt(kPi) * std::exp(0.25)) < 1e-12);
  CHECK(std::abs(laplace_numeric(GammaDensity{1}, 1.0, cfg).value - 0.25) < 1e-12);
  CHECK(std::abs(laplace_numeric(gauss, cplx(0.5, 0.5), cfg).value - std::sqrt(kPi) * std::exp(cplx(0.5, 0.5) * cplx(0.5, 0.5) / 4.0)) < 1e-12);
}

TEST_CASE("mellin_convolve") {
  QuadratureConfig cfg;
  CHECK(close(mellin_convolve(g0, g0, 1.0, cfg), 2 * oracle::bessel_k0(2.0), 1e-10));
  CHECK(std::abs(mellin_convolve(unit_box, unit_box, 0.5, cfg, kUnit, kUnit) - std::log(2.0)) < 1e-10);
  CHECK(std::abs(mellin_convolve(unit_box, unit_box, 1.0, cfg, kUnit, kUnit)) < 1e-10);
  CHECK(close(mellin_convolve(g0, unit_box, 2.0, cfg, kHalfLine, kUnit), oracle::expint_e1(2.0), 1e-10));
}

TEST_CASE("laplace_convolve") {
  QuadratureConfig cfg;
  Support half{0.0, kInf, 0.0, 0.0};
  CHECK(close(laplace_convolve(g0, g0, 1.0, cfg, half, half), std::exp(-1.0), 1e-12));
  CHECK(close(laplace_convolve(gauss, gauss, 0.0, cfg), std::sqrt(kPi / 2), 1e-12));
  CHECK(close(laplace_convolve(g0, g1, 2.0, cfg, half, half), 2 * std::exp(-2.0), 1e-12));
}

TEST_CASE("inverse_mellin") {
  QuadratureConfig cfg;
  auto gam = [](cplx s) { return gamma(s); };
  CHECK(std::abs(inverse_mellin(gam, 1.0, 1.0, cfg).value.real() - std::exp(-1.0)) < 1e-10);
  auto gam2 = [](cplx s) { return gamma(s) * gamma(s); };
  CHECK(std::abs(inverse_mellin(gam2, 1.0, 1.0, cfg).value.real() - 2 * oracle::bessel_k0(2.0)) < 1e-10);
  // 1/s decays only like 1/|t|; a long contour and loose tolerance are needed.
  QuadratureConfig wide;
  wide.contour_truncation = 1e6;
  wide.contour_nodes = 1 << 16;
  wide.rel_tol = 1e-6;
  wide.abs_tol = 1e-6;
  auto inv = [](cplx s) { return 1.0 / s; };
  CHECK(std::abs(inverse_mellin(inv, 1.0, 0.5, wide).value.real() - 1.0) < 1e-4);
}

TEST_CASE("inverse_laplace") {
  QuadratureConfig cfg;
  auto f = [](cplx s) { return 1.0 / (s + 1.0); };
  QuadratureConfig wide;
  wide.contour_truncation = 1e6;
  wide.contour_nodes = 1 << 16;
  wide.rel_tol = 1e-6;
  wide.abs_tol = 1e-6;
  CHECK(std::abs(inverse_laplace(f, 1.0, 1.0, wide).value.real() - std::exp(-1.0)) < 1e-4);
  auto g = [](cplx s) { return std::sqrt(kPi) * std::exp(s * s / 4.0); };
  CHECK(std::abs(inverse_laplace(g, 1.0, 0.0, cfg).value.real() - 1.0) < 1e-10);
  auto be = [](cplx s) { return std::exp(1.0 / (1.0 + s)) / (1.0 + s); };
  CHECK(std::abs(inverse_laplace(be, 1.0, 1.0, wide).value.real() - oracle::be1_from_bessel(0, 1, 1, 1.0)) < 1e-4);
}

TEST_CASE("derivative identities") {
  CHECK(check_derivative_identity(TransformKind::Mellin, g1, 1, {cplx(2.0)}).max_residual < 1e-6);
  CHECK(check_derivative_identity(TransformKind::Laplace, gauss, 1, {cplx(1.0)}).max_residual < 1e-6);
  CHECK(check_derivative_identity(TransformKind::Laplace, gauss, 2, {cplx(1.0), cplx(2.0)}).max_residual < 1e-6);
  auto bumped = [](double x) { return std::exp(-x * x) * (1 + 0.1 * std::sin(x)); };
  CHECK(check_derivative_identity(TransformKind::Laplace, bumped, 1, {cplx(1.0)}).max_residual < 1e-6);
}
