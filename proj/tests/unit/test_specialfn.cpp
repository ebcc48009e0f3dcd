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
// Frozen 30-digit reference values.
constexpr double kI0of2 = 2.27958530233606726743720444081;
constexpr double kK0of2 = 0.113893872749533435652719574932;
constexpr double kE1of2 = 0.0489005107080611195672398352281;
constexpr double kAiOfMinus1 = 0.535560883292352118799516565639;
constexpr double kAiOf2 = 0.0349241304232743791353220807918;
}  // namespace

TEST_CASE("oracles agree with frozen reference values") {
  CHECK(close(oracle::bessel_i(0, 2), kI0of2, 1e-14));
  CHECK(close(oracle::bessel_k0(2), kK0of2, 1e-12));
  CHECK(close(oracle::expint_e1(2), kE1of2, 1e-13));
  CHECK(close(oracle::airy_ai(-1), kAiOfMinus1, 1e-13));
  CHECK(close(oracle::airy_ai(2), kAiOf2, 1e-10));
  CHECK(close(oracle::bessel_i(0.5, 1), 0.937674888245487646717262884391, 1e-14));
}

TEST_CASE("log_gamma") {
  CHECK(std::abs(log_gamma(cplx(1.0))) < 1e-15);
  CHECK(close(log_gamma(cplx(5.0)).real(), std::log(24.0), 1e-14));
  CHECK(close(log_gamma(cplx(0.5)).real(), 0.5 * std::log(std::numbers::pi), 1e-14));
  CHECK(close(log_gamma(7.3), std::lgamma(7.3), 1e-14));
  CHECK(close(log_gamma(0.2), std::lgamma(0.2), 1e-14));
  cplx z(0.3, 2.5);
  CHECK(std::abs(gamma(z + 1.0) - z * gamma(z)) < 1e-14 * std::abs(gamma(z + 1.0)));
  CHECK_THROWS_AS(log_gamma(cplx(0.0)), DomainError);
  CHECK_THROWS_AS(log_gamma(cplx(-3.0)), DomainError);
}

TEST_CASE("pochhammer and binomial") {
  CHECK(pochhammer(2.5, 0) == 1.0);
  CHECK(pochhammer(1.0, 4) == 24.0);
  CHECK(pochhammer(0.5, 2) == 0.75);
  for (int k = 0; k < 10; ++k) {
    double a = 0.37;
    CHECK(pochhammer(a, k + 1) == pochhammer(a, k) * (a + k));
  }
  CHECK(binomial(5, 2) == 10.0);
  CHECK(binomial(40, 20) == 137846528820.0);
  CHECK(close(binomial(60, 30), 1.1826458156486142e17, 1e-12));
}

TEST_CASE("density_value") {
  CHECK(density_value(BetaDensity{0, 1}, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(close(density_value(GammaDensity{0}, 2.0), std::exp(-2.0), 1e-15));
  CHECK(density_value(GaussianDensity{}, 0.0) == 1.0);
  CHECK_THROWS_AS(density_value(BetaDensity{-2, 1}, 0.3), DomainError);
  CHECK_THROWS_AS(density_value(GammaDensity{-1.5}, 1.0), DomainError);
}

TEST_CASE("be_value") {
  CHECK(close(be_value(1, 0, 1, 1, 1), std::exp(-1.0) * kI0of2, 1e-13));
  for (double x : {0.1, 0.5, 1.0, 3.0}) CHECK(close(be_value(0, 0, 1, 1, x), std::exp(1.0 - x), 1e-13));
  CHECK(std::abs(be_value(1, 0, 1, 1, 1e-8) - 1.0) < 1e-6);
  for (double x : {0.2, 1.0, 2.5, 7.0})
    for (double a : {0.0, 0.5, 2.0}) {
      double c = 1.7, b = 0.8;
      double ref = std::exp(b) * std::pow(x / c, a) * std::exp(-x / c) / (c * std::tgamma(a + 1));
      CHECK(close(be_value(0, a, b, c, x), ref, 1e-12));
    }
  for (double x : {0.3, 1.0, 4.0}) CHECK(close(be_value(1, 0.5, 0.7, 2.0, x), oracle::be1_from_bessel(0.5, 0.7, 2.0, x), 1e-12));
}

TEST_CASE("ai_value") {
  CHECK(close(ai_value(0, 1, 0), 1.0 / (2 * std::sqrt(std::numbers::pi)), 1e-10));
  for (double c : {0.5, 1.0, 2.0})
    for (double x : {-1.0, 0.0, 1.0}) {
      double ref = std::exp(-x * x / (4 * c)) / (2 * std::sqrt(std::numbers::pi * c));
      CHECK(std::abs(ai_value(0, c, x) - ref) < 1e-10);
    }
  CHECK(std::abs(ai_value(1, 1.0 / 3.0, 1) - kAiOfMinus1) < 1e-10);
  CHECK(std::abs(ai_value(1, 0.5, 0.4) - oracle::ai1_from_airy(0.5, 0.4)) < 1e-10);
  QuadratureConfig cfg;
  auto mass = integrate(RealFn([](double x) { return ai_value(0, 0.8, x); }), -kInf, kInf, cfg);
  CHECK(std::abs(mass.value - 1.0) < 1e-8);
}

TEST_CASE("closed transforms") {
  CHECK(std::abs(closed_mellin(GammaDensity{0}, 3.0) - 2.0) < 1e-14);
  CHECK(std::abs(closed_mellin(BetaDensity{0, 1}, 2.0) - 0.5) < 1e-15);
  CHECK(std::abs(closed_mellin(BetaDensity{1, 3}, 2.0) - 1.0 / 12) < 1e-15);
  CHECK(std::abs(closed_laplace(GammaDensity{0}, 1.0) - 0.5) < 1e-15);
  CHECK(std::abs(closed_laplace(GaussianDensity{}, 1e-12) - std::sqrt(std::numbers::pi)) < 1e-10);
  CHECK(std::abs(closed_laplace(BeDensity{1, 0, 1, 1}, 1e-12) - std::exp(1.0)) < 1e-10);
  CHECK_THROWS_AS(closed_mellin(GaussianDensity{}, 2.0), DomainError);
  CHECK_THROWS_AS(closed_laplace(BetaDensity{0, 1}, 2.0), DomainError);
}

TEST_CASE("closed transforms agree with quadrature") {
  QuadratureConfig cfg;
  std::vector<DensityId> mellin_ids{BetaDensity{0, 1}, BetaDensity{1, 3}, BetaDensity{0.5, 2.5}, GammaDensity{0},
                                    GammaDensity{1.5}};
  std::vector<DensityId> laplace_ids{GammaDensity{0}, GammaDensity{2}, GaussianDensity{}, BeDensity{1, 0, 1, 1},
                                     BeDensity{1, 0.5, 0.7, 2}, AiDensity{0, 1}};
  for (double s : {0.6, 1.3, 2.7, 4.9}) {
    for (const auto& id : mellin_ids) {
      CAPTURE(to_string(id));
      cplx ref = closed_mellin(id, s);
      CHECK(std::abs(mellin_numeric(id, s, cfg).value - ref) <= 1e-8 * std::abs(ref));
    }
    for (const auto& id : laplace_ids) {
      CAPTURE(to_string(id));
      cplx ref = closed_laplace(id, s);
      CHECK(std::abs(laplace_numeric(id, s, cfg).value - ref) <= 1e-8 * std::abs(ref));
    }
  }
}

TEST_CASE("density text form round-trips") {
  for (const char* text : {"beta:1,3", "gamma:0.5", "gauss", "be:1,0.5,0.7,2", "ai:1,0.5"}) {
    CHECK(to_string(parse_density(text)) == text);
  }
  CHECK_THROWS_AS(parse_density("beta:1"), DomainError);
  CHECK_THROWS_AS(parse_density("cauchy"), DomainError);
  auto s = support_of(GaussianDensity{});
  CHECK(std::isinf(s.lo));
}
