#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ffmop/error.hpp"
#include "ffmop/specialfn.hpp"
#include "ffmop/weights.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace ffmop;
using ffmop::test::close;

namespace {
bool has_clause(const ValidityReport& r, const std::string& prefix) {
  for (const auto& v : r.violated)
    if (v.rfind(prefix, 0) == 0) return true;
  return false;
}
}  // namespace

TEST_CASE("step_line_index") {
  CHECK(step_line_index(5, 2).parts == std::vector<int>{3, 2});
  CHECK(step_line_index(7, 3).parts == std::vector<int>{3, 2, 2});
  CHECK(step_line_index(4, 4).parts == std::vector<int>{1, 1, 1, 1});
  for (int r = 1; r <= 4; ++r)
    for (int n = 0; n <= 12; ++n) {
      auto m = step_line_index(n, r);
      CHECK(m.valid());
      int sum = 0;
      for (int p : m.parts) sum += p;
      CHECK(sum == n);
      CHECK(m.parts.front() - m.parts.back() <= 1);
    }
}

TEST_CASE("structure checks") {
  CHECK_NOTHROW(check_structure(specs::lue(0)));
  MDTWeightSpec bad{1.0, {WeightTerm{0.0, 2, 0.0, 0}}, 0.0};
  CHECK_THROWS_AS(check_structure(bad), DomainError);
  MDTWeightSpec mixed{1.0, {WeightTerm{0.0, 0, 1.0, 0}, WeightTerm{0.0, 1, 1.0, 0}}, 0.0};
  CHECK_THROWS_AS(check_structure(mixed), DomainError);
  MDTWeightSpec neg{-1.0, {WeightTerm{0.0, 1, 0.0, 0}}, 0.0};
  CHECK_THROWS_AS(check_structure(neg), DomainError);
}

TEST_CASE("mdt transforms") {
  MDTWeightSpec g{1.0, {WeightTerm{0.0, 1, 0.0, 0}}, 0.0};
  CHECK(std::abs(mdt_omega_transform(g, 2, 3.0) - 2.0) < 1e-14);
  MDTWeightSpec beta{1.0, {WeightTerm{0.0, 1, 0.0, 1}}, 0.0};
  CHECK(std::abs(mdt_omega_transform(beta, 1, 2.0) - 0.5) < 1e-14);
  CHECK(std::abs(mdt_weight_transform(g, 1, 4.0) - 6.0) < 1e-13);
  CHECK(std::abs(mdt_weight_transform(beta, 1, 1.0) - 1.0) < 1e-14);

  MDTWeightSpec mix{1.3, {WeightTerm{0.5, 1, 1.0, 1}, WeightTerm{0.2, 1, 2.5, 1}}, 0.0};
  int n = 5;
  auto idx = step_line_index(n, 2);
  cplx s = 1.7;
  cplx expect = 1.3;
  for (int i = 0; i < 2; ++i) expect *= (s + mix.terms[i].a) / (s + mix.terms[i].b + double(idx.parts[i]));
  CHECK(std::abs(mdt_omega_transform(mix, n, s + 1.0) / mdt_omega_transform(mix, n, s) - expect) < 1e-13);
}

TEST_CASE("adt transforms") {
  auto g = specs::gaussian();
  for (double s : {0.3, 1.0, 2.2}) {
    CHECK(close(adt_omega_transform(g, 3, s).real(), std::exp(s * s / 4), 1e-14));
    CHECK(std::abs(adt_omega_transform(g, 3, s).imag()) < 1e-15);
  }
  ADTWeightSpec lt{-1.0, 0.0, {WeightTerm{0.0, 0, 1.0, 1}}, 0.0};
  CHECK(std::abs(adt_omega_transform(lt, 1, 1.0) - 0.25) < 1e-15);
  CHECK(std::abs(adt_weight_transform(lt, 1, 1.0) - 0.25) < 1e-15);
  cplx ratio = adt_weight_transform(g, 1, 1.0) / std::exp(0.25);
  CHECK(std::abs(ratio - 1.0) < 1e-14);
  CHECK(std::abs(closed_laplace(GaussianDensity{}, 1.0) / std::sqrt(std::numbers::pi) - std::exp(0.25)) < 1e-14);

  auto jet = adt_weight_transform_jet(specs::be1(1, 0.5, 1), 1, 0.8, 3);
  double h = 1e-4;
  cplx fd = (adt_weight_transform(specs::be1(1, 0.5, 1), 1, 0.8 + h) - adt_weight_transform(specs::be1(1, 0.5, 1), 1, 0.8 - h)) / (2 * h);
  CHECK(std::abs(jet[0] - adt_weight_transform(specs::be1(1, 0.5, 1), 1, 0.8)) < 1e-14);
  CHECK(std::abs(jet[1] - fd) < 1e-7);
}

TEST_CASE("reciprocal_laplace_jet") {
  auto J = reciprocal_laplace_jet(specs::gaussian(), 2, 4);
  std::vector<double> expect{1, 0, -0.25, 0, 1.0 / 32};
  REQUIRE(J.coeffs.size() == 5);
  for (int k = 0; k <= 4; ++k) CHECK(std::abs(J.coeffs[k] - expect[k]) < 1e-15);
  J = reciprocal_laplace_jet(specs::lue_type(0), 2, 2);
  CHECK(std::abs(J.coeffs[0] - 1) < 1e-15);
  CHECK(std::abs(J.coeffs[1] - 2) < 1e-15);
  CHECK(std::abs(J.coeffs[2] - 1) < 1e-15);
  J = reciprocal_laplace_jet(specs::gaussian_lue_mixture(), 2, 2);
  CHECK(std::abs(J.coeffs[0] - 1) < 1e-15);
  CHECK(std::abs(J.coeffs[1] - 2) < 1e-15);
  CHECK(std::abs(J.coeffs[2] - 0.75) < 1e-15);
  ADTWeightSpec origin{1.0, 0.0, {WeightTerm{0.0, 0, 0.0, 1}}, 0.0};
  CHECK_THROWS_AS(reciprocal_laplace_jet(origin, 1, 2), DomainError);
}

TEST_CASE("validate_mdt_spec") {
  MDTWeightSpec no_d1{1.0, {WeightTerm{0.0, 0, 0.0, 1}}, 0.0};
  auto r = validate_mdt_spec(no_d1);
  CHECK_FALSE(r.pass);
  CHECK(has_clause(r, "clause i"));
  r = validate_mdt_spec(specs::lue(-1.5));
  CHECK_FALSE(r.pass);
  CHECK(has_clause(r, "clause ii"));
  r = validate_mdt_spec(specs::lue(0));
  CHECK(r.pass);
  CHECK(r.verdict == "necessary-conditions-pass");
  CHECK(validate_mdt_spec(specs::jue(1, 3)).pass);
}

TEST_CASE("validate_adt_spec") {
  auto r = validate_adt_spec(specs::gaussian());
  CHECK(r.pass);
  CHECK(r.d == 1);
  CHECK(std::abs(r.alpha[1] - 0.25) < 1e-15);
  r = validate_adt_spec(ADTWeightSpec{2.0, 0.0, {WeightTerm{0.0, 0, 1.0, 1}}, 0.0});
  CHECK_FALSE(r.pass);
  CHECK(std::abs(r.beta_sum + 2.0) < 1e-15);
  CHECK(has_clause(r, "clause iii"));
  r = validate_adt_spec(ADTWeightSpec{0.5, 0.0, {WeightTerm{cplx(0.0, 1.0), 1, 0.0, 0}}, 0.0});
  CHECK_FALSE(r.pass);
  CHECK(has_clause(r, "imaginary-sum"));
  CHECK(validate_adt_spec(specs::lue_type(0.5)).pass);
  CHECK(validate_adt_spec(specs::be1(1, 0.5, 1)).pass);
  CHECK(validate_adt_spec(specs::gaussian(-0.5)).violated.size() >= 1);
}

TEST_CASE("weight_values") {
  std::vector<double> xs{0.1, 0.7, 2.0, 5.0};
  auto v = weight_values(specs::lue(0.5), 1, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(close(v[i], std::pow(xs[i], 0.5) * std::exp(-xs[i]), 1e-13));
  xs = {-1.5, 0.0, 0.4, 2.0};
  v = weight_values(specs::gaussian(), 1, xs);
  double ratio = v[1];
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(close(v[i] / ratio, std::exp(-xs[i] * xs[i]), 1e-12));
  v = weight_values(specs::gamma_product({0, 0}), 1, {1.0});
  CHECK(close(v[0], 2 * oracle::bessel_k0(2.0), 1e-6));
  CHECK(omega_function(specs::lue(1), 3).method == "closed:gamma");
  CHECK(weight_function(specs::jue(1, 3), 1).method == "closed:beta");
}
