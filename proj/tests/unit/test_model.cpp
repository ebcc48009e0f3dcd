#include <cmath>

#include "doctest.h"
#include "ffmop/error.hpp"
#include "ffmop/model.hpp"
#include "ffmop/mop.hpp"
#include "test_helpers.hpp"

using namespace ffmop;

TEST_CASE("parser shapes and canonical form") {
  auto m = parse_model("ssv(prod(ginibre(3,3), ginibre(3,3)))");
  CHECK(m.kind == EnsembleModel::Kind::Ssv);
  CHECK(m.yields_points());
  CHECK(m.rows == 3);
  CHECK(parse_model(m.to_string()).to_string() == m.to_string());
  m = parse_model("ev(sum(gue(2,c=0.5), lue(2,a=1,c=2)))");
  CHECK(m.rows == 2);
  CHECK(parse_model(m.to_string()).to_string() == m.to_string());
  m = parse_model("dilate(2, gue(3))");
  CHECK_FALSE(m.yields_points());
  CHECK(m.hermitian);
  m = parse_model("ginibre(2,4)");
  CHECK(m.rows == 2);
  CHECK(m.cols == 4);
}

TEST_CASE("parser errors") {
  CHECK_THROWS_AS(parse_model("ev(sum(gue(2), gue(3)))"), DomainError);
  CHECK_THROWS_AS(parse_model("ev(ginibre(2,3))"), DomainError);
  CHECK_THROWS_AS(parse_model("gue(2"), DomainError);
  CHECK_THROWS_AS(parse_model("wishart(2)"), DomainError);
  CHECK_THROWS_AS(parse_model("gue(2,q=1)"), DomainError);
  CHECK_THROWS_AS(parse_model("jue(2,1)"), DomainError);
  CHECK_THROWS_AS(parse_model("dilate(-1, gue(2))"), DomainError);
  CHECK_THROWS_AS(parse_model("sum(gue(2))"), DomainError);
}

TEST_CASE("sample_points") {
  RngState rng(11);
  auto pts = sample_points(parse_model("ev(jue(3,1,3))"), rng);
  CHECK(pts.size() == 3);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
  pts = sample_points(parse_model("ev(shift(5, gue(2)))"), rng);
  CHECK(pts.size() == 2);
  pts = sample_points(parse_model("ssv(prod(ginibre(2,2), ginibre(2,2)))"), rng);
  for (double x : pts) CHECK(x >= 0);
}

namespace {
void check_within(const CharPolyEstimate& e, const Poly& expect, double sigmas) {
  REQUIRE(e.coeffs.size() == static_cast<std::size_t>(expect.degree() + 1));
  for (std::size_t k = 0; k + 1 < e.coeffs.size(); ++k) {
    CAPTURE(k);
    CAPTURE(e.coeffs[k]);
    CAPTURE(e.stderrs[k]);
    CHECK(std::abs(e.coeffs[k] - expect[static_cast<int>(k)]) < sigmas * e.stderrs[k]);
  }
  CHECK(e.coeffs.back() == 1.0);
}
}  // namespace

TEST_CASE("expected characteristic polynomials") {
  std::uint64_t seed = 20261014;
  check_within(expected_char_poly(parse_model("ev(gue(1))"), 1, 100000, seed), Poly{0, 1}, 3);
  check_within(expected_char_poly(parse_model("ev(lue(1))"), 1, 100000, seed + 1), Poly{-1, 1}, 3);
  check_within(expected_char_poly(parse_model("ev(gue(2))"), 2, 100000, seed + 2), mop_adt(specs::gaussian(), 2), 3);
  check_within(expected_char_poly(parse_model("ev(lue(2))"), 2, 100000, seed + 3), mop_mdt(specs::lue(0), 2), 3);
}

TEST_CASE("estimates do not depend on thread count") {
  auto m = parse_model("ev(sum(gue(2), lue(2,a=1)))");
  auto a = expected_char_poly(m, 2, 5000, 99, 1);
  auto b = expected_char_poly(m, 2, 5000, 99, 3);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.stderrs == b.stderrs);
  CHECK(a.batches == (5000 + kBatchSize - 1) / kBatchSize);
  CHECK(a.batch_means == b.batch_means);
}
