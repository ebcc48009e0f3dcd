#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ffmop/error.hpp"
#include "ffmop/rmt.hpp"
#include "ffmop/specialfn.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace ffmop;

namespace {
struct Moments {
  double mean = 0, var = 0, sem = 0;
};
Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= v.size();
  for (double x : v) m.var += (x - m.mean) * (x - m.mean);
  m.var /= v.size() - 1;
  m.sem = std::sqrt(m.var / v.size());
  return m;
}

cplx determinant(ComplexMatrix a) {
  int n = a.rows();
  cplx det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      cplx f = a(i, k) / a(k, k);
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

double unitarity_residual(const ComplexMatrix& u) {
  ComplexMatrix d = u.adjoint() * u;
  double r = 0;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j) r += std::norm(d(i, j) - (i == j ? 1.0 : 0.0));
  return std::sqrt(r);
}
}  // namespace

TEST_CASE("philox known answers") {
  auto z = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(z == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  auto f = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(f == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
}

TEST_CASE("rng determinism and streams") {
  RngState a(42, 3), b(42, 3), c(42, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);
  RngState u(1);
  for (int i = 0; i < 10000; ++i) {
    double x = u.uniform();
    CHECK((x > 0 && x < 1));
  }
  RngState g(5);
  std::vector<double> gs;
  for (int i = 0; i < 100000; ++i) gs.push_back(g.gamma(0.7));
  auto m = moments(gs);
  CHECK(std::abs(m.mean - 0.7) < 4 * m.sem);
  std::vector<double> ns;
  for (int i = 0; i < 100000; ++i) ns.push_back(g.normal());
  m = moments(ns);
  CHECK(std::abs(m.mean) < 4 * m.sem);
  CHECK(std::abs(m.var - 1) < 0.02);
}

TEST_CASE("ginibre") {
  RngState rng(1);
  auto g = sample_ginibre(rng, 3, 5);
  CHECK(g.rows() == 3);
  CHECK(g.cols() == 5);
  std::vector<double> mod2, re;
  for (int i = 0; i < 100000; ++i) {
    cplx z = sample_ginibre(rng, 1, 1)(0, 0);
    mod2.push_back(std::norm(z));
    re.push_back(z.real());
  }
  auto m = moments(mod2);
  CHECK(std::abs(m.mean - 1) < 3 * m.sem);
  m = moments(re);
  CHECK(std::abs(m.mean) < 3 * m.sem);
}

TEST_CASE("gue") {
  RngState rng(2);
  for (int n : {1, 3, 6}) {
    auto h = sample_gue(rng, n, 0.5);
    CHECK(h.is_hermitian(1e-15));
    CHECK(h.hermitian);
    CHECK(h.trace().imag() == 0.0);
  }
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) v.push_back(sample_gue(rng, 1, 0.5)(0, 0).real());
  auto m = moments(v);
  double var_sem = std::sqrt(2.0 / v.size()) * 0.5;
  CHECK(std::abs(m.var - 0.5) < 3 * var_sem);
}

TEST_CASE("lue") {
  RngState rng(3);
  auto w = sample_lue_matrix(rng, 3, 2);
  CHECK(w.is_hermitian());
  for (double x : hermitian_eigenvalues(w)) CHECK(x > 0);
  std::vector<double> v, vb;
  for (int i = 0; i < 100000; ++i) {
    v.push_back(sample_lue(rng, 1, 0.0)[0]);
    vb.push_back(sample_lue(rng, 1, 0.5)[0]);
  }
  auto m = moments(v);
  CHECK(std::abs(m.mean - 1) < 3 * m.sem);
  m = moments(vb);
  CHECK(std::abs(m.mean - 1.5) < 3 * m.sem);
  auto e = sample_lue(rng, 4, 0.3, 2.0);
  CHECK(std::is_sorted(e.begin(), e.end()));
}

TEST_CASE("jue truncation map") {
  auto t = jue_truncation(2, 0, 1);
  CHECK(t.unitary_size == 4);
  CHECK(t.block_rows == 2);
  CHECK(t.block_cols == 2);
  t = jue_truncation(2, 1, 3);
  CHECK(t.unitary_size == 6);
  CHECK(t.block_cols == 3);
  CHECK_THROWS_AS(jue_truncation(2, 1, 1), DomainError);
  CHECK_THROWS_AS(jue_truncation(2, -1, 1), DomainError);
}

TEST_CASE("jue") {
  RngState rng(4);
  for (auto [a, b] : {std::pair{0, 1}, std::pair{1, 3}, std::pair{2, 3}}) {
    std::vector<double> v;
    for (int i = 0; i < 100000; ++i) {
      auto e = sample_jue(rng, 1, a, b);
      CHECK((e[0] >= 0 && e[0] <= 1));
      v.push_back(e[0]);
    }
    // Mean of x^a (1-x)^{b-a-1} normalized on (0,1).
    double expect = (a + 1.0) / (b + 1.0);
    auto m = moments(v);
    CHECK(std::abs(m.mean - expect) < 3 * m.sem);
  }
  auto e = sample_jue(rng, 4, 1, 3);
  CHECK(std::is_sorted(e.begin(), e.end()));
}

TEST_CASE("haar unitary") {
  RngState rng(5);
  for (int n : {1, 2, 5, 8}) {
    auto u = sample_haar_unitary(rng, n);
    CHECK(unitarity_residual(u) < 1e-12);
    CHECK(std::abs(std::abs(determinant(u)) - 1) < 1e-12);
  }
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) v.push_back(std::norm(sample_haar_unitary(rng, 3)(0, 0)));
  auto m = moments(v);
  CHECK(std::abs(m.mean - 1.0 / 3) < 3 * m.sem);
}

TEST_CASE("eigensolvers") {
  CHECK(hermitian_eigenvalues(ComplexMatrix::diagonal({2, 1})) == std::vector<double>{1, 2});
  ComplexMatrix sx(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  auto e = hermitian_eigenvalues(sx);
  CHECK(std::abs(e[0] + 1) < 1e-14);
  CHECK(std::abs(e[1] - 1) < 1e-14);
  CHECK(std::abs(squared_singular_values(ComplexMatrix::diagonal({2}))[0] - 4) < 1e-14);
  RngState rng(6);
  for (double x : squared_singular_values(sample_haar_unitary(rng, 4))) CHECK(std::abs(x - 1) < 1e-12);
  for (int trial = 0; trial < 50; ++trial) {
    auto h = trial % 2 ? sample_gue(rng, 6, 0.5) : sample_lue_matrix(rng, 5, 1);
    auto ev = hermitian_eigenvalues(h);
    double sum = std::accumulate(ev.begin(), ev.end(), 0.0), sq = 0;
    for (double x : ev) sq += x * x;
    double fro = h.frobenius();
    CHECK(std::abs(sum - h.trace().real()) < 1e-10 * std::max(1.0, fro));
    CHECK(std::abs(sq - fro * fro) < 1e-10 * std::max(1.0, fro * fro));
  }
  std::vector<double> v;
  for (int i = 0; i < 100000; ++i) v.push_back(squared_singular_values(sample_ginibre(rng, 1, 1))[0]);
  auto m = moments(v);
  CHECK(std::abs(m.mean - 1) < 3 * m.sem);
}

TEST_CASE("direct polynomial-ensemble sampler") {
  RngState rng(7);
  auto pts = sample_pe_direct(rng, pe_from_density(GammaDensity{0}, 1), 100000);
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(p[0]);
  auto m = moments(v);
  CHECK(std::abs(m.mean - 1) < 3 * m.sem);

  pts = sample_pe_direct(rng, pe_from_density(GaussianDensity{}, 2), 50000);
  v.clear();
  for (const auto& p : pts) v.push_back(p[0] + p[1]);
  m = moments(v);
  CHECK(std::abs(m.mean) < 3 * m.sem);
  // E(x1 + x2)^2 = 2 E x^2 + 2 E x1 x2 = 1 for the two-point Hermite ensemble.
  CHECK(std::abs(m.var - 1.0) < 0.03);

  pts = sample_pe_direct(rng, pe_from_density(BetaDensity{1, 3}, 2), 50000);
  std::vector<double> direct, trunc;
  for (const auto& p : pts) direct.insert(direct.end(), p.begin(), p.end());
  for (int i = 0; i < 50000; ++i) {
    auto e = sample_jue(rng, 2, 1, 3);
    trunc.insert(trunc.end(), e.begin(), e.end());
  }
  // Total variation over 20 bins.
  std::vector<double> h1(20), h2(20);
  for (double x : direct) h1[std::min(19, int(x * 20))] += 1.0 / direct.size();
  for (double x : trunc) h2[std::min(19, int(x * 20))] += 1.0 / trunc.size();
  double tv = 0;
  for (int i = 0; i < 20; ++i) tv += 0.5 * std::abs(h1[i] - h2[i]);
  CHECK(tv < 0.02);
  CHECK(oracle::ks_statistic(direct, trunc) < 0.02);
}
