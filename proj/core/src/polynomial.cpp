#include "ffmop/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ffmop/error.hpp"
#include "ffmop/specialfn.hpp"

namespace ffmop {

Poly::Poly(std::initializer_list<double> c) : c_(c) { normalize(); }

Poly::Poly(std::vector<double> c) : c_(std::move(c)) { normalize(); }

void Poly::normalize() {
  for (double& v : c_) {
    if (!std::isfinite(v)) throw DomainError("Poly: non-finite coefficient");
    v += 0.0;  // -0 becomes +0
  }
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Poly Poly::monomial(int k, double value) {
  std::vector<double> c(k + 1, 0.0);
  c[k] = value;
  return Poly(std::move(c));
}

Poly operator+(const Poly& p, const Poly& q) {
  std::vector<double> c(std::max(p.c_.size(), q.c_.size()), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = p[static_cast<int>(k)] + q[static_cast<int>(k)];
  return Poly(std::move(c));
}

Poly operator-(const Poly& p, const Poly& q) { return p + (-1.0) * q; }

Poly operator*(const Poly& p, const Poly& q) {
  if (p.is_zero() || q.is_zero()) return Poly();
  std::vector<double> c(p.c_.size() + q.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.c_.size(); ++i)
    for (std::size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
  return Poly(std::move(c));
}

Poly operator*(double s, const Poly& p) {
  std::vector<double> c = p.c_;
  for (double& v : c) v *= s;
  return Poly(std::move(c));
}

namespace {

void check_degrees(const Poly& p, const Poly& q, int n, const char* who) {
  if (n < 1) throw DomainError(std::string(who) + ": n must be >= 1");
  if (p.degree() > n || q.degree() > n)
    throw DomainError(std::string(who) + ": degree exceeds n = " + std::to_string(n));
}

}  // namespace

Poly ff_mul_conv(const Poly& p, const Poly& q, int n) {
  check_degrees(p, q, n, "ff_mul_conv");
  std::vector<double> c(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const double sign = (n - k) % 2 == 0 ? 1.0 : -1.0;
    c[k] = p[k] * (q[k] / (sign * binomial(n, k)));
  }
  return Poly(std::move(c));
}

Poly ff_add_conv(const Poly& p, const Poly& q, int n) {
  check_degrees(p, q, n, "ff_add_conv");
  // The k-th term is q[n-k]/C(n,k) * sum_j C(j,k) p[j] x^{j-k}.
  std::vector<double> c(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const double qk = q[n - k];
    if (qk == 0.0) continue;
    const double w = qk / binomial(n, k);
    for (int j = k; j <= p.degree(); ++j) c[j - k] += w * (binomial(j, k) * p[j]);
  }
  return Poly(std::move(c));
}

Poly poly_derivative(const Poly& p) {
  if (p.degree() < 1) return Poly();
  std::vector<double> c(p.degree());
  for (int k = 1; k <= p.degree(); ++k) c[k - 1] = k * p[k];
  return Poly(std::move(c));
}

double poly_eval(const Poly& p, double x) {
  double acc = 0.0;
  for (int k = p.degree(); k >= 0; --k) acc = acc * x + p[k];
  return acc;
}

cplx poly_eval(const Poly& p, cplx x) {
  cplx acc = 0.0;
  for (int k = p.degree(); k >= 0; --k) acc = acc * x + p[k];
  return acc;
}

Poly from_roots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return Poly(std::move(c));
}

std::vector<cplx> roots(const Poly& p, double tol) {
  const int n = p.degree();
  if (n < 1) throw DomainError("roots: degree must be >= 1");
  const double lead = p.leading();
  double radius = 0.0, norm = 0.0;
  for (int k = 0; k <= n; ++k) {
    norm += std::abs(p[k]);
    if (k < n) radius = std::max(radius, std::abs(p[k] / lead));
  }
  radius += 1.0;
  const Poly dp = poly_derivative(p);

  std::vector<cplx> z(n);
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + golden) / n + 0.4;
    z[k] = std::polar(radius, theta);
  }

  auto residual_ok = [&](cplx w) {
    return std::abs(poly_eval(p, w)) <= tol * norm * std::pow(std::max(1.0, std::abs(w)), n);
  };

  int settled_iters = 0;
  for (int iter = 0; iter < 200; ++iter) {
    double max_step = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx pv = poly_eval(p, z[k]);
      if (pv == 0.0) continue;
      const cplx ratio = pv / poly_eval(dp, z[k]);
      cplx repulsion = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    const bool all_ok = std::all_of(z.begin(), z.end(), residual_ok);
    if (all_ok) {
      ++settled_iters;
      if (max_step < 1e-15 || settled_iters >= 4) return z;
    } else {
      settled_iters = 0;
    }
  }
  if (std::all_of(z.begin(), z.end(), residual_ok)) return z;
  throw NumericalError("roots: Aberth iteration did not converge in 200 iterations");
}

double max_coeff_diff(const Poly& p, const Poly& q) {
  double m = 0.0;
  for (int k = 0; k <= std::max(p.degree(), q.degree()); ++k) m = std::max(m, std::abs(p[k] - q[k]));
  return m;
}

}  // namespace ffmop
