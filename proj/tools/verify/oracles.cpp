#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace ffmop::oracle {

double bessel_i(double nu, double x) {
  const double h = 0.5 * x;
  double term = std::pow(h, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= h * h / (k * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_k0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, harmonic = 0.0;
  double i0 = 1.0, tail = 0.0;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    tail += term * harmonic;
    if (term * std::max(1.0, harmonic) < 1e-18 * i0) break;
  }
  return -(std::log(0.5 * x) + kEulerGamma) * i0 + tail;
}

double expint_e1(double x) {
  double sum = 0.0, term = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= -x / k;
    sum += term / k;
    if (std::abs(term / k) < 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return -kEulerGamma - std::log(x) - sum;
}

double airy_ai(double x) {
  // Ai(0) and -Ai'(0).
  constexpr double c1 = 0.35502805388781723926, c2 = 0.25881940379280679840;
  double f = 1.0, g = x, tf = 1.0, tg = x;
  const double x3 = x * x * x;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
    tg *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
    f += tf;
    g += tg;
    if (std::abs(tf) + std::abs(tg) < 1e-18 * (std::abs(f) + std::abs(g))) break;
  }
  return c1 * f - c2 * g;
}

namespace {

Poly recurrence(int n, const std::vector<double>& alpha, const std::vector<double>& beta) {
  Poly prev{}, cur{1.0};
  const Poly x{0.0, 1.0};
  for (int k = 0; k < n; ++k) {
    Poly next = (x - Poly{alpha[k]}) * cur;
    if (k > 0) next = next - beta[k] * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

Poly laguerre_monic(int n, double a) {
  std::vector<double> al(n + 1), be(n + 1);
  for (int k = 0; k <= n; ++k) {
    al[k] = 2.0 * k + a + 1.0;
    be[k] = k * (k + a);
  }
  return recurrence(n, al, be);
}

Poly hermite_monic(int n) {
  std::vector<double> al(n + 1, 0.0), be(n + 1);
  for (int k = 0; k <= n; ++k) be[k] = 0.5 * k;
  return recurrence(n, al, be);
}

Poly jacobi_monic_01(int n, double a, double b) {
  // Jacobi on [-1,1] with weight (1-t)^b (1+t)^a, mapped by t = 2x - 1.
  const double al = b, bt = a;
  std::vector<double> A(n + 1), B(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    const double s = 2.0 * k + al + bt;
    double bk;
    if (k == 0) bk = (bt - al) / (al + bt + 2.0);
    else bk = (bt * bt - al * al) / (s * (s + 2.0));
    A[k] = 0.5 * (1.0 + bk);
    if (k == 1) {
      B[k] = 4.0 * (1.0 + al) * (1.0 + bt) / ((2.0 + al + bt) * (2.0 + al + bt) * (3.0 + al + bt)) / 4.0;
    } else if (k > 1) {
      B[k] = 4.0 * k * (k + al) * (k + bt) * (k + al + bt) / (s * s * (s + 1.0) * (s - 1.0)) / 4.0;
    }
  }
  return recurrence(n, A, B);
}

double be1_from_bessel(double a, double b, double c, double x) {
  const double t = x / c;
  return std::exp(-t) / c * std::pow(t / b, 0.5 * a) * bessel_i(a, 2.0 * std::sqrt(b * t));
}

double ai1_from_airy(double c, double x) {
  const double k = std::cbrt(3.0 * c);
  return airy_ai(-x / k) / k;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace ffmop::oracle
