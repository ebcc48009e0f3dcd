#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace ffmop {

using cplx = std::complex<double>;

// Dense real polynomial, coeffs[k] is the coefficient of x^k. Trailing
// zeros are removed, so the zero polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<double> c);
  explicit Poly(std::vector<double> c);

  const std::vector<double>& coeffs() const noexcept { return c_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const noexcept { return c_.empty(); }
  double operator[](int k) const noexcept { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : 0.0; }
  double leading() const noexcept { return c_.empty() ? 0.0 : c_.back(); }

  static Poly monomial(int k, double value = 1.0);

  friend Poly operator+(const Poly& p, const Poly& q);
  friend Poly operator-(const Poly& p, const Poly& q);
  friend Poly operator*(const Poly& p, const Poly& q);
  friend Poly operator*(double s, const Poly& p);
  friend bool operator==(const Poly& p, const Poly& q) = default;

 private:
  void normalize();
  std::vector<double> c_;
};

// (p boxtimes_n q)[k] = p[k] q[k] / ((-1)^{n-k} C(n,k)).
Poly ff_mul_conv(const Poly& p, const Poly& q, int n);
// (p boxplus_n q)(x) = (1/n!) sum_k p^{(k)}(x) q^{(n-k)}(0).
Poly ff_add_conv(const Poly& p, const Poly& q, int n);

Poly poly_derivative(const Poly& p);
double poly_eval(const Poly& p, double x);
cplx poly_eval(const Poly& p, cplx x);

// prod (x - r_i), multiplied in the given order.
Poly from_roots(const std::vector<double>& roots);

// Aberth-Ehrlich simultaneous iteration. Each returned root satisfies
// |p(z)| <= tol * ||p||_1 * max(1,|z|)^deg.
std::vector<cplx> roots(const Poly& p, double tol = 1e-12);

// Largest |p[k] - q[k]| over all k.
double max_coeff_diff(const Poly& p, const Poly& q);

}  // namespace ffmop
