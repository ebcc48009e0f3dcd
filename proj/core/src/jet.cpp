#include "ffmop/jet.hpp"

#include <algorithm>

#include "ffmop/error.hpp"

namespace ffmop::jet {

namespace {
cseries fit(const cseries& a, int order) {
  cseries r(order + 1, 0.0);
  for (int k = 0; k <= order && k < static_cast<int>(a.size()); ++k) r[k] = a[k];
  return r;
}
}  // namespace

cseries mul(const cseries& a, const cseries& b, int order) {
  cseries r(order + 1, 0.0);
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
  return r;
}

cseries reciprocal(const cseries& a0, int order) {
  const cseries a = fit(a0, order);
  if (a[0] == 0.0) throw DomainError("jet reciprocal: zero constant term");
  cseries r(order + 1, 0.0);
  r[0] = 1.0 / a[0];
  for (int k = 1; k <= order; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += a[j] * r[k - j];
    r[k] = -acc / a[0];
  }
  return r;
}

cseries exp(const cseries& a0, int order) {
  // r' = a' r, started from exp(a[0]).
  const cseries a = fit(a0, order);
  cseries r(order + 1, 0.0);
  r[0] = std::exp(a[0]);
  for (int k = 1; k <= order; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * r[k - j];
    r[k] = acc / static_cast<double>(k);
  }
  return r;
}

cseries integrate(const cseries& a, int order) {
  cseries r(order + 1, 0.0);
  for (int k = 1; k <= order && k - 1 < static_cast<int>(a.size()); ++k) r[k] = a[k - 1] / static_cast<double>(k);
  return r;
}

cseries inverse_linear(std::complex<double> b, std::complex<double> t0, int order) {
  const std::complex<double> base = t0 + b;
  if (base == 0.0) throw DomainError("jet: pole at expansion point");
  cseries r(order + 1, 0.0);
  std::complex<double> term = 1.0 / base;
  for (int k = 0; k <= order; ++k) {
    r[k] = term;
    term *= -1.0 / base;
  }
  return r;
}

cseries linear(std::complex<double> a, std::complex<double> t0, int order) {
  cseries r(order + 1, 0.0);
  r[0] = t0 + a;
  if (order >= 1) r[1] = 1.0;
  return r;
}

cseries pow_int(const cseries& a, int k, int order) {
  cseries r(order + 1, 0.0);
  r[0] = 1.0;
  for (int i = 0; i < k; ++i) r = mul(r, a, order);
  return r;
}

}  // namespace ffmop::jet
