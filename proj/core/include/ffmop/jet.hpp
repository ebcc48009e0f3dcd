#pragma once

#include <complex>
#include <vector>

namespace ffmop {

// Truncated Taylor series at `center`: coeffs[k] = f^{(k)}(center) / k!.
struct TaylorJet {
  double center = 0.0;
  std::vector<double> coeffs{1.0};
  int order() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

inline constexpr int kMaxJetOrder = 64;

// Series arithmetic on coefficient vectors truncated to a common order.
namespace jet {

using cseries = std::vector<std::complex<double>>;

cseries mul(const cseries& a, const cseries& b, int order);
cseries reciprocal(const cseries& a, int order);  // requires a[0] != 0
cseries exp(const cseries& a, int order);
cseries integrate(const cseries& a, int order);   // zero constant term
// Expansion of 1/(t + b) about t = t0.
cseries inverse_linear(std::complex<double> b, std::complex<double> t0, int order);
// Expansion of (t + a) about t = t0.
cseries linear(std::complex<double> a, std::complex<double> t0, int order);
cseries pow_int(const cseries& a, int k, int order);

}  // namespace jet
}  // namespace ffmop
