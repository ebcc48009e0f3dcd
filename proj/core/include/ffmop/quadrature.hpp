#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <string_view>

namespace ffmop {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Scheme { AdaptiveInterval, MappedHalfline, MappedRealline };

std::string to_string(Scheme s);
Scheme parse_scheme(std::string_view text);

struct QuadratureConfig {
  // Default panel scheme. The forward transforms pick the scheme that fits
  // their integration domain and record it in their results.
  Scheme scheme = Scheme::AdaptiveInterval;
  double abs_tol = 1e-15;
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
  double contour_truncation = 200.0;
  int contour_nodes = 256;

  void validate() const;  // throws DomainError
};

// Integration range with optional algebraic endpoint behaviour hints:
// f(x) ~ (x - lo)^lo_exponent near lo and (hi - x)^hi_exponent near hi.
struct Support {
  double lo = 0.0;
  double hi = kInf;
  double lo_exponent = 0.0;
  double hi_exponent = 0.0;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
  int panels = 0;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(double)>;

// Adaptive 21-point Gauss-Kronrod on [lo, hi]; infinite ends are mapped
// rationally onto a finite interval. Throws NumericalError when the panel
// budget is exhausted before the tolerance is met.
QuadResult<double> integrate(const RealFn& f, double lo, double hi, const QuadratureConfig& cfg);
QuadResult<cplx> integrate(const ComplexFn& f, double lo, double hi, const QuadratureConfig& cfg);

// As integrate(), but splits the range and applies power substitutions at
// endpoints flagged as singular in `supp`.
QuadResult<double> integrate_on(const RealFn& f, const Support& supp, const QuadratureConfig& cfg);
QuadResult<cplx> integrate_on(const ComplexFn& f, const Support& supp, const QuadratureConfig& cfg);

}  // namespace ffmop
