#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "ffmop/quadrature.hpp"
#include "ffmop/specialfn.hpp"

namespace ffmop {

enum class TransformKind { Mellin, Laplace };

struct TransformResult {
  cplx value;
  double est_error = 0.0;
  int nodes_used = 0;
  Scheme scheme = Scheme::AdaptiveInterval;
};

using ContourFn = std::function<cplx(cplx)>;

inline constexpr Support kHalfLine{0.0, kInf, 0.0, 0.0};
inline constexpr Support kRealLine{-kInf, kInf, 0.0, 0.0};

// int_0^inf f(x) x^{s-1} dx, computed as int f(e^u) e^{su} du.
TransformResult mellin_numeric(const RealFn& f, cplx s, const QuadratureConfig& cfg,
                               const Support& supp = kHalfLine);
TransformResult mellin_numeric(const DensityId& id, cplx s, const QuadratureConfig& cfg);

// Bilateral int f(x) e^{-sx} dx.
TransformResult laplace_numeric(const RealFn& f, cplx s, const QuadratureConfig& cfg,
                                const Support& supp = kRealLine);
TransformResult laplace_numeric(const DensityId& id, cplx s, const QuadratureConfig& cfg);

// int_0^inf f(t) g(x/t) dt/t with integration limits clipped to the supports.
double mellin_convolve(const RealFn& f, const RealFn& g, double x, const QuadratureConfig& cfg,
                       const Support& fs = kHalfLine, const Support& gs = kHalfLine);
// int f(t) g(x-t) dt with integration limits clipped to the supports.
double laplace_convolve(const RealFn& f, const RealFn& g, double x, const QuadratureConfig& cfg,
                        const Support& fs = kRealLine, const Support& gs = kRealLine);

// Trapezoid rule on Re s = contour_re, |Im s| <= cfg.contour_truncation,
// starting from cfg.contour_nodes intervals and doubling until successive
// estimates agree. The real part of the result is the function value.
TransformResult inverse_mellin(const ContourFn& F, double contour_re, double x, const QuadratureConfig& cfg);
TransformResult inverse_laplace(const ContourFn& F, double contour_re, double x, const QuadratureConfig& cfg);

struct DerivativeReport {
  double max_residual = 0.0;
  std::vector<double> residuals;
};

// Mellin: M[D^r f](s) against s^r M f(s) with (Df)(x) = -x f'(x).
// Laplace: L[f^(r)](s) against s^r L f(s).
// Derivatives by nested five-point central differences with step
// 1e-3 * scale (in log x for Mellin).
DerivativeReport check_derivative_identity(TransformKind kind, const RealFn& f, int r,
                                           const std::vector<cplx>& s_grid,
                                           const QuadratureConfig& cfg = {},
                                           std::optional<Support> supp = std::nullopt,
                                           double scale = 1.0);

}  // namespace ffmop
