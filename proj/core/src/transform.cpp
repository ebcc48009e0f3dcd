#include "ffmop/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ffmop/error.hpp"

namespace ffmop {

namespace {

constexpr double kPi = std::numbers::pi;

QuadResult<cplx> log_line_integral(const RealFn& f, cplx s, double u_lo, double u_hi, const QuadratureConfig& cfg) {
  // int f(e^u) e^{su} du; zero values short-circuit to avoid 0 * inf.
  ComplexFn g = [&](double u) -> cplx {
    const double x = std::exp(u);
    if (x == 0.0 || !std::isfinite(x)) return 0.0;
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * std::exp(s * u);
  };
  return integrate(g, u_lo, u_hi, cfg);
}

Scheme scheme_for(double lo, double hi) {
  if (std::isinf(lo) && std::isinf(hi)) return Scheme::MappedRealline;
  if (std::isinf(lo) || std::isinf(hi)) return Scheme::MappedHalfline;
  return Scheme::AdaptiveInterval;
}

TransformResult contour_trapezoid(const ContourFn& F, double c, double x, bool mellin, const QuadratureConfig& cfg) {
  cfg.validate();
  const double T = cfg.contour_truncation;
  const double lx = mellin ? std::log(x) : 0.0;
  auto kernel = [&](cplx s) { return mellin ? std::exp(-s * lx) : std::exp(s * x); };
  auto g = [&](double t) {
    const cplx s(c, t);
    return F(s) * kernel(s);
  };
  const cplx top = g(T), bottom = g(-T);
  if (std::max(std::abs(F(cplx(c, T))), std::abs(F(cplx(c, -T)))) >= cfg.abs_tol)
    throw NumericalError("contour inversion: insufficient decay at truncation height " + std::to_string(T),
                         std::max(std::abs(top), std::abs(bottom)));

  // Level with N/2 intervals first, then refine by midpoints.
  int N = std::max(cfg.contour_nodes / 2, 8);
  double h = 2.0 * T / N;
  cplx sum = 0.5 * (top + bottom);
  double abs_sum = 0.5 * (std::abs(top) + std::abs(bottom));
  for (int k = 1; k < N; ++k) {
    const cplx v = g(-T + k * h);
    sum += v;
    abs_sum += std::abs(v);
  }
  cplx est = h * sum / (2.0 * kPi);
  constexpr long long kMaxNodes = 1LL << 27;
  while (true) {
    cplx mid = 0.0;
    for (int k = 0; k < N; ++k) {
      const cplx v = g(-T + (k + 0.5) * h);
      mid += v;
      abs_sum += std::abs(v);
    }
    sum += mid;
    N *= 2;
    h *= 0.5;
    const cplx next = h * sum / (2.0 * kPi);
    const double diff = std::abs(next.real() - est.real());
    const double scale = h * abs_sum / (2.0 * kPi);
    const double tol = std::max({cfg.abs_tol, cfg.rel_tol * std::abs(next.real()), 1e-15 * scale});
    if (N >= cfg.contour_nodes && diff <= tol) {
      TransformResult r;
      r.value = next;
      r.est_error = diff + T * std::max(std::abs(top), std::abs(bottom)) / kPi;
      r.nodes_used = N + 1;
      r.scheme = Scheme::AdaptiveInterval;
      return r;
    }
    if (2LL * N > kMaxNodes)
      throw NumericalError("contour inversion: trapezoid refinement did not converge", diff);
    est = next;
  }
}

// Nested five-point central differences.
RealFn derivative(const RealFn& f, double h) {
  return [f, h](double x) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
  };
}

}  // namespace

TransformResult mellin_numeric(const RealFn& f, cplx s, const QuadratureConfig& cfg, const Support& supp) {
  if (supp.lo < 0.0 || !(supp.lo < supp.hi)) throw DomainError("mellin_numeric: support must lie in [0, inf)");
  const double u_lo = supp.lo > 0.0 ? std::log(supp.lo) : -kInf;
  TransformResult r;
  if (std::isfinite(supp.hi) && supp.hi_exponent != 0.0) {
    // Singular right end: exponential substitution up to hi/2, then a
    // power substitution in x on [hi/2, hi].
    const double mid = std::max(0.5 * supp.hi, supp.lo);
    auto lower = log_line_integral(f, s, u_lo, std::log(mid), cfg);
    ComplexFn g = [&](double x) -> cplx {
      const double fx = f(x);
      if (fx == 0.0) return 0.0;
      return fx * std::exp((s - 1.0) * std::log(x));
    };
    auto upper = integrate_on(g, Support{mid, supp.hi, 0.0, supp.hi_exponent}, cfg);
    r.value = lower.value + upper.value;
    r.est_error = lower.error + upper.error;
    r.nodes_used = lower.evaluations + upper.evaluations;
  } else {
    const double u_hi = std::isfinite(supp.hi) ? std::log(supp.hi) : kInf;
    auto q = log_line_integral(f, s, u_lo, u_hi, cfg);
    r.value = q.value;
    r.est_error = q.error;
    r.nodes_used = q.evaluations;
  }
  r.scheme = u_lo == -kInf ? Scheme::MappedRealline : Scheme::MappedHalfline;
  return r;
}

TransformResult mellin_numeric(const DensityId& id, cplx s, const QuadratureConfig& cfg) {
  const Support supp = support_of(id);
  if (supp.lo < 0.0) throw DomainError("mellin_numeric: density is not supported on the half line");
  return mellin_numeric([&](double x) { return density_value(id, x); }, s, cfg, supp);
}

TransformResult laplace_numeric(const RealFn& f, cplx s, const QuadratureConfig& cfg, const Support& supp) {
  ComplexFn g = [&](double x) -> cplx {
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * std::exp(-s * x);
  };
  auto q = integrate_on(g, supp, cfg);
  TransformResult r;
  r.value = q.value;
  r.est_error = q.error;
  r.nodes_used = q.evaluations;
  r.scheme = scheme_for(supp.lo, supp.hi);
  return r;
}

TransformResult laplace_numeric(const DensityId& id, cplx s, const QuadratureConfig& cfg) {
  return laplace_numeric([&](double x) { return density_value(id, x); }, s, cfg, support_of(id));
}

double mellin_convolve(const RealFn& f, const RealFn& g, double x, const QuadratureConfig& cfg,
                       const Support& fs, const Support& gs) {
  if (!(x > 0.0)) throw DomainError("mellin_convolve: x must be positive");
  const double t_lo = std::max(fs.lo, gs.hi == kInf ? 0.0 : x / gs.hi);
  const double t_hi = std::min(fs.hi, gs.lo > 0.0 ? x / gs.lo : kInf);
  if (!(t_lo < t_hi)) return 0.0;
  const double u_lo = t_lo > 0.0 ? std::log(t_lo) : -kInf;
  const double u_hi = std::isfinite(t_hi) ? std::log(t_hi) : kInf;
  RealFn h = [&](double u) {
    const double t = std::exp(u);
    if (t == 0.0 || !std::isfinite(t)) return 0.0;
    const double ft = f(t);
    if (ft == 0.0) return 0.0;
    return ft * g(x / t);
  };
  return integrate(h, u_lo, u_hi, cfg).value;
}

double laplace_convolve(const RealFn& f, const RealFn& g, double x, const QuadratureConfig& cfg,
                        const Support& fs, const Support& gs) {
  const double t_lo = std::max(fs.lo, x - gs.hi);
  const double t_hi = std::min(fs.hi, x - gs.lo);
  if (!(t_lo < t_hi)) return 0.0;
  RealFn h = [&](double t) {
    const double ft = f(t);
    if (ft == 0.0) return 0.0;
    return ft * g(x - t);
  };
  return integrate(h, t_lo, t_hi, cfg).value;
}

TransformResult inverse_mellin(const ContourFn& F, double contour_re, double x, const QuadratureConfig& cfg) {
  if (!(contour_re > 0.0)) throw DomainError("inverse_mellin: contour must lie in Re s > 0");
  if (!(x > 0.0)) throw DomainError("inverse_mellin: x must be positive");
  return contour_trapezoid(F, contour_re, x, true, cfg);
}

TransformResult inverse_laplace(const ContourFn& F, double contour_re, double x, const QuadratureConfig& cfg) {
  if (!(contour_re > 0.0)) throw DomainError("inverse_laplace: contour must lie in Re s > 0");
  return contour_trapezoid(F, contour_re, x, false, cfg);
}

DerivativeReport check_derivative_identity(TransformKind kind, const RealFn& f, int r,
                                           const std::vector<cplx>& s_grid, const QuadratureConfig& cfg,
                                           std::optional<Support> supp, double scale) {
  if (r < 1) throw DomainError("check_derivative_identity: r must be >= 1");
  if (!(scale > 0.0)) throw DomainError("check_derivative_identity: scale must be positive");
  // Finite-difference noise sits well above machine precision.
  QuadratureConfig qc = cfg;
  qc.rel_tol = std::max(cfg.rel_tol, 1e-10);
  qc.abs_tol = std::max(cfg.abs_tol, 1e-14);
  const double h = 1e-3 * scale;

  DerivativeReport rep;
  if (kind == TransformKind::Mellin) {
    const Support sp = supp.value_or(kHalfLine);
    // D acts as -d/du on u = log x.
    RealFn in_u = [f](double u) { return f(std::exp(u)); };
    RealFn d = in_u;
    for (int i = 0; i < r; ++i) {
      RealFn step = derivative(d, h);
      d = [step](double u) { return -step(u); };
    }
    RealFn dr = [d](double x) { return x > 0.0 ? d(std::log(x)) : 0.0; };
    for (cplx s : s_grid) {
      const cplx lhs = mellin_numeric(dr, s, qc, Support{sp.lo, sp.hi}).value;
      const cplx rhs = std::pow(s, r) * mellin_numeric(f, s, qc, sp).value;
      rep.residuals.push_back(std::abs(lhs - rhs) / std::abs(rhs));
    }
  } else {
    const Support sp = supp.value_or(kRealLine);
    RealFn d = f;
    for (int i = 0; i < r; ++i) d = derivative(d, h);
    for (cplx s : s_grid) {
      const cplx lhs = laplace_numeric(d, s, qc, Support{sp.lo, sp.hi}).value;
      const cplx rhs = std::pow(s, r) * laplace_numeric(f, s, qc, sp).value;
      rep.residuals.push_back(std::abs(lhs - rhs) / std::abs(rhs));
    }
  }
  for (double v : rep.residuals) rep.max_residual = std::max(rep.max_residual, v);
  return rep;
}

}  // namespace ffmop
