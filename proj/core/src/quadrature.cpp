#include "ffmop/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ffmop/error.hpp"

namespace ffmop {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478095, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  double resabs;
};

template <class T>
bool finite(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

template <class T, class G>
Panel<T> gk21(const G& g, double a, double b, int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fc = g(c);
  T kron = fc * kWgk[10];
  T gauss{};
  double resabs = std::abs(fc) * kWgk[10];
  for (int i = 0; i < 10; ++i) {
    const double dx = h * kXgk[i];
    T f1 = g(c - dx);
    T f2 = g(c + dx);
    kron += (f1 + f2) * kWgk[i];
    resabs += (std::abs(f1) + std::abs(f2)) * kWgk[i];
    if (i % 2 == 1) gauss += (f1 + f2) * kWg[i / 2];
  }
  evals += 21;
  if (!finite(kron)) throw NumericalError("quadrature: non-finite integrand (divergent integral?)");
  return {a, b, kron * h, std::abs((kron - gauss) * h), resabs * std::abs(h)};
}

template <class T, class G>
QuadResult<T> adaptive(const G& g, const std::vector<double>& breaks, const QuadratureConfig& cfg) {
  cfg.validate();
  QuadResult<T> out;
  std::vector<Panel<T>> live;
  std::vector<Panel<T>> settled;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    live.push_back(gk21<T>(g, breaks[i], breaks[i + 1], out.evaluations));
  auto by_error = [](const Panel<T>& x, const Panel<T>& y) { return x.error < y.error; };
  std::make_heap(live.begin(), live.end(), by_error);

  auto totals = [&](T& value, double& error) {
    value = T{};
    error = 0.0;
    for (const auto& p : live) value += p.value, error += p.error;
    for (const auto& p : settled) value += p.value, error += p.error;
  };

  T value;
  double error;
  totals(value, error);
  while (!live.empty()) {
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    if (error <= tol) break;
    std::pop_heap(live.begin(), live.end(), by_error);
    Panel<T> worst = live.back();
    live.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const bool cannot_split = !(mid > worst.a && mid < worst.b) ||
                              worst.error <= 50.0 * kEps * worst.resabs;
    if (cannot_split) {
      settled.push_back(worst);
      continue;
    }
    if (static_cast<int>(live.size() + settled.size()) + 2 > cfg.max_subdivisions) {
      totals(value, error);
      error += worst.error;
      throw NumericalError("quadrature: subdivision budget exhausted, error estimate " +
                               std::to_string(error),
                           error);
    }
    Panel<T> left = gk21<T>(g, worst.a, mid, out.evaluations);
    Panel<T> right = gk21<T>(g, mid, worst.b, out.evaluations);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    live.push_back(left);
    std::push_heap(live.begin(), live.end(), by_error);
    live.push_back(right);
    std::push_heap(live.begin(), live.end(), by_error);
  }
  // Re-sum in panel order so the result does not depend on heap history.
  std::vector<Panel<T>> all = live;
  all.insert(all.end(), settled.begin(), settled.end());
  std::sort(all.begin(), all.end(), [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
  out.value = T{};
  out.error = 0.0;
  for (const auto& p : all) out.value += p.value, out.error += p.error;
  out.panels = static_cast<int>(all.size());
  return out;
}

template <class T, class F>
QuadResult<T> integrate_impl(const F& f, double lo, double hi, const QuadratureConfig& cfg) {
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("integrate: NaN bound");
  if (lo == hi) return {};
  if (lo > hi) {
    auto r = integrate_impl<T>(f, hi, lo, cfg);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) {
    return adaptive<T>([&](double x) -> T { return f(x); }, {lo, hi}, cfg);
  }
  if (!lo_inf) {
    // x = lo + t/(1-t), t in [0,1)
    auto g = [&](double t) -> T {
      const double u = 1.0 - t;
      return f(lo + t / u) * (1.0 / (u * u));
    };
    return adaptive<T>(g, {0.0, 0.5, 1.0}, cfg);
  }
  if (!hi_inf) {
    auto g = [&](double t) -> T {
      const double u = 1.0 - t;
      return f(hi - t / u) * (1.0 / (u * u));
    };
    return adaptive<T>(g, {0.0, 0.5, 1.0}, cfg);
  }
  // x = t/(1-|t|), t in (-1,1); t = 0 is a panel break.
  auto g = [&](double t) -> T {
    const double u = 1.0 - std::abs(t);
    return f(t / u) * (1.0 / (u * u));
  };
  return adaptive<T>(g, {-1.0, -0.5, 0.0, 0.5, 1.0}, cfg);
}

template <class T, class F>
QuadResult<T> integrate_on_impl(const F& f, const Support& s, const QuadratureConfig& cfg) {
  if (!(s.lo < s.hi)) throw DomainError("integrate_on: empty support");
  const bool lo_sing = std::isfinite(s.lo) && s.lo_exponent != 0.0;
  const bool hi_sing = std::isfinite(s.hi) && s.hi_exponent != 0.0;
  if (!lo_sing && !hi_sing) return integrate_impl<T>(f, s.lo, s.hi, cfg);
  if ((lo_sing && s.lo_exponent <= -1.0) || (hi_sing && s.hi_exponent <= -1.0))
    throw DomainError("integrate_on: non-integrable endpoint exponent");

  // Split points: midpoint for a finite range, unit offset otherwise.
  double a = s.lo, b = s.hi;
  double m_lo, m_hi;
  if (std::isfinite(a) && std::isfinite(b)) {
    m_lo = m_hi = 0.5 * (a + b);
  } else if (std::isfinite(a)) {
    m_lo = m_hi = a + 1.0;
  } else {
    m_lo = m_hi = b - 1.0;
  }
  QuadratureConfig sub = cfg;
  sub.abs_tol = cfg.abs_tol / 3.0;

  QuadResult<T> total;
  auto add = [&](const QuadResult<T>& r) {
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.panels += r.panels;
  };
  // x = a + w v^p with p = 1/(1+alpha) turns (x-a)^alpha dx into a smooth
  // multiple of dv on v in (0,1].
  if (lo_sing) {
    const double w = m_lo - a;
    const double p = 1.0 / (1.0 + s.lo_exponent);
    auto g = [&, w, p](double v) -> T {
      if (v <= 0.0) return T{};
      const double x = a + w * std::pow(v, p);
      return f(x) * (w * p * std::pow(v, p - 1.0));
    };
    add(integrate_impl<T>(g, 0.0, 1.0, sub));
  } else {
    add(integrate_impl<T>(f, a, m_lo, sub));
  }
  if (hi_sing) {
    const double w = b - m_hi;
    const double p = 1.0 / (1.0 + s.hi_exponent);
    auto g = [&, w, p](double v) -> T {
      if (v <= 0.0) return T{};
      const double x = b - w * std::pow(v, p);
      return f(x) * (w * p * std::pow(v, p - 1.0));
    };
    add(integrate_impl<T>(g, 0.0, 1.0, sub));
  } else {
    add(integrate_impl<T>(f, m_hi, b, sub));
  }
  return total;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::AdaptiveInterval: return "adaptive-interval";
    case Scheme::MappedHalfline: return "mapped-halfline";
    case Scheme::MappedRealline: return "mapped-realline";
  }
  return "adaptive-interval";
}

Scheme parse_scheme(std::string_view text) {
  if (text == "adaptive-interval") return Scheme::AdaptiveInterval;
  if (text == "mapped-halfline") return Scheme::MappedHalfline;
  if (text == "mapped-realline") return Scheme::MappedRealline;
  throw DomainError("unknown quadrature scheme: " + std::string(text));
}

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("QuadratureConfig: tolerances must be > 0");
  if (max_subdivisions < 1) throw DomainError("QuadratureConfig: max_subdivisions must be >= 1");
  if (!(contour_truncation > 0.0)) throw DomainError("QuadratureConfig: contour_truncation must be > 0");
  if (contour_nodes < 16) throw DomainError("QuadratureConfig: contour_nodes must be >= 16");
}

QuadResult<double> integrate(const RealFn& f, double lo, double hi, const QuadratureConfig& cfg) {
  return integrate_impl<double>(f, lo, hi, cfg);
}
QuadResult<cplx> integrate(const ComplexFn& f, double lo, double hi, const QuadratureConfig& cfg) {
  return integrate_impl<cplx>(f, lo, hi, cfg);
}
QuadResult<double> integrate_on(const RealFn& f, const Support& supp, const QuadratureConfig& cfg) {
  return integrate_on_impl<double>(f, supp, cfg);
}
QuadResult<cplx> integrate_on(const ComplexFn& f, const Support& supp, const QuadratureConfig& cfg) {
  return integrate_on_impl<cplx>(f, supp, cfg);
}

}  // namespace ffmop
