#include "ffmop/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ffmop/error.hpp"
#include "ffmop/specialfn.hpp"
#include "ffmop/transform.hpp"

namespace ffmop {

namespace {

using cpoly = std::vector<cplx>;  // lowest degree first

cpoly cpoly_mul(const cpoly& p, const cpoly& q) {
  cpoly r(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

cplx cpoly_eval(const cpoly& p, cplx x) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// prod (t + a_i)^{d1}
cpoly numerator(const std::vector<WeightTerm>& terms) {
  cpoly p{1.0};
  for (const auto& t : terms)
    if (t.d1 == 1) p = cpoly_mul(p, cpoly{t.a, 1.0});
  return p;
}

// prod (t + b_i)^{d2}
cpoly denominator(const std::vector<WeightTerm>& terms) {
  cpoly p{1.0};
  for (const auto& t : terms)
    if (t.d2 == 1) p = cpoly_mul(p, cpoly{cplx(t.b), 1.0});
  return p;
}

// N = quot * Q + rem with Q monic.
void long_divide(const cpoly& N, const cpoly& Q, cpoly& quot, cpoly& rem) {
  rem = N;
  const int dq = static_cast<int>(Q.size()) - 1;
  const int dn = static_cast<int>(N.size()) - 1;
  if (dn < dq) {
    quot.clear();
    return;
  }
  quot.assign(dn - dq + 1, 0.0);
  for (int k = dn; k >= dq; --k) {
    const cplx coef = rem[k];
    quot[k - dq] = coef;
    for (int i = 0; i <= dq; ++i) rem[k - dq + i] -= coef * Q[i];
  }
  rem.resize(std::max(dq, 1));
  if (dq == 0) rem.assign(1, 0.0);
}

bool is_gamma_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

cplx ipow(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

int count_d1(const std::vector<WeightTerm>& terms) {
  int p = 0;
  for (const auto& t : terms) p += t.d1;
  return p;
}

int count_d2(const std::vector<WeightTerm>& terms) {
  int q = 0;
  for (const auto& t : terms) q += t.d2;
  return q;
}

void check_bits(const std::vector<WeightTerm>& terms) {
  bool all_d1 = true, all_d2 = true;
  for (const auto& t : terms) {
    if ((t.d1 != 0 && t.d1 != 1) || (t.d2 != 0 && t.d2 != 1)) throw DomainError("weight spec: d1 and d2 must be 0 or 1");
    if (!std::isfinite(t.a.real()) || !std::isfinite(t.a.imag()) || !std::isfinite(t.b))
      throw DomainError("weight spec: non-finite parameter");
    all_d1 = all_d1 && t.d1 == 1;
    all_d2 = all_d2 && t.d2 == 1;
  }
  if (!terms.empty() && !all_d1 && !all_d2) throw DomainError("weight spec: need all d1 = 1 or all d2 = 1");
}

void check_index(int j, int r, const char* who) {
  if (j < 1 || j > r) throw DomainError(std::string(who) + ": j must lie in 1..r");
}

bool all_real_a(const std::vector<WeightTerm>& terms) {
  for (const auto& t : terms)
    if (t.d1 == 1 && t.a.imag() != 0.0) return false;
  return true;
}

}  // namespace

bool StepMultiIndex::valid() const {
  if (r < 1 || static_cast<int>(parts.size()) != r) return false;
  int sum = 0;
  for (int i = 0; i < r; ++i) {
    if (parts[i] < 0) return false;
    if (i > 0 && parts[i] > parts[i - 1]) return false;
    sum += parts[i];
  }
  return parts.back() >= parts.front() - 1 && sum == total;
}

StepMultiIndex step_line_index(int n, int r) {
  if (r < 1) throw DomainError("step_line_index: r must be >= 1");
  if (n < 0) throw DomainError("step_line_index: n must be >= 0");
  StepMultiIndex m;
  m.r = r;
  m.total = n;
  const int eta = n / r, j = n % r;
  m.parts.resize(r);
  for (int i = 0; i < r; ++i) m.parts[i] = i < j ? eta + 1 : eta;
  return m;
}

void check_structure(const MDTWeightSpec& spec) {
  check_bits(spec.terms);
  if (!(spec.c > 0.0)) throw DomainError("mdt spec: c must be positive");
  if (!(spec.strip_lo >= 0.0)) throw DomainError("mdt spec: strip_lo must be >= 0");
}

void check_structure(const ADTWeightSpec& spec) {
  check_bits(spec.terms);
  if (!std::isfinite(spec.c) || !std::isfinite(spec.s0)) throw DomainError("adt spec: non-finite parameter");
  if (!(spec.strip_lo >= 0.0)) throw DomainError("adt spec: strip_lo must be >= 0");
}

namespace specs {

MDTWeightSpec lue(double a, double c) { return MDTWeightSpec{c, {WeightTerm{a, 1, 0.0, 0}}, 0.0}; }

MDTWeightSpec jue(double a, double b, double c) { return MDTWeightSpec{c, {WeightTerm{a, 1, b - 1.0, 1}}, 0.0}; }

MDTWeightSpec gamma_product(const std::vector<double>& a) {
  MDTWeightSpec s;
  for (double ai : a) s.terms.push_back(WeightTerm{ai, 1, 0.0, 0});
  return s;
}

ADTWeightSpec gaussian(double c) { return ADTWeightSpec{c, 0.0, {WeightTerm{0.0, 1, 0.0, 0}}, 0.0}; }

ADTWeightSpec lue_type(double a) { return ADTWeightSpec{-a, 0.0, {WeightTerm{0.0, 0, 1.0, 1}}, 0.0}; }

ADTWeightSpec be1(double a, double beta, double scale) {
  const double b = 1.0 / scale;
  if (a != 0.0)
    return ADTWeightSpec{-a, 0.0, {WeightTerm{b + beta / (a * scale), 1, b, 1}, WeightTerm{0.0, 0, b, 1}}, 0.0};
  return ADTWeightSpec{-beta / scale, 0.0, {WeightTerm{0.0, 0, b, 1}, WeightTerm{0.0, 0, b, 1}}, 0.0};
}

ADTWeightSpec gaussian_lue_mixture() {
  return ADTWeightSpec{0.5, 0.0, {WeightTerm{2.0, 1, 1.0, 1}, WeightTerm{-1.0, 1, 0.0, 0}}, 0.0};
}

}  // namespace specs

cplx mdt_omega_transform(const MDTWeightSpec& spec, int n, cplx s) {
  check_structure(spec);
  if (n < 0) throw DomainError("mdt_omega_transform: n must be >= 0");
  cplx lg = s * std::log(spec.c);
  if (spec.r() > 0) {
    const StepMultiIndex idx = step_line_index(n, spec.r());
    for (int i = 0; i < spec.r(); ++i) {
      const auto& t = spec.terms[i];
      if (t.d1 == 1) lg += log_gamma(s + t.a);
      if (t.d2 == 1) {
        const cplx z = s + t.b + static_cast<double>(idx.parts[i]);
        if (is_gamma_pole(z)) return 0.0;
        lg -= log_gamma(z);
      }
    }
  }
  return std::exp(lg);
}

cplx mdt_weight_transform(const MDTWeightSpec& spec, int j, cplx s) {
  check_structure(spec);
  check_index(j, spec.r(), "mdt_weight_transform");
  cplx lg = s * std::log(spec.c);
  cplx tail = ipow(s, j - 1);
  for (int i = 0; i < spec.r(); ++i) {
    const auto& t = spec.terms[i];
    if (t.d1 == 1) lg += log_gamma(s + t.a);
    if (t.d2 == 1) {
      const cplx z = s + t.b;
      if (is_gamma_pole(z)) return 0.0;
      lg -= log_gamma(z);
      if (i < j) {
        if (z == 0.0) throw DomainError("mdt_weight_transform: pole of 1/(s+b)");
        tail /= z;
      }
    }
  }
  return std::exp(lg) * tail;
}

cplx adt_exponent(const ADTWeightSpec& spec, cplx s) {
  check_structure(spec);
  const cplx s0 = spec.s0;
  if (spec.c == 0.0 || spec.terms.empty()) return spec.c * (s - s0);
  std::vector<double> poles;
  for (const auto& t : spec.terms)
    if (t.d2 == 1) poles.push_back(t.b);
  // A pole -b on the segment [s0, s] makes the integral undefined.
  for (double b : poles) {
    const cplx p = -b, d = s - s0;
    const double len2 = std::norm(d);
    const double u = len2 > 0.0 ? std::clamp(((p - s0) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
    if (std::abs(s0 + u * d - p) <= 1e-14 * (1.0 + std::abs(p))) throw DomainError("adt transform: pole on integration segment");
  }
  std::vector<double> sorted = poles;
  std::sort(sorted.begin(), sorted.end());
  const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();

  const cpoly N = numerator(spec.terms), Q = denominator(spec.terms);
  if (distinct) {
    cpoly quot, rem;
    long_divide(N, Q, quot, rem);
    cplx acc = 0.0;
    // Polynomial part integrates termwise.
    for (std::size_t k = 0; k < quot.size(); ++k) {
      const double e = static_cast<double>(k + 1);
      acc += quot[k] * (std::pow(s, e) - std::pow(s0, e)) / e;
    }
    for (std::size_t i = 0; i < poles.size(); ++i) {
      cplx dq = 1.0;
      for (std::size_t k = 0; k < poles.size(); ++k)
        if (k != i) dq *= poles[k] - poles[i];
      const cplx res = cpoly_eval(N, -poles[i]) / dq;
      acc += res * std::log((s + poles[i]) / (s0 + poles[i]));
    }
    return spec.c * acc;
  }
  // Repeated poles: quadrature along the straight segment.
  const cplx d = s - s0;
  ComplexFn g = [&](double u) {
    const cplx t = s0 + u * d;
    return cpoly_eval(N, t) / cpoly_eval(Q, t) * d;
  };
  QuadratureConfig qc;
  qc.rel_tol = 1e-13;
  return spec.c * integrate(g, 0.0, 1.0, qc).value;
}

cplx adt_omega_transform(const ADTWeightSpec& spec, int n, cplx s) {
  cplx v = std::exp(adt_exponent(spec, s));
  if (spec.r() == 0) return v;
  const StepMultiIndex idx = step_line_index(n, spec.r());
  for (int i = 0; i < spec.r(); ++i) {
    const auto& t = spec.terms[i];
    if (t.d2 == 1) v /= ipow(s + t.b, idx.parts[i]);
  }
  return v;
}

cplx adt_weight_transform(const ADTWeightSpec& spec, int j, cplx s) {
  check_index(j, spec.r(), "adt_weight_transform");
  cplx v = std::exp(adt_exponent(spec, s)) * ipow(s, j - 1);
  for (int i = 0; i < j; ++i)
    if (spec.terms[i].d2 == 1) v /= s + spec.terms[i].b;
  return v;
}

jet::cseries adt_weight_transform_jet(const ADTWeightSpec& spec, int j, cplx s, int order) {
  check_index(j, spec.r(), "adt_weight_transform_jet");
  if (order < 0 || order > kMaxJetOrder) throw DomainError("jet order out of range");
  jet::cseries R(order + 1, 0.0);
  R[0] = 1.0;
  for (const auto& t : spec.terms) {
    if (t.d1 == 1) R = jet::mul(R, jet::linear(t.a, s, order), order);
    if (t.d2 == 1) R = jet::mul(R, jet::inverse_linear(t.b, s, order), order);
  }
  for (auto& v : R) v *= spec.c;
  jet::cseries out = jet::exp(jet::integrate(R, order), order);
  const cplx base = std::exp(adt_exponent(spec, s));
  for (auto& v : out) v *= base;
  out = jet::mul(out, jet::pow_int(jet::linear(0.0, s, order), j - 1, order), order);
  for (int i = 0; i < j; ++i)
    if (spec.terms[i].d2 == 1) out = jet::mul(out, jet::inverse_linear(spec.terms[i].b, s, order), order);
  return out;
}

TaylorJet reciprocal_laplace_jet(const ADTWeightSpec& spec, int n, int order) {
  check_structure(spec);
  if (order < 0 || order > kMaxJetOrder) throw DomainError("reciprocal_laplace_jet: order must lie in 0..64");
  for (const auto& t : spec.terms)
    if (t.d2 == 1 && t.b == 0.0) throw DomainError("reciprocal_laplace_jet: not analytic at origin");
  jet::cseries R(order + 1, 0.0);
  R[0] = 1.0;
  for (const auto& t : spec.terms) {
    if (t.d1 == 1) R = jet::mul(R, jet::linear(t.a, 0.0, order), order);
    if (t.d2 == 1) R = jet::mul(R, jet::inverse_linear(t.b, 0.0, order), order);
  }
  for (auto& v : R) v *= -spec.c;
  jet::cseries out = jet::exp(jet::integrate(R, order), order);
  if (spec.r() > 0) {
    const StepMultiIndex idx = step_line_index(n, spec.r());
    for (int i = 0; i < spec.r(); ++i) {
      const auto& t = spec.terms[i];
      if (t.d2 == 1) out = jet::mul(out, jet::pow_int(jet::linear(t.b, 0.0, order), idx.parts[i], order), order);
    }
  }
  TaylorJet tj;
  tj.center = 0.0;
  tj.coeffs.resize(order + 1);
  for (int k = 0; k <= order; ++k) tj.coeffs[k] = out[k].real();
  return tj;
}

ValidityReport validate_mdt_spec(const MDTWeightSpec& spec) {
  ValidityReport rep;
  try {
    check_structure(spec);
  } catch (const DomainError& e) {
    rep.violated.push_back(std::string("structure: ") + e.what());
  }
  bool all_d1 = true, all_d2 = true, re_ok = true;
  double im_sum = 0.0, diff_sum = 0.0;
  for (const auto& t : spec.terms) {
    all_d1 = all_d1 && t.d1 == 1;
    all_d2 = all_d2 && t.d2 == 1;
    re_ok = re_ok && t.a.real() > -1.0;
    im_sum += t.a.imag();
    diff_sum += t.b - t.a.real();
  }
  if (!all_d1) rep.violated.push_back("clause i: all d1 = 1");
  if (!re_ok || std::abs(im_sum) > 1e-12) rep.violated.push_back("clause ii: all Re a > -1 and sum Im a = 0");
  if (all_d2 && !spec.terms.empty() && !(diff_sum > -1.0))
    rep.violated.push_back("clause iii: sum (b - a) > -1 when all d2 = 1");
  rep.pass = rep.violated.empty();
  rep.verdict = rep.pass ? "necessary-conditions-pass" : "fail";
  return rep;
}

ValidityReport validate_adt_spec(const ADTWeightSpec& spec) {
  ValidityReport rep;
  try {
    check_structure(spec);
  } catch (const DomainError& e) {
    rep.violated.push_back(std::string("structure: ") + e.what());
  }
  double im_sum = 0.0;
  for (const auto& t : spec.terms) im_sum += t.d1 * t.a.imag();
  if (std::abs(im_sum) > 1e-12) rep.violated.push_back("imaginary-sum: sum d1 Im a = 0");

  const cpoly N = numerator(spec.terms), Q = denominator(spec.terms);
  cpoly quot, rem;
  long_divide(N, Q, quot, rem);
  const int d = std::max(0, count_d1(spec.terms) - count_d2(spec.terms));
  rep.d = d;
  // alpha_k multiplies s^{k+1}; alpha_0 is part of the O(s) remainder.
  rep.alpha.assign(d + 1, 0.0);
  for (int k = 0; k <= d && k < static_cast<int>(quot.size()); ++k)
    rep.alpha[k] = spec.c * quot[k].real() / (k + 1);
  const int q = count_d2(spec.terms);
  if (q > 0) {
    std::vector<double> poles;
    for (const auto& t : spec.terms)
      if (t.d2 == 1) poles.push_back(t.b);
    std::vector<double> uniq = poles;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    if (uniq.size() == poles.size()) {
      for (std::size_t i = 0; i < poles.size(); ++i) {
        cplx dq = 1.0;
        for (std::size_t k = 0; k < poles.size(); ++k)
          if (k != i) dq *= poles[k] - poles[i];
        rep.beta.push_back(-spec.c * (cpoly_eval(N, -poles[i]) / dq).real());
      }
    }
    // Sum of residues is the t^{q-1} coefficient of the remainder.
    rep.beta_sum = -spec.c * rem[q - 1].real();
  }
  const double sign = ((d + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
  if (d >= 1 && d % 2 == 1) {
    if (!(sign * rep.alpha[d] < 0.0)) rep.violated.push_back("clause i: (-1)^floor((d+1)/2) alpha_d < 0");
  } else if (d >= 2) {
    rep.checked_points = {spec.strip_lo, spec.strip_lo + 1.0};
    for (double s : rep.checked_points) {
      if (!(sign * (s * (d + 1) * rep.alpha[d] + rep.alpha[d - 1]) < 0.0)) {
        rep.violated.push_back("clause ii: (-1)^floor((d+1)/2) (s (d+1) alpha_d + alpha_{d-1}) < 0 at s = " +
                               std::to_string(s));
      }
    }
  } else if (!(rep.beta_sum > -1.0)) {
    rep.violated.push_back("clause iii: sum beta > -1 when d = 0");
  }
  rep.pass = rep.violated.empty();
  rep.verdict = rep.pass ? "necessary-conditions-pass" : "fail";
  return rep;
}

namespace {

// Numerical inversion on the vertical line Re s = sigma, where sigma
// minimizes the modulus bound log|F(sigma)| + kernel exponent.
double invert_numeric(const std::function<cplx(cplx)>& F, double left, double x, bool mellin,
                      const QuadratureConfig& cfg) {
  const double lx = mellin ? std::log(x) : 0.0;
  auto bound = [&](double sigma) {
    const double lf = std::log(std::abs(F(cplx(sigma))));
    if (!std::isfinite(lf)) return kInf;
    return mellin ? lf - sigma * lx : lf + sigma * x;
  };
  // Coarse geometric scan, then golden-section refinement around the best point.
  constexpr int kScan = 48;
  const double span = std::max(left, 0.0) + 200.0 - left;
  std::vector<double> grid(kScan);
  int best = 0;
  double best_val = kInf;
  for (int i = 0; i < kScan; ++i) {
    grid[i] = left + 0.01 * std::pow(span / 0.01, static_cast<double>(i) / (kScan - 1));
    const double v = bound(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (!std::isfinite(best_val)) throw NumericalError("weight inversion: transform not finite on the contour at x = " + std::to_string(x));
  double lo = grid[std::max(best - 1, 0)], hi = grid[std::min(best + 1, kScan - 1)];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
  double f1 = bound(m1), f2 = bound(m2);
  for (int it = 0; it < 60 && hi - lo > 1e-6 * (1.0 + lo); ++it) {
    if (f1 < f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - gr * (hi - lo);
      f1 = bound(m1);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + gr * (hi - lo);
      f2 = bound(m2);
    }
  }
  const double sigma = 0.5 * (lo + hi);
  const double fs = std::abs(F(cplx(sigma)));
  const double phi = bound(sigma);
  if (!std::isfinite(phi)) throw NumericalError("weight inversion: transform not finite on the contour at x = " + std::to_string(x));

  double T = 0.0;
  for (double t = 1.0; t < 1e5; t *= 1.2) {
    bool ok = true;
    for (double f : {1.0, 1.5, 2.0}) {
      if (std::abs(F(cplx(sigma, t * f))) >= 1e-17 * fs) {
        ok = false;
        break;
      }
    }
    if (ok) {
      T = t;
      break;
    }
  }
  if (T == 0.0) throw NumericalError("weight inversion: transform does not decay along the contour");
  if (phi + std::log(T) < -740.0) return 0.0;

  QuadratureConfig qc = cfg;
  qc.contour_truncation = T;
  qc.abs_tol = 1e-16;
  qc.rel_tol = std::max(cfg.rel_tol, 1e-12);
  // Both integrals are taken on Re u = 1 after the shift s = u + sigma - 1.
  TransformResult res;
  if (mellin) {
    auto H = [&](cplx u) {
      const cplx s = u + (sigma - 1.0);
      return F(s) * std::exp(-(s - sigma) * lx) / fs;
    };
    res = inverse_mellin(H, 1.0, 1.0, qc);
  } else {
    auto H = [&](cplx u) {
      const cplx s = u + (sigma - 1.0);
      return F(s) * std::exp((s - sigma) * x) / fs;
    };
    res = inverse_laplace(H, 1.0, 0.0, qc);
  }
  return res.value.real() * std::exp(phi);
}

WeightFunction mdt_function(const MDTWeightSpec& spec, int j, int n, bool omega, const QuadratureConfig& cfg) {
  check_structure(spec);
  WeightFunction wf;
  wf.lo = 0.0;
  const double c = spec.c;
  if (spec.r() == 1 && all_real_a(spec.terms)) {
    const auto t = spec.terms[0];
    const double a = t.a.real();
    if (t.d1 == 1 && t.d2 == 0) {
      wf.method = "closed:gamma";
      wf.lo_exponent = a;
      wf.eval = [a, c](double x) { return x > 0.0 ? std::exp(a * std::log(x / c) - x / c) : 0.0; };
      return wf;
    }
    if (t.d1 == 1 && t.d2 == 1) {
      // Gamma(s+a)/Gamma(s+B) inverts to B^{a,B}(x/c)/Gamma(B-a).
      const double B = t.b + (omega ? n : 1);
      if (B > a) {
        wf.method = "closed:beta";
        wf.hi = c;
        wf.lo_exponent = a;
        wf.hi_exponent = B - a - 1.0;
        const double lnorm = log_gamma(B - a);
        wf.eval = [a, B, c, lnorm](double x) {
          const double y = x / c;
          if (!(y > 0.0 && y < 1.0)) return 0.0;
          return std::exp(a * std::log(y) + (B - a - 1.0) * std::log1p(-y) - lnorm);
        };
        return wf;
      }
    }
  }
  wf.method = "numeric:inverse-mellin";
  if (count_d1(spec.terms) == count_d2(spec.terms) && spec.r() > 0) wf.hi = c;
  // Contour abscissae to the right of every singularity of the transform.
  double left = -kInf;
  for (int i = 0; i < spec.r(); ++i) {
    const auto& t = spec.terms[i];
    if (t.d1 == 1) left = std::max(left, -t.a.real());
    if (!omega && t.d2 == 1 && i < j) left = std::max(left, -t.b);
  }
  if (!std::isfinite(left)) left = spec.strip_lo;
  std::function<cplx(cplx)> F;
  if (omega)
    F = [spec, n](cplx s) { return mdt_omega_transform(spec, n, s); };
  else
    F = [spec, j](cplx s) { return mdt_weight_transform(spec, j, s); };
  const double hi = wf.hi;
  wf.eval = [F, left, cfg, hi](double x) {
    if (!(x > 0.0) || x >= hi) return 0.0;
    return invert_numeric(F, left, x, true, cfg);
  };
  return wf;
}

// e^{-b y} y^{nu-1} sum_k (beta y)^k / (k! Gamma(k+nu)), y > 0: the inverse
// Laplace transform of (s+b)^{-nu} exp(beta/(s+b)).
double pole_kernel(double nu, double beta, double b, double y) {
  if (!(y > 0.0)) return 0.0;
  const double ly = std::log(y);
  const double base = (nu - 1.0) * ly - b * y;
  if (beta == 0.0) return std::exp(base - log_gamma(nu));
  const double lby = std::log(std::abs(beta) * y);
  // Terms peak near k = sqrt(|beta| y), where the series is at most
  // exp(base + 2 sqrt(|beta| y)).
  const double kpeak = std::sqrt(std::abs(beta) * y);
  if (base + 2.0 * kpeak - std::min(0.0, nu - 1.0) * std::log(kpeak + 1.0) < -745.0) return 0.0;
  const double sgn = beta < 0.0 ? -1.0 : 1.0;
  double sum = 0.0, peak = 0.0;
  double s = 1.0;
  for (int k = 0; k < 5000; ++k) {
    const double lt = base + k * lby - log_gamma(k + 1.0) - log_gamma(k + nu);
    const double term = s * std::exp(lt);
    sum += term;
    peak = std::max(peak, std::abs(term));
    s *= sgn;
    if (k > 2 && k > kpeak && std::abs(term) < 1e-17 * peak) return sum;
  }
  throw NumericalError("pole_kernel: series did not converge");
}

WeightFunction adt_function(const ADTWeightSpec& spec, int j, int n, bool omega, const QuadratureConfig& cfg) {
  check_structure(spec);
  WeightFunction wf;
  const double c = spec.c, s0 = spec.s0;
  const int p1 = count_d1(spec.terms), q = count_d2(spec.terms);
  const int d = std::max(0, p1 - q);

  // Gaussian-like: one linear factor, no poles.
  if (q == 0 && p1 == 1 && all_real_a(spec.terms) && c > 0.0 && (omega || j == 1)) {
    double a = 0.0;
    for (const auto& t : spec.terms)
      if (t.d1 == 1) a = t.a.real();
    wf.method = "closed:gaussian";
    wf.lo = -kInf;
    const double lk = -c * (s0 * s0 / 2.0 + a * s0) - 0.5 * std::log(2.0 * std::numbers::pi * c);
    wf.eval = [a, c, lk](double x) { return std::exp(lk - (x + c * a) * (x + c * a) / (2.0 * c)); };
    return wf;
  }

  // All poles at one point b with at most a double pole and no polynomial part.
  bool common_pole = q >= 1 && q <= 2 && p1 <= q && all_real_a(spec.terms);
  double b = 0.0;
  if (common_pole) {
    bool first = true;
    for (const auto& t : spec.terms) {
      if (t.d2 != 1) continue;
      if (first) b = t.b;
      else if (t.b != b) common_pole = false;
      first = false;
    }
    common_pole = common_pole && s0 + b > 0.0;
  }
  if (common_pole) {
    // Expand N(t) in u = t + b: c R = c pi0 + k1/u + k2/u^2.
    cpoly N = numerator(spec.terms);
    std::vector<double> nu_coef(q + 1, 0.0);
    {
      // Taylor shift of N to the variable u.
      std::vector<double> Nr(N.size());
      for (std::size_t i = 0; i < N.size(); ++i) Nr[i] = N[i].real();
      for (std::size_t m = 0; m < Nr.size(); ++m) {
        double acc = 0.0;
        for (std::size_t i = m; i < Nr.size(); ++i)
          acc += Nr[i] * binomial(static_cast<int>(i), static_cast<int>(m)) * std::pow(-b, static_cast<double>(i - m));
        if (m <= static_cast<std::size_t>(q)) nu_coef[m] = acc;
      }
    }
    const double pi0 = nu_coef[q];
    const double k1 = c * nu_coef[q - 1];
    const double k2 = q == 2 ? c * nu_coef[0] : 0.0;
    const double lK = -c * pi0 * s0 - k1 * std::log(s0 + b) + k2 / (s0 + b);
    int pw = 0, m = 0;
    if (omega) {
      const StepMultiIndex idx = step_line_index(n, spec.r());
      for (int i = 0; i < spec.r(); ++i) pw += spec.terms[i].d2 * idx.parts[i];
    } else {
      m = j - 1;
      for (int i = 0; i < j; ++i) pw += spec.terms[i].d2;
    }
    std::vector<double> coefs(m + 1), nus(m + 1);
    bool ok = true;
    double min_nu = kInf;
    for (int l = 0; l <= m; ++l) {
      coefs[l] = binomial(m, l) * std::pow(-b, static_cast<double>(m - l));
      nus[l] = pw - k1 - l;
      ok = ok && nus[l] > 0.0;
      min_nu = std::min(min_nu, nus[l]);
    }
    if (ok) {
      wf.method = q == 2 && k2 != 0.0 ? "closed:bessel" : "closed:gamma";
      wf.lo = -c * pi0;
      wf.lo_exponent = std::max(min_nu - 1.0, -0.999);
      const double shift = c * pi0, beta = -k2;
      wf.eval = [coefs, nus, shift, beta, b, lK](double x) {
        const double y = x + shift;
        if (!(y > 0.0)) return 0.0;
        double acc = 0.0;
        for (std::size_t l = 0; l < coefs.size(); ++l) acc += coefs[l] * pole_kernel(nus[l], beta, b, y);
        return std::exp(lK) * acc;
      };
      return wf;
    }
  }

  wf.method = "numeric:inverse-laplace";
  if (d == 0) {
    cpoly quot, rem;
    long_divide(numerator(spec.terms), denominator(spec.terms), quot, rem);
    wf.lo = -c * (quot.empty() ? 0.0 : quot[0].real());
  } else {
    wf.lo = -kInf;
  }
  // With an odd-degree exponential part the decay along vertical lines does
  // not depend on Re s, so the contour may sit anywhere right of the poles.
  double left = d % 2 == 1 ? -kInf : spec.strip_lo;
  for (const auto& t : spec.terms)
    if (t.d2 == 1) left = std::max(left, -t.b);
  if (!std::isfinite(left)) left = -200.0;
  std::function<cplx(cplx)> F;
  if (omega)
    F = [spec, n](cplx s) { return adt_omega_transform(spec, n, s); };
  else
    F = [spec, j](cplx s) { return adt_weight_transform(spec, j, s); };
  const double lo = wf.lo;
  wf.eval = [F, left, cfg, lo](double x) {
    if (x <= lo) return 0.0;
    return invert_numeric(F, left, x, false, cfg);
  };
  return wf;
}

}  // namespace

WeightFunction weight_function(const MDTWeightSpec& spec, int j, const QuadratureConfig& cfg) {
  check_index(j, spec.r(), "weight_function");
  return mdt_function(spec, j, 0, false, cfg);
}

WeightFunction weight_function(const ADTWeightSpec& spec, int j, const QuadratureConfig& cfg) {
  check_index(j, spec.r(), "weight_function");
  return adt_function(spec, j, 0, false, cfg);
}

WeightFunction omega_function(const MDTWeightSpec& spec, int n, const QuadratureConfig& cfg) {
  if (spec.r() < 1) throw DomainError("omega_function: spec has no terms");
  return mdt_function(spec, 0, n, true, cfg);
}

WeightFunction omega_function(const ADTWeightSpec& spec, int n, const QuadratureConfig& cfg) {
  if (spec.r() < 1) throw DomainError("omega_function: spec has no terms");
  return adt_function(spec, 0, n, true, cfg);
}

std::vector<double> weight_values(const MDTWeightSpec& spec, int j, const std::vector<double>& xs,
                                  const QuadratureConfig& cfg) {
  const WeightFunction wf = weight_function(spec, j, cfg);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(wf.eval(x));
  return out;
}

std::vector<double> weight_values(const ADTWeightSpec& spec, int j, const std::vector<double>& xs,
                                  const QuadratureConfig& cfg) {
  const WeightFunction wf = weight_function(spec, j, cfg);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(wf.eval(x));
  return out;
}

}  // namespace ffmop
