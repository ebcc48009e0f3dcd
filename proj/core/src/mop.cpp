#include "ffmop/mop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "ffmop/error.hpp"
#include "ffmop/specialfn.hpp"
#include "ffmop/transform.hpp"

namespace ffmop {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();

bool is_gamma_pole(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

double sign_pow(int e) { return e % 2 == 0 ? 1.0 : -1.0; }

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

std::vector<int> parts_or_empty(int n, int r) {
  if (r == 0) return {};
  return step_line_index(n, r).parts;
}

}  // namespace

Poly mop_mdt(const MDTWeightSpec& spec, int n) {
  check_structure(spec);
  if (n < 1) throw DomainError("mop_mdt: n must be >= 1");
  const std::vector<int> parts = parts_or_empty(n, spec.r());
  std::vector<double> coeffs(n + 1);
  for (int k = 0; k <= n; ++k) {
    // M omega(n+1) / M omega(k+1) as a product of Pochhammer symbols.
    cplx rho = std::pow(spec.c, n - k);
    for (int i = 0; i < spec.r(); ++i) {
      const auto& t = spec.terms[i];
      if (t.d1 == 1) {
        const cplx z = static_cast<double>(k + 1) + t.a;
        if (is_gamma_pole(z)) throw DomainError("mop_mdt: pole of M omega at s = " + std::to_string(k + 1));
        rho *= pochhammer(z, n - k);
      }
      if (t.d2 == 1) {
        const cplx zk = static_cast<double>(k + 1 + parts[i]) + t.b;
        const cplx zn = static_cast<double>(n + 1 + parts[i]) + t.b;
        if (is_gamma_pole(zk) || is_gamma_pole(zn))
          throw DomainError("mop_mdt: zero of M omega at an integer point");
        rho /= pochhammer(zk, n - k);
      }
    }
    coeffs[k] = sign_pow(n - k) * binomial(n, k) * rho.real();
  }
  return Poly(std::move(coeffs));
}

Poly mop_mdt_from_values(const std::vector<cplx>& moments, int n) {
  if (n < 1 || static_cast<int>(moments.size()) != n + 1)
    throw DomainError("mop_mdt_from_values: need M(1), ..., M(n+1)");
  std::vector<double> coeffs(n + 1);
  for (int k = 0; k <= n; ++k) {
    if (moments[k] == 0.0) throw DomainError("mop_mdt_from_values: zero transform value");
    coeffs[k] = sign_pow(n - k) * binomial(n, k) * (moments[n] / moments[k]).real();
  }
  return Poly(std::move(coeffs));
}

Poly mop_adt_from_jet(const TaylorJet& J, int n) {
  if (n < 1 || J.order() < n) throw DomainError("mop_adt: jet order must be >= n");
  if (J.coeffs[0] == 0.0) throw DomainError("mop_adt: reciprocal transform vanishes at the origin");
  std::vector<double> coeffs(n + 1);
  for (int k = 0; k <= n; ++k)
    coeffs[k] = sign_pow(n - k) * binomial(n, k) * factorial(n - k) * (J.coeffs[n - k] / J.coeffs[0]);
  return Poly(std::move(coeffs));
}

Poly mop_adt(const ADTWeightSpec& spec, int n) {
  if (n < 1) throw DomainError("mop_adt: n must be >= 1");
  return mop_adt_from_jet(reciprocal_laplace_jet(spec, n, n), n);
}

namespace {

template <class Spec>
ResidualMatrix residuals_impl(const Poly& P, const Spec& spec, int n, const QuadratureConfig& cfg) {
  check_structure(spec);
  if (spec.r() < 1) throw DomainError("orthogonality_residuals: spec has no weights");
  const StepMultiIndex idx = step_line_index(n, spec.r());
  ResidualMatrix R(spec.r());
  for (int j = 1; j <= spec.r(); ++j) {
    const WeightFunction wf = weight_function(spec, j, cfg);
    const bool numeric = wf.method.rfind("numeric", 0) == 0;
    std::map<double, double> memo;
    auto w = [&](double x) {
      auto it = memo.find(x);
      if (it != memo.end()) return it->second;
      const double v = wf.eval(x);
      memo.emplace(x, v);
      return v;
    };
    const Support sp = wf.support();
    for (int k = 0; k < idx.parts[j - 1]; ++k) {
      QuadratureConfig qd = cfg;
      qd.rel_tol = 1e-8;
      qd.abs_tol = 1e-300;
      RealFn absf = [&](double x) { return std::abs(poly_eval(P, x) * std::pow(x, k) * w(x)); };
      const double den = integrate_on(absf, sp, qd).value;
      if (!(den > 0.0)) throw NumericalError("orthogonality_residuals: zero normalization integral");
      // Roundoff floor of evaluating P: eps * sum |p_i| |x|^i.
      RealFn noisef = [&](double x) {
        double s = 0.0, pw = 1.0;
        for (double c : P.coeffs()) {
          s += std::abs(c) * pw;
          pw *= std::abs(x);
        }
        return s * std::pow(std::abs(x), k) * std::abs(w(x));
      };
      const double noise = 1e3 * kEpsilon * integrate_on(noisef, sp, qd).value;
      QuadratureConfig qn = cfg;
      qn.rel_tol = numeric ? std::max(cfg.rel_tol, 1e-10) : cfg.rel_tol;
      qn.abs_tol = std::max((numeric ? 1e-11 : 1e-14) * den, noise);
      RealFn f = [&](double x) { return poly_eval(P, x) * std::pow(x, k) * w(x); };
      const double num = integrate_on(f, sp, qn).value;
      R[j - 1].push_back(num / den);
    }
  }
  return R;
}

}  // namespace

ResidualMatrix orthogonality_residuals(const Poly& P, const MDTWeightSpec& spec, int n, const QuadratureConfig& cfg) {
  return residuals_impl(P, spec, n, cfg);
}

ResidualMatrix orthogonality_residuals(const Poly& P, const ADTWeightSpec& spec, int n, const QuadratureConfig& cfg) {
  return residuals_impl(P, spec, n, cfg);
}

double max_abs(const ResidualMatrix& R) {
  double m = 0.0;
  for (const auto& row : R)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

MDTWeightSpec mdt_product_spec(const MDTWeightSpec& A, const MDTWeightSpec& B, int n) {
  check_structure(A);
  check_structure(B);
  MDTWeightSpec out;
  out.c = A.c * B.c;
  out.strip_lo = std::max(A.strip_lo, B.strip_lo);
  const std::vector<int> pa = parts_or_empty(n, A.r()), pb = parts_or_empty(n, B.r());
  std::vector<int> orig;
  for (int i = 0; i < A.r(); ++i) {
    out.terms.push_back(A.terms[i]);
    orig.push_back(pa[i]);
  }
  for (int i = 0; i < B.r(); ++i) {
    out.terms.push_back(B.terms[i]);
    orig.push_back(pb[i]);
  }
  if (out.r() == 0) return out;
  // Keep Gamma(s + b + n_i) unchanged under the new step-line index.
  const std::vector<int> np = step_line_index(n, out.r()).parts;
  for (int i = 0; i < out.r(); ++i)
    if (out.terms[i].d2 == 1) out.terms[i].b += orig[i] - np[i];
  try {
    check_structure(out);
  } catch (const DomainError&) {
    throw DomainError("mdt_product_spec: product is not representable (mixed d1/d2 bits)");
  }
  return out;
}

ADTWeightSpec adt_product_spec(const ADTWeightSpec& A, const ADTWeightSpec& B, int n) {
  check_structure(A);
  check_structure(B);
  auto num = [](const ADTWeightSpec& s) {
    Poly p{1.0};
    for (const auto& t : s.terms)
      if (t.d1 == 1) {
        if (t.a.imag() != 0.0) {
          // Conjugate pairs multiply to a real quadratic; singleton complex zeros are rejected.
          continue;
        }
        p = p * Poly{t.a.real(), 1.0};
      }
    // Real quadratic factors from conjugate pairs.
    std::vector<cplx> cz;
    for (const auto& t : s.terms)
      if (t.d1 == 1 && t.a.imag() != 0.0) cz.push_back(t.a);
    std::vector<bool> used(cz.size(), false);
    for (std::size_t i = 0; i < cz.size(); ++i) {
      if (used[i]) continue;
      bool found = false;
      for (std::size_t k = i + 1; k < cz.size(); ++k)
        if (!used[k] && std::abs(cz[k] - std::conj(cz[i])) <= 1e-12 * std::abs(cz[i])) {
          used[i] = used[k] = true;
          p = p * Poly{std::norm(cz[i]), 2.0 * cz[i].real(), 1.0};
          found = true;
          break;
        }
      if (!found) throw DomainError("adt_product_spec: complex a without conjugate partner");
    }
    return p;
  };
  std::vector<double> poles;
  std::vector<int> orig;
  const std::vector<int> pa = parts_or_empty(n, A.r()), pb = parts_or_empty(n, B.r());
  Poly QA{1.0}, QB{1.0};
  for (int i = 0; i < A.r(); ++i)
    if (A.terms[i].d2 == 1) {
      poles.push_back(A.terms[i].b);
      orig.push_back(pa[i]);
      QA = QA * Poly{A.terms[i].b, 1.0};
    }
  for (int i = 0; i < B.r(); ++i)
    if (B.terms[i].d2 == 1) {
      poles.push_back(B.terms[i].b);
      orig.push_back(pb[i]);
      QB = QB * Poly{B.terms[i].b, 1.0};
    }
  const int q = static_cast<int>(poles.size());
  // c' R' = cA RA + cB RB + sum kappa_i / (t + b_i), over the common denominator QA QB.
  const Poly N0 = A.c * (num(A) * QB) + B.c * (num(B) * QA);
  const int r = std::max(q, N0.degree());
  ADTWeightSpec out;
  out.s0 = A.s0;
  out.strip_lo = std::max(A.strip_lo, B.strip_lo);
  if (r <= 0) {
    out.c = N0.is_zero() ? 0.0 : N0[0];
    return out;
  }
  const std::vector<int> np = step_line_index(n, r).parts;
  Poly N = N0;
  for (int i = 0; i < q; ++i) {
    const int kappa = np[i] - orig[i];
    if (kappa == 0) continue;
    Poly others{1.0};
    for (int k = 0; k < q; ++k)
      if (k != i) others = others * Poly{poles[k], 1.0};
    N = N + static_cast<double>(kappa) * others;
  }
  // Drop leading coefficients that cancelled to roundoff.
  std::vector<double> nc = N.coeffs();
  double scale = 0.0;
  for (double v : nc) scale = std::max(scale, std::abs(v));
  while (!nc.empty() && std::abs(nc.back()) <= 1e-14 * scale) nc.pop_back();
  N = Poly(nc);
  out.terms.assign(r, WeightTerm{0.0, 0, 0.0, 0});
  for (int i = 0; i < q; ++i) {
    out.terms[i].d2 = 1;
    out.terms[i].b = poles[i];
  }
  if (N.is_zero()) {
    out.c = 0.0;
  } else {
    out.c = N.leading();
    if (N.degree() >= 1) {
      // Zeros that coincide with pole values are deflated exactly; multiple
      // roots are otherwise only resolved to about sqrt(eps).
      std::vector<cplx> z;
      Poly rest = (1.0 / N.leading()) * N;
      std::vector<double> distinct = poles;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (double b : distinct) {
        while (rest.degree() >= 1) {
          double mag = 0.0, pw = 1.0;
          for (double v : rest.coeffs()) {
            mag += std::abs(v) * pw;
            pw *= std::abs(b);
          }
          if (std::abs(poly_eval(rest, -b)) > 1e-12 * mag) break;
          // Synthetic division by (t + b).
          const std::vector<double>& rc = rest.coeffs();
          std::vector<double> qc(rc.size() - 1);
          double carry = 0.0;
          for (int k = static_cast<int>(rc.size()) - 1; k >= 1; --k) {
            carry = rc[k] - b * (k + 1 < static_cast<int>(rc.size()) ? qc[k] : 0.0);
            qc[k - 1] = carry;
          }
          rest = Poly(qc);
          z.push_back(cplx(-b));
        }
      }
      if (rest.degree() >= 1)
        for (cplx v : roots(rest, 1e-13)) z.push_back(v);
      for (int i = 0; i < N.degree(); ++i) {
        out.terms[i].d1 = 1;
        // Roots of a real polynomial: snap roundoff imaginary parts.
        cplx a = -z[i];
        if (std::abs(a.imag()) <= 1e-10 * (1.0 + std::abs(a))) a = a.real();
        out.terms[i].a = a;
      }
    }
  }
  try {
    check_structure(out);
  } catch (const DomainError&) {
    throw DomainError("adt_product_spec: product is not representable");
  }
  return out;
}

namespace {
void finish(DecompositionReport& rep) {
  rep.abs_deviation = max_coeff_diff(rep.combined, rep.convolved);
  double scale = 1.0;
  for (double c : rep.convolved.coeffs()) scale = std::max(scale, std::abs(c));
  rep.max_deviation = rep.abs_deviation / scale;
}
}  // namespace

DecompositionReport decomposition_check(const MDTWeightSpec& A, const MDTWeightSpec& B, int n) {
  DecompositionReport rep;
  rep.combined = mop_mdt(mdt_product_spec(A, B, n), n);
  rep.convolved = ff_mul_conv(mop_mdt(A, n), mop_mdt(B, n), n);
  finish(rep);
  return rep;
}

DecompositionReport decomposition_check(const ADTWeightSpec& A, const ADTWeightSpec& B, int n) {
  DecompositionReport rep;
  rep.combined = mop_adt(adt_product_spec(A, B, n), n);
  rep.convolved = ff_add_conv(mop_adt(A, n), mop_adt(B, n), n);
  finish(rep);
  return rep;
}

double biorthogonal_partner(const RealFn& q1, const Support& q1_support, const MDTWeightSpec& spec, double x,
                            const QuadratureConfig& cfg, int n) {
  const WeightFunction w = omega_function(spec, n, cfg);
  return mellin_convolve(q1, w.eval, x, cfg, q1_support, w.support());
}

double biorthogonal_partner(const RealFn& q1, const Support& q1_support, const ADTWeightSpec& spec, double x,
                            const QuadratureConfig& cfg, int n) {
  const WeightFunction w = omega_function(spec, n, cfg);
  return laplace_convolve(q1, w.eval, x, cfg, q1_support, w.support());
}

TransformFamily mdt_family(const MDTWeightSpec& spec) {
  check_structure(spec);
  if (spec.r() < 1) throw DomainError("mdt_family: spec has no weights");
  TransformFamily f;
  f.name = "mdt";
  const int r = spec.r();
  f.transform = [spec, r](int m, cplx s) {
    const int eta = (m - 1) / r, j = (m - 1) % r + 1;
    return mdt_weight_transform(spec, j, s + static_cast<double>(eta));
  };
  f.denominator = [spec, r](int m) {
    const StepMultiIndex idx = step_line_index(m, r);
    Poly D{1.0};
    for (int i = 0; i < r; ++i) {
      if (spec.terms[i].d2 != 1) continue;
      for (int l = (i == 0 ? 1 : 0); l < idx.parts[i]; ++l) D = D * Poly{spec.terms[i].b + l, 1.0};
    }
    return D;
  };
  return f;
}

TransformFamily adt_family(const ADTWeightSpec& spec) {
  check_structure(spec);
  if (spec.r() < 1) throw DomainError("adt_family: spec has no weights");
  TransformFamily f;
  f.name = "adt";
  const int r = spec.r();
  f.transform = [spec, r](int m, cplx s) {
    // L[x^eta w_j](s) = (-1)^eta (L w_j)^{(eta)}(s).
    const int eta = (m - 1) / r, j = (m - 1) % r + 1;
    const jet::cseries J = adt_weight_transform_jet(spec, j, s, eta);
    return sign_pow(eta) * factorial(eta) * J[eta];
  };
  f.denominator = [spec, r](int m) {
    const StepMultiIndex idx = step_line_index(m, r);
    Poly D{1.0};
    for (int i = 0; i < r; ++i) {
      if (spec.terms[i].d2 != 1) continue;
      for (int l = (i == 0 ? 1 : 0); l < idx.parts[i]; ++l) D = D * Poly{spec.terms[i].b, 1.0};
    }
    return D;
  };
  return f;
}

TransformFamily broken_mixture_family(const QuadratureConfig& cfg) {
  TransformFamily f;
  f.name = "broken-mixture";
  f.transform = [cfg](int m, cplx s) {
    const double eta = m - 1;
    return mellin_numeric(DensityId{GammaDensity{eta}}, s, cfg).value +
           mellin_numeric(DensityId{BetaDensity{eta, eta + 1.0}}, s, cfg).value;
  };
  f.denominator = [](int) { return Poly{1.0}; };
  return f;
}

RatioReport ratio_structure_check(const TransformFamily& family, int n, const std::vector<double>& s_samples,
                                  double threshold) {
  if (n < 1) throw DomainError("ratio_structure_check: n must be >= 1");
  if (static_cast<int>(s_samples.size()) < n + 3)
    throw DomainError("ratio_structure_check: need at least n + 3 sample points");
  RatioReport rep;
  rep.threshold = threshold;
  const int S = static_cast<int>(s_samples.size());
  std::vector<cplx> base(S);
  for (int i = 0; i < S; ++i) base[i] = family.transform(1, cplx(s_samples[i]));
  double lo = s_samples[0], hi = s_samples[0];
  for (double s : s_samples) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double mid = 0.5 * (lo + hi), half = std::max(0.5 * (hi - lo), 1e-12);
  for (int m = 1; m <= n; ++m) {
    const Poly D = family.denominator(m);
    std::vector<double> y(S);
    double ymax = 0.0;
    for (int i = 0; i < S; ++i) {
      y[i] = (family.transform(m, cplx(s_samples[i])) / base[i]).real() * poly_eval(D, s_samples[i]);
      ymax = std::max(ymax, std::abs(y[i]));
    }
    // Vandermonde system in the scaled variable, partial pivoting.
    std::vector<std::vector<double>> A(m, std::vector<double>(m + 1));
    for (int i = 0; i < m; ++i) {
      const double t = (s_samples[i] - mid) / half;
      double p = 1.0;
      for (int k = 0; k < m; ++k) {
        A[i][k] = p;
        p *= t;
      }
      A[i][m] = y[i];
    }
    for (int col = 0; col < m; ++col) {
      int piv = col;
      for (int i = col + 1; i < m; ++i)
        if (std::abs(A[i][col]) > std::abs(A[piv][col])) piv = i;
      if (std::abs(A[piv][col]) < 1e-300) throw NumericalError("ratio_structure_check: singular fit system");
      std::swap(A[col], A[piv]);
      for (int i = col + 1; i < m; ++i) {
        const double f = A[i][col] / A[col][col];
        for (int k = col; k <= m; ++k) A[i][k] -= f * A[col][k];
      }
    }
    std::vector<double> coef(m);
    for (int i = m - 1; i >= 0; --i) {
      double acc = A[i][m];
      for (int k = i + 1; k < m; ++k) acc -= A[i][k] * coef[k];
      coef[i] = acc / A[i][i];
    }
    double worst = 0.0;
    for (int i = m; i < S; ++i) {
      const double t = (s_samples[i] - mid) / half;
      double fit = 0.0;
      for (int k = m - 1; k >= 0; --k) fit = fit * t + coef[k];
      worst = std::max(worst, std::abs(fit - y[i]) / std::max(ymax, 1e-300));
    }
    rep.residuals.push_back(worst);
    rep.max_residual = std::max(rep.max_residual, worst);
  }
  rep.pass = rep.max_residual <= threshold;
  return rep;
}

}  // namespace ffmop
