#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>

#include "ffmop/model.hpp"
#include "ffmop/mop.hpp"
#include "ffmop/polynomial.hpp"
#include "ffmop/rmt.hpp"
#include "ffmop/specialfn.hpp"
#include "ffmop/transform.hpp"
#include "ffmop/weights.hpp"
#include "oracles.hpp"

namespace ffmop::verify {

namespace {

constexpr double kPi = std::numbers::pi;

struct Spec {
  const char* group;
  const char* title;
  double budget;
};

const Spec kSpecs[10] = {
    {"transforms", "closed-form Mellin/Laplace transform agreement", 10},
    {"derivatives", "derivative-operator identities", 10},
    {"algebra", "finite free convolution algebra", 5},
    {"mop", "multiple orthogonal polynomial correctness", 60},
    {"decomposition", "convolution (de)composition of MOPs", 30},
    {"montecarlo", "Monte Carlo convolution laws", 300},
    {"samplers", "cross-sampler agreement", 180},
    {"validators", "parameter validators", 1},
    {"ratio", "ratio-structure check", 10},
    {"specialfn", "special-function identities", 30},
};

class Recorder {
 public:
  explicit Recorder(CriterionResult& r) : r_(r) {}
  void below(const std::string& name, double value, double threshold) { add(name, value, threshold, true); }
  void above(const std::string& name, double value, double threshold) { add(name, value, threshold, false); }
  void flag(const std::string& name, bool ok) { add(name, ok ? 0.0 : 1.0, 0.5, true); }

 private:
  void add(const std::string& name, double value, double threshold, bool is_below) {
    Check c{name, value, threshold, is_below, false};
    c.pass = std::isfinite(value) && (is_below ? value < threshold : value > threshold);
    r_.checks.push_back(c);
  }
  CriterionResult& r_;
};

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

double poly_rel_diff(const Poly& p, const Poly& q) {
  double scale = 0.0;
  for (double c : q.coeffs()) scale = std::max(scale, std::abs(c));
  return max_coeff_diff(p, q) / std::max(scale, 1e-300);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- 1 -------------------------------------------------------------------

void transforms(Recorder& rec) {
  QuadratureConfig cfg;
  const double ss[] = {1.0, 2.0, 3.5};
  const std::pair<double, double> betas[] = {{0, 1}, {1, 3}, {0.5, 2.5}};
  const double gam[] = {0.0, 0.5, 2.0};
  for (auto [a, b] : betas)
    for (double s : ss) {
      const double want = std::tgamma(b - a) * std::tgamma(s + a) / std::tgamma(s + b);
      rec.below("mellin beta:" + fmt("%g", a) + "," + fmt("%g", b) + " s=" + fmt("%g", s),
                rel(mellin_numeric(BetaDensity{a, b}, s, cfg).value, want), 1e-8);
    }
  for (double a : gam)
    for (double s : ss) {
      rec.below("mellin gamma:" + fmt("%g", a) + " s=" + fmt("%g", s),
                rel(mellin_numeric(GammaDensity{a}, s, cfg).value, std::tgamma(s + a)), 1e-8);
      rec.below("laplace gamma:" + fmt("%g", a) + " s=" + fmt("%g", s),
                rel(laplace_numeric(GammaDensity{a}, s, cfg).value, std::tgamma(a + 1) / std::pow(s + 1, a + 1)),
                1e-8);
    }
  for (double s : ss)
    rec.below("laplace gauss s=" + fmt("%g", s),
              rel(laplace_numeric(GaussianDensity{}, s, cfg).value, std::sqrt(kPi) * std::exp(s * s / 4)), 1e-8);
}

// ---- 2 -------------------------------------------------------------------

void derivatives(Recorder& rec) {
  const std::vector<cplx> grid{1.0, 2.0, 3.5};
  const RealFn g1 = [](double x) { return x * std::exp(-x); };
  const RealFn gauss = [](double x) { return std::exp(-x * x); };
  for (int r : {1, 2}) {
    rec.below("mellin G^1 r=" + std::to_string(r),
              check_derivative_identity(TransformKind::Mellin, g1, r, grid).max_residual, 1e-6);
    rec.below("mellin gauss r=" + std::to_string(r),
              check_derivative_identity(TransformKind::Mellin, gauss, r, grid).max_residual, 1e-6);
    rec.below("laplace gauss r=" + std::to_string(r),
              check_derivative_identity(TransformKind::Laplace, gauss, r, grid).max_residual, 1e-6);
  }
  // G^1 vanishes at 0, so the first-order Laplace identity holds without boundary terms.
  rec.below("laplace G^1 r=1",
            check_derivative_identity(TransformKind::Laplace, g1, 1, grid, {}, Support{0.0, kInf, 1.0, 0.0})
                .max_residual,
            1e-6);
}

// ---- 3 -------------------------------------------------------------------

Poly random_poly(std::mt19937_64& gen, int deg, bool monic) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(deg + 1);
  for (double& v : c) v = u(gen);
  if (monic) c[deg] = 1.0;
  return Poly(c);
}

void algebra(Recorder& rec, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> ndist(1, 6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  using Conv = Poly (*)(const Poly&, const Poly&, int);
  const std::pair<const char*, Conv> ops[] = {{"mul", ff_mul_conv}, {"add", ff_add_conv}};
  for (auto [name, op] : ops) {
    const std::string tag = name;
    double ident = 0, comm = 0, bil = 0, assoc = 0;
    for (int t = 0; t < 100; ++t) {
      const int n = ndist(gen);
      const Poly p = random_poly(gen, n, false);
      const Poly unit = tag == "mul" ? from_roots(std::vector<double>(n, 1.0)) : Poly::monomial(n);
      ident = std::max(ident, max_coeff_diff(op(p, unit, n), p));
    }
    for (int t = 0; t < 100; ++t) {
      const int n = ndist(gen);
      const Poly p = random_poly(gen, n, false), q = random_poly(gen, n, false);
      comm = std::max(comm, max_coeff_diff(op(p, q, n), op(q, p, n)));
    }
    for (int t = 0; t < 100; ++t) {
      const int n = ndist(gen);
      const Poly p = random_poly(gen, n, false), q = random_poly(gen, n, false), r = random_poly(gen, n, false);
      const double a = u(gen), b = u(gen);
      const Poly lhs = op(a * p + b * q, r, n);
      const Poly rhs = a * op(p, r, n) + b * op(q, r, n);
      bil = std::max(bil, max_coeff_diff(lhs, rhs));
    }
    for (int t = 0; t < 100; ++t) {
      const int n = ndist(gen);
      const Poly p = random_poly(gen, n, true), q = random_poly(gen, n, true), r = random_poly(gen, n, true);
      assoc = std::max(assoc, max_coeff_diff(op(op(p, q, n), r, n), op(p, op(q, r, n), n)));
    }
    rec.below(tag + " identity", ident, 1e-10);
    rec.below(tag + " commutativity", comm, 1e-10);
    rec.below(tag + " bilinearity", bil, 1e-10);
    rec.below(tag + " associativity", assoc, 1e-10);
  }
}

// ---- 4 -------------------------------------------------------------------

void mop(Recorder& rec) {
  double lag = 0, herm = 0, lag_res = 0, herm_res = 0;
  for (int n = 1; n <= 6; ++n) {
    for (double a : {0.0, 1.0}) {
      const Poly P = mop_mdt(specs::lue(a), n);
      lag = std::max(lag, poly_rel_diff(P, oracle::laguerre_monic(n, a)));
      lag_res = std::max(lag_res, max_abs(orthogonality_residuals(P, specs::lue(a), n)));
    }
    const Poly H = mop_adt(specs::gaussian(), n);
    herm = std::max(herm, poly_rel_diff(H, oracle::hermite_monic(n)));
    herm_res = std::max(herm_res, max_abs(orthogonality_residuals(H, specs::gaussian(), n)));
  }
  rec.below("LUE a in {0,1}, n<=6 vs Laguerre recurrence (rel)", lag, 1e-10);
  rec.below("Gaussian n<=6 vs Hermite recurrence (rel)", herm, 1e-10);
  rec.below("LUE orthogonality residual", lag_res, 1e-6);
  rec.below("Gaussian orthogonality residual", herm_res, 1e-6);
  const MDTWeightSpec mixed = specs::gamma_product({0.0, 1.0});
  const int n = 4;
  const WeightFunction w1 = weight_function(mixed, 1);
  rec.flag("r=2 weights come from inverse Mellin (" + w1.method + ")", w1.method.rfind("numeric", 0) == 0);
  rec.below("r=2 Gamma(s)Gamma(s+1) orthogonality residual, n=4",
            max_abs(orthogonality_residuals(mop_mdt(mixed, n), mixed, n)), 1e-5);
}

// ---- 5 -------------------------------------------------------------------

void decomposition(Recorder& rec) {
  const std::vector<std::pair<std::string, MDTWeightSpec>> mul{
      {"LUE(0)", specs::lue(0)}, {"LUE(1.5)", specs::lue(1.5)}, {"JUE(0,2)", specs::jue(0, 2)},
      {"JUE(1,3.5)", specs::jue(1, 3.5)}};
  const std::vector<std::pair<std::string, ADTWeightSpec>> add{
      {"LUE-type(0)", specs::lue_type(0)},       {"LUE-type(1.5)", specs::lue_type(1.5)},
      {"Gaussian", specs::gaussian()},           {"Gaussian(c=2)", specs::gaussian(2.0)},
      {"Be1(1,0.5,1)", specs::be1(1, 0.5, 1)}, {"Be1(0,0.7,2)", specs::be1(0, 0.7, 2)}};
  double m = 0, a = 0;
  std::string wm, wa;
  for (int n = 1; n <= 6; ++n) {
    for (std::size_t i = 0; i < mul.size(); ++i)
      for (std::size_t j = i; j < mul.size(); ++j) {
        const double d = decomposition_check(mul[i].second, mul[j].second, n).max_deviation;
        if (d >= m) wm = mul[i].first + " x " + mul[j].first + " n=" + std::to_string(n);
        m = std::max(m, d);
      }
    for (std::size_t i = 0; i < add.size(); ++i)
      for (std::size_t j = i; j < add.size(); ++j) {
        const double d = decomposition_check(add[i].second, add[j].second, n).max_deviation;
        if (d >= a) wa = add[i].first + " + " + add[j].first + " n=" + std::to_string(n);
        a = std::max(a, d);
      }
  }
  rec.below("mul pairs from {LUE, JUE}, n<=6 (worst " + wm + ")", m, 1e-10);
  rec.below("add pairs from {LUE-type, Gaussian, Be1}, n<=6 (worst " + wa + ")", a, 1e-10);
  const DecompositionReport g = decomposition_check(specs::gaussian(), specs::gaussian(), 2);
  rec.below("Gaussian + Gaussian n=2 equals x^2 - 1", max_coeff_diff(g.combined, Poly{-1, 0, 1}), 1e-10);
}

// ---- 6 -------------------------------------------------------------------

// Covariance of the overall mean estimate from the per-batch means.
std::vector<std::vector<double>> mean_covariance(const CharPolyEstimate& e) {
  const std::size_t d = e.coeffs.size();
  std::vector<std::vector<double>> cov(d, std::vector<double>(d, 0.0));
  const double N = static_cast<double>(e.samples);
  const double B = static_cast<double>(e.batch_means.size());
  for (std::size_t b = 0; b < e.batch_means.size(); ++b) {
    const double w = static_cast<double>(e.batch_sizes[b]) / N;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        cov[i][j] += w * w * (e.batch_means[b][i] - e.coeffs[i]) * (e.batch_means[b][j] - e.coeffs[j]);
  }
  for (auto& row : cov)
    for (double& v : row) v *= B / (B - 1.0);
  return cov;
}

// Standard error of each coefficient of conv(A, B) by the delta method.
std::vector<double> conv_stderr(Poly (*op)(const Poly&, const Poly&, int), const CharPolyEstimate& A,
                                const CharPolyEstimate& B, int n) {
  std::vector<double> var(n + 1, 0.0);
  for (const auto* pr : {&A, &B}) {
    const CharPolyEstimate& self = *pr;
    const CharPolyEstimate& other = pr == &A ? B : A;
    const auto cov = mean_covariance(self);
    std::vector<std::vector<double>> J(n + 1, std::vector<double>(n + 1, 0.0));
    for (int i = 0; i < n; ++i) {
      const Poly out = op(Poly::monomial(i), other.mean, n);
      for (int k = 0; k <= n; ++k) J[k][i] = out[k];
    }
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) var[k] += J[k][i] * cov[i][j] * J[k][j];
  }
  std::vector<double> se(n + 1);
  for (int k = 0; k <= n; ++k) se[k] = std::sqrt(std::max(var[k], 0.0));
  return se;
}

void compare_sigma(Recorder& rec, const std::string& tag, const CharPolyEstimate& est, const Poly& ref,
                   const std::vector<double>& ref_se, int n) {
  for (int k = 0; k < n; ++k) {
    const double s = std::sqrt(est.stderrs[k] * est.stderrs[k] + ref_se[k] * ref_se[k]);
    rec.below(tag + " coeff x^" + std::to_string(k) + " (sigmas)", std::abs(est.coeffs[k] - ref[k]) / s, 3.0);
  }
}

void montecarlo(Recorder& rec, const Options& opt) {
  const long long N = opt.mc_samples;
  std::uint64_t seed = opt.seed;
  auto ecp = [&](const std::string& model, int n) {
    return expected_char_poly(parse_model(model), n, N, seed++, opt.threads);
  };
  for (int n : {2, 3}) {
    const std::string ns = std::to_string(n);
    const std::string gin = "ginibre(" + ns + "," + ns + ")";
    const auto prod = ecp("ssv(prod(" + gin + "," + gin + "))", n);
    const auto g1 = ecp("ssv(" + gin + ")", n);
    const auto g2 = ecp("ssv(" + gin + ")", n);
    compare_sigma(rec, "Ginibre product n=" + ns + " vs estimate boxtimes estimate", prod, ff_mul_conv(g1.mean, g2.mean, n),
                  conv_stderr(ff_mul_conv, g1, g2, n), n);
    compare_sigma(rec, "Ginibre product n=" + ns + " vs analytic", prod, mop_mdt(specs::gamma_product({0, 0}), n),
                  std::vector<double>(n + 1, 0.0), n);

    const std::string gue = "gue(" + ns + ")";
    const auto sum = ecp("ev(sum(" + gue + "," + gue + "))", n);
    const auto h1 = ecp("ev(" + gue + ")", n);
    const auto h2 = ecp("ev(" + gue + ")", n);
    compare_sigma(rec, "GUE sum n=" + ns + " vs estimate boxplus estimate", sum, ff_add_conv(h1.mean, h2.mean, n),
                  conv_stderr(ff_add_conv, h1, h2, n), n);
    const Poly analytic = n == 2 ? Poly{-1, 0, 1} : mop_adt(specs::gaussian(1.0), n);
    compare_sigma(rec, "GUE sum n=" + ns + " vs analytic" + std::string(n == 2 ? " x^2-1" : ""), sum, analytic,
                  std::vector<double>(n + 1, 0.0), n);
  }
}

// ---- 7 -------------------------------------------------------------------

void samplers(Recorder& rec, const Options& opt) {
  struct Case {
    const char* name;
    const char* model;
    DensityId id;
  };
  const Case cases[] = {{"GUE(2)", "ev(gue(2))", GaussianDensity{}},
                        {"LUE(2,a=0)", "ev(lue(2))", GammaDensity{0.0}},
                        {"JUE(2,a=0,b=1)", "ev(jue(2,a=0,b=1))", BetaDensity{0.0, 1.0}}};
  std::uint64_t stream = 0;
  for (const Case& c : cases) {
    const EnsembleModel model = parse_model(c.model);
    RngState rm(opt.seed, 7000 + stream++), rp(opt.seed, 7000 + stream++);
    std::vector<double> pm, pp, lm, lp;
    for (long long i = 0; i < opt.ks_samples; ++i) {
      const auto x = sample_points(model, rm);
      pm.insert(pm.end(), x.begin(), x.end());
      lm.push_back(x.back());
    }
    for (const auto& x : sample_pe_direct(rp, pe_from_density(c.id, 2), static_cast<int>(opt.ks_samples))) {
      pp.insert(pp.end(), x.begin(), x.end());
      lp.push_back(x.back());
    }
    rec.below(std::string(c.name) + " KS all points", oracle::ks_statistic(pm, pp), 0.01);
    rec.below(std::string(c.name) + " KS largest point", oracle::ks_statistic(lm, lp), 0.01);
  }
}

// ---- 8 -------------------------------------------------------------------

bool has_clause(const ValidityReport& r, const std::string& prefix) {
  return std::any_of(r.violated.begin(), r.violated.end(),
                     [&](const std::string& v) { return v.rfind(prefix, 0) == 0; });
}

void validators(Recorder& rec) {
  auto expect = [&](const std::string& name, const ValidityReport& r, bool pass, const std::string& clause) {
    bool ok = r.pass == pass;
    if (!pass) ok = ok && has_clause(r, clause);
    rec.flag(name, ok);
  };
  expect("MDT d1(1)=0 fails clause i", validate_mdt_spec(MDTWeightSpec{1.0, {WeightTerm{0.0, 0, 1.0, 1}}, 0.0}), false,
         "clause i:");
  expect("MDT a1=-1.5 fails clause ii", validate_mdt_spec(MDTWeightSpec{1.0, {WeightTerm{-1.5, 1, 0.0, 0}}, 0.0}),
         false, "clause ii:");
  expect("MDT LUE passes", validate_mdt_spec(specs::lue(0)), true, "");
  const ValidityReport g = validate_adt_spec(specs::gaussian());
  expect("ADT Gaussian passes", g, true, "");
  rec.flag("ADT Gaussian alpha_1 = c/2", g.alpha.size() > 1 && std::abs(g.alpha[1] - 0.25) < 1e-15);
  const ValidityReport pole = validate_adt_spec(ADTWeightSpec{2.0, 0.0, {WeightTerm{0.0, 0, 1.0, 1}}, 0.0});
  expect("ADT pure pole with sum beta = -2 fails clause iii", pole, false, "clause iii:");
  rec.flag("ADT pure pole sum beta = -2", std::abs(pole.beta_sum + 2.0) < 1e-12);
  expect("ADT a1 = i without conjugate fails imaginary-sum",
         validate_adt_spec(ADTWeightSpec{0.5, 0.0, {WeightTerm{cplx(0.0, 1.0), 1, 0.0, 0}}, 0.0}), false,
         "imaginary-sum:");
}

// ---- 9 -------------------------------------------------------------------

void ratio(Recorder& rec, const Options& opt) {
  const std::vector<double> ss{1.1, 1.4, 1.8, 2.3, 2.9, 3.4, 4.0};
  const int n = 4;
  const TransformFamily lue = opt.inject_broken_weight ? broken_mixture_family() : mdt_family(specs::lue(0));
  rec.below(std::string("LUE family held-out residual") + (opt.inject_broken_weight ? " (broken weight injected)" : ""),
            ratio_structure_check(lue, n, ss).max_residual, 1e-8);
  rec.below("Gaussian family held-out residual", ratio_structure_check(adt_family(specs::gaussian()), n, ss).max_residual,
            1e-8);
  rec.above("broken mixture G^0 + B^{0,1} held-out residual",
            ratio_structure_check(broken_mixture_family(), n, ss).max_residual, 1e-3);
}

// ---- 10 ------------------------------------------------------------------

void specialfn(Recorder& rec) {
  const double xs_be[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  struct BeCase {
    double a, b, c;
  };
  for (BeCase p : {BeCase{0, 1, 1}, BeCase{0.5, 0.7, 2.0}, BeCase{2.0, 3.0, 0.5}}) {
    double worst = 0.0;
    for (double x : xs_be) worst = std::max(worst, rel(be_value(1, p.a, p.b, p.c, x), oracle::be1_from_bessel(p.a, p.b, p.c, x)));
    rec.below("Be_1^{" + fmt("%g", p.a) + "," + fmt("%g", p.b) + "," + fmt("%g", p.c) + "} vs I-Bessel", worst, 1e-8);
  }
  const double xs_ai[] = {-2.0, -1.0, 0.0, 1.0, 2.0};
  for (double c : {1.0 / 3.0, 1.0}) {
    double worst = 0.0;
    for (double x : xs_ai) worst = std::max(worst, rel(ai_value(1, c, x), oracle::ai1_from_airy(c, x)));
    rec.below("Ai_1^{c=" + fmt("%.4g", c) + "} vs classical Airy", worst, 1e-8);
  }
}

}  // namespace

const Check* CriterionResult::worst() const {
  const Check* w = nullptr;
  double score = -1.0;
  for (const Check& c : checks) {
    double s;
    if (!c.pass) s = 1e300;
    else if (c.below) s = c.threshold > 0 ? c.value / c.threshold : c.value;
    else s = c.value > 0 ? c.threshold / c.value : 1e300;
    if (s > score) {
      score = s;
      w = &c;
    }
  }
  return w;
}

std::string CriterionResult::line() const {
  std::string s = std::string(pass ? "PASS" : "FAIL") + "  criterion " + std::to_string(id) + " [" + group + "] " + title;
  if (!error.empty()) return s + "  error: " + error;
  int failed = 0;
  for (const Check& c : checks) failed += c.pass ? 0 : 1;
  char buf[256];
  if (const Check* w = worst()) {
    std::snprintf(buf, sizeof buf, "  checks %d/%zu  worst: %s = %.3g (%s %.3g)", static_cast<int>(checks.size()) - failed,
                  checks.size(), w->name.c_str(), w->value, w->below ? "<" : ">", w->threshold);
    s += buf;
  }
  std::snprintf(buf, sizeof buf, "  %.2fs (budget %.0fs)", seconds, budget_seconds);
  return s + buf;
}

const std::vector<std::string>& group_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Spec& s : kSpecs) v.push_back(s.group);
    return v;
  }();
  return names;
}

bool selected(const Options& opt, int id) {
  if (opt.only.empty()) return true;
  for (const std::string& o : opt.only)
    if (o == kSpecs[id - 1].group || o == std::to_string(id)) return true;
  return false;
}

CriterionResult run_criterion(int id, const Options& opt) {
  if (id < 1 || id > 10) throw std::out_of_range("criterion id must lie in 1..10");
  CriterionResult r;
  r.id = id;
  r.group = kSpecs[id - 1].group;
  r.title = kSpecs[id - 1].title;
  r.budget_seconds = kSpecs[id - 1].budget;
  Recorder rec(r);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: transforms(rec); break;
      case 2: derivatives(rec); break;
      case 3: algebra(rec, opt.seed); break;
      case 4: mop(rec); break;
      case 5: decomposition(rec); break;
      case 6: montecarlo(rec, opt); break;
      case 7: samplers(rec, opt); break;
      case 8: validators(rec); break;
      case 9: ratio(rec, opt); break;
      case 10: specialfn(rec); break;
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.pass = r.error.empty() && !r.checks.empty() &&
           std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; }) &&
           r.seconds < r.budget_seconds;
  return r;
}

void check_selection(const Options& opt) {
  for (const std::string& o : opt.only) {
    bool known = false;
    for (int id = 1; id <= 10; ++id) known = known || o == kSpecs[id - 1].group || o == std::to_string(id);
    if (!known) throw std::invalid_argument("unknown criterion or group '" + o + "'");
  }
}

std::vector<CriterionResult> run(const Options& opt) {
  check_selection(opt);
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id)
    if (selected(opt, id)) out.push_back(run_criterion(id, opt));
  return out;
}

nlohmann::json to_json(const CriterionResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr)},
                      {"threshold", c.threshold},
                      {"comparison", c.below ? "<" : ">"},
                      {"pass", c.pass}});
  nlohmann::json j = {{"id", r.id},           {"group", r.group},     {"title", r.title},
                      {"pass", r.pass},       {"seconds", r.seconds}, {"budget_seconds", r.budget_seconds},
                      {"checks", checks}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

nlohmann::json to_json(const std::vector<CriterionResult>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  std::vector<int> failed;
  for (const auto& r : rs) {
    arr.push_back(to_json(r));
    all = all && r.pass;
    if (!r.pass) failed.push_back(r.id);
  }
  return {{"pass", all}, {"criteria", arr}, {"failed", failed}};
}

}  // namespace ffmop::verify
