#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "ffmop/jet.hpp"
#include "ffmop/polynomial.hpp"
#include "ffmop/quadrature.hpp"

namespace ffmop {

// Unique step-line multi-index with |n| = total: n_i = eta+1 for i <= j and
// eta otherwise, where total = r*eta + j, 0 <= j < r.
struct StepMultiIndex {
  int r = 1;
  int total = 0;
  std::vector<int> parts;
  bool valid() const;
};

StepMultiIndex step_line_index(int n, int r);

// One factor (t + a)^{d1} / (t + b)^{d2}.
struct WeightTerm {
  cplx a = 0.0;
  int d1 = 1;
  double b = 0.0;
  int d2 = 0;
};

struct MDTWeightSpec {
  double c = 1.0;
  std::vector<WeightTerm> terms;
  double strip_lo = 0.0;
  int r() const noexcept { return static_cast<int>(terms.size()); }
};

struct ADTWeightSpec {
  double c = 1.0;
  double s0 = 0.0;
  std::vector<WeightTerm> terms;
  double strip_lo = 0.0;
  int r() const noexcept { return static_cast<int>(terms.size()); }
};

// Structural checks: bits in {0,1}, all d1 = 1 or all d2 = 1, c > 0 for
// MDT. Throw DomainError.
void check_structure(const MDTWeightSpec& spec);
void check_structure(const ADTWeightSpec& spec);

// Reference specs.
namespace specs {
MDTWeightSpec lue(double a, double c = 1.0);                // w = G^a(x/c)
MDTWeightSpec jue(double a, double b, double c = 1.0);      // w = B^{a,b}(x/c) up to a constant
MDTWeightSpec gamma_product(const std::vector<double>& a);  // M omega = prod Gamma(s + a_i)
ADTWeightSpec gaussian(double c = 0.5);                     // L w = exp(c s^2 / 2)
ADTWeightSpec lue_type(double a);                            // L w = (s+1)^{-a-1}
ADTWeightSpec be1(double a, double beta, double scale);       // L w = L Be_1^{a,beta,scale}
ADTWeightSpec gaussian_lue_mixture();                        // L omega_2 = e^{s^2/4} / (s+1)^2
}  // namespace specs

// M omega_n(s) = c^s prod Gamma(s+a_i)^{d1} / Gamma(s+b_i+n_i)^{d2}.
cplx mdt_omega_transform(const MDTWeightSpec& spec, int n, cplx s);
// M w_j(s) = c^s prod Gamma(s+a_i)^{d1} / Gamma(s+b_i)^{d2} * s^{j-1} / prod_{i<=j} (s+b_i)^{d2}.
cplx mdt_weight_transform(const MDTWeightSpec& spec, int j, cplx s);

// c * integral_{s0}^{s} prod (t+a_i)^{d1} / (t+b_i)^{d2} dt.
cplx adt_exponent(const ADTWeightSpec& spec, cplx s);
// L omega_n(s) = exp(adt_exponent) / prod (s+b_i)^{d2 n_i}.
cplx adt_omega_transform(const ADTWeightSpec& spec, int n, cplx s);
// L w_j(s) = exp(adt_exponent) * s^{j-1} / prod_{i<=j} (s+b_i)^{d2}.
cplx adt_weight_transform(const ADTWeightSpec& spec, int j, cplx s);
// Taylor coefficients of h -> L w_j(s + h) up to `order`.
jet::cseries adt_weight_transform_jet(const ADTWeightSpec& spec, int j, cplx s, int order);

// Jet of 1/L omega_n at 0, with the constant factor normalized so that the
// exponential part equals 1 at the origin.
TaylorJet reciprocal_laplace_jet(const ADTWeightSpec& spec, int n, int order);

struct ValidityReport {
  bool pass = true;
  std::string verdict;                 // "necessary-conditions-pass" or "fail"
  std::vector<std::string> violated;   // clause names
  std::vector<double> alpha;           // ADT: exponent coefficients alpha_1..alpha_d
  std::vector<double> beta;            // ADT: pole powers (one per distinct pole)
  double beta_sum = 0.0;
  int d = 0;
  std::vector<double> checked_points;  // ADT clause (ii) evaluation points
};

ValidityReport validate_mdt_spec(const MDTWeightSpec& spec);
ValidityReport validate_adt_spec(const ADTWeightSpec& spec);

// x-space evaluator for a weight w_j or for omega_n.
struct WeightFunction {
  double lo = 0.0, hi = kInf;
  double lo_exponent = 0.0, hi_exponent = 0.0;
  std::string method;  // "closed:gamma", "closed:beta", "numeric:inverse-mellin", ...
  std::function<double(double)> eval;
  Support support() const { return Support{lo, hi, lo_exponent, hi_exponent}; }
};

WeightFunction weight_function(const MDTWeightSpec& spec, int j, const QuadratureConfig& cfg = {});
WeightFunction weight_function(const ADTWeightSpec& spec, int j, const QuadratureConfig& cfg = {});
WeightFunction omega_function(const MDTWeightSpec& spec, int n, const QuadratureConfig& cfg = {});
WeightFunction omega_function(const ADTWeightSpec& spec, int n, const QuadratureConfig& cfg = {});

std::vector<double> weight_values(const MDTWeightSpec& spec, int j, const std::vector<double>& xs,
                                  const QuadratureConfig& cfg = {});
std::vector<double> weight_values(const ADTWeightSpec& spec, int j, const std::vector<double>& xs,
                                  const QuadratureConfig& cfg = {});

}  // namespace ffmop
