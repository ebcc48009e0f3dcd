#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ffmop/polynomial.hpp"
#include "ffmop/quadrature.hpp"
#include "ffmop/weights.hpp"

namespace ffmop {

// P(x) = sum_k (-1)^{n-k} C(n,k) M omega_n(n+1) / M omega_n(k+1) x^k.
Poly mop_mdt(const MDTWeightSpec& spec, int n);
// Same formula from the values M(1), ..., M(n+1).
Poly mop_mdt_from_values(const std::vector<cplx>& moments, int n);

// P(x) = L omega_n(0) sum_k (-1)^{n-k} C(n,k) (1/L omega_n)^{(n-k)}(0) x^k.
Poly mop_adt(const ADTWeightSpec& spec, int n);
// Same formula from a jet of 1/L omega_n at 0.
Poly mop_adt_from_jet(const TaylorJet& reciprocal, int n);

// R[j][k] = int P x^k w_j / int |P x^k w_j| for k < n_j.
using ResidualMatrix = std::vector<std::vector<double>>;
ResidualMatrix orthogonality_residuals(const Poly& P, const MDTWeightSpec& spec, int n,
                                       const QuadratureConfig& cfg = {});
ResidualMatrix orthogonality_residuals(const Poly& P, const ADTWeightSpec& spec, int n,
                                       const QuadratureConfig& cfg = {});
double max_abs(const ResidualMatrix& R);

enum class ConvMode { Mul, Add };

// Spec whose omega_n transform is the product of the two omega_n transforms.
MDTWeightSpec mdt_product_spec(const MDTWeightSpec& A, const MDTWeightSpec& B, int n);
ADTWeightSpec adt_product_spec(const ADTWeightSpec& A, const ADTWeightSpec& B, int n);

struct DecompositionReport {
  // max |coeff difference| / max(1, max |coeff|)
  double max_deviation = 0.0;
  double abs_deviation = 0.0;
  Poly combined;   // P for the product spec
  Poly convolved;  // ff convolution of the two polynomials
};

DecompositionReport decomposition_check(const MDTWeightSpec& A, const MDTWeightSpec& B, int n);
DecompositionReport decomposition_check(const ADTWeightSpec& A, const ADTWeightSpec& B, int n);

// q = q1 *_M omega_n (mul) or q1 *_L omega_n (add) evaluated at x.
double biorthogonal_partner(const RealFn& q1, const Support& q1_support, const MDTWeightSpec& spec, double x,
                            const QuadratureConfig& cfg = {}, int n = 1);
double biorthogonal_partner(const RealFn& q1, const Support& q1_support, const ADTWeightSpec& spec, double x,
                            const QuadratureConfig& cfg = {}, int n = 1);

// Transforms of the sample functions v_m (m = 1..n) and the known
// denominators D_m with D_m T v_m / T v_1 expected to be a polynomial of
// degree at most m-1.
struct TransformFamily {
  std::string name;
  std::function<cplx(int m, cplx s)> transform;
  std::function<Poly(int m)> denominator;
};

TransformFamily mdt_family(const MDTWeightSpec& spec);
TransformFamily adt_family(const ADTWeightSpec& spec);
// v_m = x^{m-1} (G^0 + B^{0,1}), transformed numerically.
TransformFamily broken_mixture_family(const QuadratureConfig& cfg = {});

struct RatioReport {
  bool pass = true;
  double max_residual = 0.0;
  std::vector<double> residuals;  // per m
  double threshold = 1e-8;
};

// Fits a degree-(m-1) polynomial through the first m samples and reports
// the relative residual at the remaining (at least 3) samples.
RatioReport ratio_structure_check(const TransformFamily& family, int n, const std::vector<double>& s_samples,
                                  double threshold = 1e-8);

}  // namespace ffmop
