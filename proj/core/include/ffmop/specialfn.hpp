#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <variant>

#include "ffmop/quadrature.hpp"

namespace ffmop {

// B^{a,b}(x) = x^a (1-x)^{b-a-1} on (0,1).
struct BetaDensity {
  double a = 0.0, b = 1.0;
};
// G^a(x) = x^a e^{-x} on (0,inf).
struct GammaDensity {
  double a = 0.0;
};
// e^{-x^2} on the real line.
struct GaussianDensity {};
// Bessel-type family Be_d^{a,b,c} on (0,inf).
struct BeDensity {
  int d = 1;
  double a = 0.0, b = 1.0, c = 1.0;
};
// Higher-order Airy family Ai_d^c on the real line.
struct AiDensity {
  int d = 0;
  double c = 1.0;
};

using DensityId = std::variant<BetaDensity, GammaDensity, GaussianDensity, BeDensity, AiDensity>;

void validate(const DensityId& id);            // throws DomainError
Support support_of(const DensityId& id);        // with endpoint exponents where known
std::string to_string(const DensityId& id);     // canonical text form, e.g. "beta:0,1"
DensityId parse_density(std::string_view text);  // inverse of to_string

// Principal log Gamma via a 15-term Lanczos sum (g = 607/128), with
// reflection for Re z < 1/2. Poles throw DomainError.
cplx log_gamma(cplx z);
double log_gamma(double x);
cplx gamma(cplx z);

// (a)_k as a direct product.
cplx pochhammer(cplx a, int k);
double pochhammer(double a, int k);

// C(n,k); exact products for n <= 40, log space beyond.
double binomial(int n, int k);

double density_value(const DensityId& id, double x);

double be_value(int d, double a, double b, double c, double x);
double ai_value(int d, double c, double x, const QuadratureConfig& cfg = {});

// Closed-form transforms where available; DomainError otherwise.
cplx closed_mellin(const DensityId& id, cplx s);
cplx closed_laplace(const DensityId& id, cplx s);

}  // namespace ffmop
