#pragma once

#include <vector>

#include "ffmop/polynomial.hpp"

// Reference values computed independently of the core library (series,
// recurrences, std::tgamma). Used by the acceptance suite and unit tests.
namespace ffmop::oracle {

inline constexpr double kEulerGamma = 0.57721566490153286061;

// Modified Bessel I_nu(x) by its power series.
double bessel_i(double nu, double x);
// K_0(x) by its small-argument series.
double bessel_k0(double x);
// E_1(x) by its power series, x > 0.
double expint_e1(double x);
// Classical Airy Ai(x) by its Maclaurin series (|x| <= 6).
double airy_ai(double x);

// Monic orthogonal polynomials from three-term recurrences.
Poly laguerre_monic(int n, double a);             // weight x^a e^{-x}
Poly hermite_monic(int n);                        // weight e^{-x^2}
Poly jacobi_monic_01(int n, double a, double b);  // weight x^a (1-x)^b on (0,1)

// Be_1^{a,b,c}(x) through I-Bessel: c^{-1} e^{-x/c} (t/b)^{a/2} I_a(2 sqrt(b t)), t = x/c, b > 0.
double be1_from_bessel(double a, double b, double c, double x);
// Ai_1^c(x) = (3c)^{-1/3} Ai(-x / (3c)^{1/3}).
double ai1_from_airy(double c, double x);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

}  // namespace ffmop::oracle
