#pragma once

// Distribution functions needed for p-values. Domain violations throw
// Error(DomainError).

namespace lagbo::special {

double erf(double x);
double erfc(double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double x, double a, double b);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double incomplete_gamma_p(double a, double x);

double normal_pdf(double x);
double normal_cdf(double x);
/// Upper tail 1 - Phi(x), computed without cancellation.
double normal_sf(double x);

/// CDF of Snedecor's F with (d1, d2) degrees of freedom.
double f_cdf(double f, double d1, double d2);
double f_sf(double f, double d1, double d2);

double chi2_cdf(double x, double df);
double chi2_sf(double x, double df);

}  // namespace lagbo::special
