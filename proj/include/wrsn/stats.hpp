#pragma once

// Probability primitives behind the maliciousness scorers.

namespace wrsn::stats {

double log_poisson_pmf(long k, double lambda);
double poisson_pmf(long k, double lambda);

/// P(|X - lambda| >= |count - lambda|) for X ~ Poisson(lambda).
double poisson_two_sided_tail(long count, double lambda);
/// Complement of poisson_two_sided_tail, summed directly over the central
/// region so small tails keep full relative precision.
double poisson_central_mass(long count, double lambda);

double normal_pdf(double x, double mean, double variance);
double normal_cdf(double z);
/// 2 * (1 - Phi(|z|)).
double normal_two_sided_tail(double z);
/// 1 - normal_two_sided_tail(z), evaluated as erf(|z|/sqrt 2).
double normal_central_mass(double z);

double log_beta_function(double a, double b);
double beta_pdf(double x, double a, double b);
/// Regularized incomplete Beta I_x(a, b).
double regularized_incomplete_beta(double x, double a, double b);

/// Mode of Beta(a, b). Boundary modes for a <= 1 or b <= 1; 0.5 when both are
/// <= 1 (uniform or U-shaped, no unique interior mode).
double beta_mode(double a, double b);

/// Probability mass at least as far from the mode as x, on x's side of the
/// mode, normalized by that side's mass. Equals 1 at the mode.
double beta_mode_tail(double x, double a, double b);

}  // namespace wrsn::stats
