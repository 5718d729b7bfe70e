#pragma once

#include <span>

namespace iopscan {

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction,
/// relative tolerance 1e-10 (or better).
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail P(|T| >= |t|) of Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

double mean(std::span<const double> values);
/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> values);

}  // namespace iopscan
