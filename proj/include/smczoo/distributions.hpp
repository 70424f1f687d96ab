#pragma once

namespace smczoo {

/// Regularised incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a Student t statistic with (possibly fractional)
/// degrees of freedom.
double student_t_two_sided_p(double t, double dof);

/// Survival function of the chi-squared distribution with 1 dof.
double chi_squared_sf_1dof(double x);

/// Survival function of the F distribution.
double f_sf(double x, double dof1, double dof2);

/// Upper quantile of the F distribution: smallest x with sf(x) <= alpha.
double f_critical(double dof1, double dof2, double alpha = 0.05);

}  // namespace smczoo
