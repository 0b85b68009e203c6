#pragma once

namespace ppfdr {

//! Regularized incomplete beta function I_x(a, b) for a, b > 0 and
//! x in [0, 1], evaluated by the modified Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

//! As above, but taking 1 - x explicitly so callers that know the
//! complement in closed form avoid the cancellation in 1 - x.
double regularized_incomplete_beta(double a, double b, double x, double complement);

//! CDF of the standard Student-t distribution with dof > 0 degrees of
//! freedom. Accurate to roughly 1e-13 absolute for moderate dof.
double standard_t_cdf(double z, double dof);

//! Standard normal CDF.
double standard_normal_cdf(double x);

} // namespace ppfdr
