#pragma once

namespace tameproj {

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
/// x in [0, 1]. Modified Lentz evaluation of the continued fraction, using
/// the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) where it converges faster.
double regularized_incomplete_beta(double a, double b, double x);

/// log B(a, b).
double log_beta(double a, double b);

}  // namespace tameproj
