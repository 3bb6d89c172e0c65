#pragma once

#include <functional>

namespace pspectra::quad {

// Integrand called as f(x, dl, dr) where dl = x - a and dr = b - x are
// supplied without cancellation so endpoint-singular factors can be formed
// accurately from the distances instead of from x itself.
using SingularIntegrand = std::function<double(double, double, double)>;

// Double-exponential (tanh-sinh) rule on (a, b).  Converges at machine
// precision for smooth integrands and for integrable algebraic endpoint
// singularities; levels are doubled until two passes agree to rel_tol.
double tanh_sinh(const SingularIntegrand& f, double a, double b,
                 double rel_tol = 1e-15, int max_level = 8);

// Fixed-order Gauss-Legendre on [a, b]; n must be 8, 16 or 32.
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int n = 16);

}  // namespace pspectra::quad
