#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace fibdrift {

// tanh-sinh quadrature over (lo,hi); tolerates integrable endpoint
// singularities (log, power < 1).  Doubles the level until two successive
// levels agree to rel_tol or max_level is hit.
// Returns {value, last level difference}.
std::pair<double, double> de_quadrature(const std::function<double(double)>& f,
                                        double lo, double hi,
                                        double rel_tol = 1e-12,
                                        int max_level = 10);

// Convenience wrapper that throws QuadratureNotConverged at `tol`.
double de_integrate(const std::function<double(double)>& f, double lo, double hi,
                    double tol = 1e-8);

// Gauss-Legendre nodes/weights on [-1,1], by Newton on the Legendre
// recurrence.  Cached per n.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

// Gauss-Legendre integral of f over [lo,hi] with n nodes.
double gl_integrate(const std::function<double(double)>& f, double lo, double hi,
                    int n = 24);

}  // namespace fibdrift
