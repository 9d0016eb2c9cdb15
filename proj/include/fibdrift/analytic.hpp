#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "fibdrift/errors.hpp"

namespace fibdrift {

using Complex = std::complex<double>;

// Real-analytic function on [a,b], stored as a Chebyshev series in the
// variable s = (2x-a-b)/(b-a).  Values at complex points come from the same
// Clenshaw recurrence; validity there is guarded by a coefficient-decay
// heuristic (see eval_complex).
class AnalyticFunction {
  public:
    AnalyticFunction() = default;
    AnalyticFunction(double a, double b, std::vector<double> coeffs);

    // Interpolates fn at the degree+1 Chebyshev extremal nodes of [a,b].
    // Throws NonFiniteSample / TailNotDecayed.
    static AnalyticFunction fit(const std::function<double(double)>& fn, double a,
                                double b, int degree, double tail_tol = 1e-12,
                                bool check_tail = true);

    // Interpolant through the values at this interval's extremal nodes
    // (values[k] at node k); no resampling, no tail check.
    static AnalyticFunction from_node_values(double a, double b,
                                             const std::vector<double>& values);

    double a() const { return a_; }
    double b() const { return b_; }
    int degree() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<double>& coeffs() const { return coeffs_; }

    // Extremal collocation nodes of this interval, ascending, size = degree.
    std::vector<double> nodes() const;
    static std::vector<double> nodes(double a, double b, int n);

    double operator()(double x) const;
    double deriv(double x) const;

    // Analytic continuation; throws OutsideAnalyticityRegion when the
    // extrapolated coefficient tail diverges at z's Bernstein radius.
    Complex eval_complex(Complex z, double eval_tol = 1e-8) const;
    // Complex evaluation without the analyticity-region guard (callers that
    // track their own region, e.g. contour stepping near arc endpoints).
    Complex eval_unchecked(Complex z) const;
    Complex deriv_complex(Complex z) const;

    AnalyticFunction differentiate() const;
    // Antiderivative vanishing at a().
    AnalyticFunction antiderivative() const;
    double integrate(double lo, double hi) const;

    // Solve f(x)=y on [lo,hi] where f is strictly monotone there.
    // Safeguarded Newton with a maintained bisection bracket.
    double invert_monotone(double y, double lo, double hi,
                           double tol = 1e-13) const;

    // max of last two |c| relative to max |c|
    double tail_ratio() const;
    bool tail_ok(double tail_tol = 1e-12) const { return tail_ratio() <= tail_tol; }

    // Bernstein ellipse radius of z for this interval (>= 1, = 1 on [a,b]).
    double bernstein_radius(Complex z) const;

  private:
    struct Rational;  // barycentric rational continuation of the interpolant

    // Off-axis value: rational continuation cross-checked against the series
    // chopped at its resolved length (the full series amplifies the rounding
    // plateau by rho^k and is useless away from the interval).
    Complex continued(Complex z) const;
    const Rational& rational() const;
    const AnalyticFunction& dfun() const;

    double a_ = -1.0, b_ = 1.0;
    std::vector<double> coeffs_;  // c_0 .. c_{n-1}, T_k(s) basis
    mutable std::shared_ptr<const Rational> rat_;
    mutable std::shared_ptr<const AnalyticFunction> dfun_;
};

}  // namespace fibdrift
