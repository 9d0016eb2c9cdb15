#include "fibdrift/quadrature.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "fibdrift/errors.hpp"

namespace fibdrift {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
}  // namespace

std::pair<double, double> de_quadrature(const std::function<double(double)>& f,
                                        double lo, double hi, double rel_tol,
                                        int max_level) {
    // x = mid + rad*tanh(pi/2 sinh t); abscissas cluster doubly
    // exponentially at the endpoints.  The offset from the nearer endpoint is
    // computed as 2e/(1+e) with e = exp(-pi sinh t), never as mid + rad*tanh,
    // so endpoint singularities keep being sampled at distances far below
    // 1 ulp of mid.  What remains unreachable is the strip within 1 ulp of a
    // *nonzero* endpoint (x itself cannot represent it); for algebraic
    // singularities there that costs ~sqrt(ulp), for log ones ~ulp*log(ulp).
    const double rad = 0.5 * (hi - lo);
    const double tmax = 4.5;
    auto term = [&](double t) -> double {
        double ch = std::cosh(t);
        double em = std::exp(-kPi * std::sinh(std::abs(t)));
        double opp = 1.0 + em;
        double d = rad * (2.0 * em / opp);  // distance to the nearer endpoint
        if (d <= 0.0) return 0.0;
        double x = t >= 0.0 ? hi - d : lo + d;
        if (x <= lo || x >= hi) return 0.0;  // offset rounded onto the endpoint
        double w = kHalfPi * ch * (4.0 * em / (opp * opp));
        double v = f(x);
        return std::isfinite(v) ? v * w : 0.0;
    };

    double h = 1.0;
    double sum = term(0.0);
    for (double t = h; t <= tmax; t += h) sum += term(t) + term(-t);
    double prev = sum * h * rad;
    double diff = std::abs(prev);
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double t = h; t <= tmax; t += 2.0 * h) add += term(t) + term(-t);
        sum += add;
        double cur = sum * h * rad;
        diff = std::abs(cur - prev);
        if (diff <= rel_tol * std::max(1.0, std::abs(cur)) && level >= 3)
            return {cur, diff};
        prev = cur;
    }
    return {prev, diff};
}

double de_integrate(const std::function<double(double)>& f, double lo,
                    double hi, double tol) {
    auto [val, diff] = de_quadrature(f, lo, hi, tol * 1e-2, 12);
    if (diff > tol * std::max(1.0, std::abs(val)))
        fail("QuadratureNotConverged", "quadrature",
             "successive levels differ by " + std::to_string(diff));
    return val;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<double> x(static_cast<size_t>(n)), w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Chebyshev guess, then Newton on P_n
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it2 = 0; it2 < 100; ++it2) {
            double p = 1.0, q = 0.0;
            for (int m = 0; m < n; ++m) {
                double r = q;
                q = p;
                p = ((2 * m + 1) * xi * q - m * r) / (m + 1);
            }
            double dp = n * (xi * p - q) / (xi * xi - 1.0);
            double dx = p / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) {
                double pp = 1.0, qq = 0.0;
                for (int m = 0; m < n; ++m) {
                    double r = qq;
                    qq = pp;
                    pp = ((2 * m + 1) * xi * qq - m * r) / (m + 1);
                }
                double dpp = n * (xi * pp - qq) / (xi * xi - 1.0);
                x[static_cast<size_t>(i)] = -xi;  // ascending
                w[static_cast<size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dpp * dpp);
                break;
            }
        }
    }
    auto [ins, ok] = cache.emplace(n, std::make_pair(std::move(x), std::move(w)));
    (void)ok;
    return ins->second;
}

double gl_integrate(const std::function<double(double)>& f, double lo,
                    double hi, int n) {
    const auto& [x, w] = gauss_legendre(n);
    const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        acc += w[static_cast<size_t>(i)] * f(mid + rad * x[static_cast<size_t>(i)]);
    return acc * rad;
}

}  // namespace fibdrift
