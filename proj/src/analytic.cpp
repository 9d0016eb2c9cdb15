#include "fibdrift/analytic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace fibdrift {

namespace {
constexpr double kPi = std::numbers::pi;

// Clenshaw over any field (double or complex) at mapped coordinate s.
template <typename T>
T clenshaw(const std::vector<double>& c, T s) {
    if (c.empty()) return T(0);
    T b1(0), b2(0);
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        T b0 = 2.0 * s * b1 - b2 + c[static_cast<size_t>(k)];
        b2 = b1;
        b1 = b0;
    }
    return s * b1 - b2 + c[0];
}

// Least-squares geometric decay rate of the coefficients over their resolved
// stretch.  Below floor_abs the coefficients are rounding noise from the node
// values; fitting into that plateau would report no decay at all.
struct DecayFit {
    int keff = 0;        // last index with |c_k| above the noise floor
    double q = 0.0;      // |c_k| ~ cmax * q^k on the resolved stretch; 0 = none fit
    double cmax = 0.0;
    double floor_abs = 0.0;
};

DecayFit fit_decay(const std::vector<double>& c) {
    DecayFit d;
    for (double v : c) d.cmax = std::max(d.cmax, std::abs(v));
    if (d.cmax == 0.0) return d;
    d.floor_abs = 1e-13 * d.cmax;
    for (int k = 0; k < static_cast<int>(c.size()); ++k)
        if (std::abs(c[static_cast<size_t>(k)]) > d.floor_abs) d.keff = k;
    int klo = std::max(1, d.keff / 2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int k = klo; k <= d.keff; ++k) {
        double ck = std::abs(c[static_cast<size_t>(k)]);
        if (ck <= d.floor_abs) continue;  // exact zeros (parity) carry no slope
        double lx = k, ly = std::log(ck);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    if (cnt >= 4) {
        double slope = (cnt * sxy - sx * sy) / std::max(cnt * sxx - sx * sx, 1e-30);
        d.q = std::min(std::exp(slope), 1.0);  // rising fit = unresolved tail
    }
    return d;
}
}  // namespace

// Barycentric rational interpolant through the node values (greedy support
// selection, null-space weights).  A rational fit recovers nearby poles of the
// underlying function, so it continues off the interval far more accurately
// than the Chebyshev series, whose rounding plateau is amplified by rho^k.
struct AnalyticFunction::Rational {
    std::vector<double> zs, fs, ws;

    Complex eval(Complex z) const {
        Complex num(0), den(0);
        for (size_t k = 0; k < zs.size(); ++k) {
            Complex dz = z - zs[k];
            if (std::abs(dz) < 1e-290) return Complex(fs[k]);
            Complex c = ws[k] / dz;
            num += c * fs[k];
            den += c;
        }
        return num / den;
    }
};

const AnalyticFunction::Rational& AnalyticFunction::rational() const {
    if (rat_) return *rat_;
    auto xs = nodes();
    const int M = static_cast<int>(xs.size());
    std::vector<double> fv(static_cast<size_t>(M));
    double fmax = 0.0;
    for (int i = 0; i < M; ++i) {
        fv[static_cast<size_t>(i)] = (*this)(xs[static_cast<size_t>(i)]);
        fmax = std::max(fmax, std::abs(fv[static_cast<size_t>(i)]));
    }
    Rational r;
    if (fmax == 0.0) {
        r.zs = {xs[0]};
        r.fs = {0.0};
        r.ws = {1.0};
        rat_ = std::make_shared<const Rational>(std::move(r));
        return *rat_;
    }
    std::vector<int> J(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i) J[static_cast<size_t>(i)] = i;
    double mean = 0.0;
    for (double v : fv) mean += v;
    mean /= M;
    std::vector<double> R(static_cast<size_t>(M), mean);
    const int mmax = std::max(1, std::min(M / 2, 48));
    for (int m = 1; m <= mmax; ++m) {
        int pick = 0;
        double worst = -1.0;
        for (int i : J) {
            double e = std::abs(fv[static_cast<size_t>(i)] - R[static_cast<size_t>(i)]);
            if (e > worst) {
                worst = e;
                pick = i;
            }
        }
        r.zs.push_back(xs[static_cast<size_t>(pick)]);
        r.fs.push_back(fv[static_cast<size_t>(pick)]);
        J.erase(std::find(J.begin(), J.end(), pick));
        if (J.empty()) {
            r.ws.assign(r.zs.size(), 1.0);
            break;
        }
        const int rows = static_cast<int>(J.size());
        Eigen::MatrixXd A(rows, m);
        for (int i = 0; i < rows; ++i) {
            double xi = xs[static_cast<size_t>(J[static_cast<size_t>(i)])];
            double fi = fv[static_cast<size_t>(J[static_cast<size_t>(i)])];
            for (int t = 0; t < m; ++t)
                A(i, t) = (fi - r.fs[static_cast<size_t>(t)]) /
                          (xi - r.zs[static_cast<size_t>(t)]);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        Eigen::VectorXd w = svd.matrixV().col(m - 1);
        r.ws.assign(w.data(), w.data() + m);
        double err = 0.0;
        for (int i = 0; i < rows; ++i) {
            int idx = J[static_cast<size_t>(i)];
            double xi = xs[static_cast<size_t>(idx)];
            double num = 0.0, den = 0.0;
            for (int t = 0; t < m; ++t) {
                double c = r.ws[static_cast<size_t>(t)] / (xi - r.zs[static_cast<size_t>(t)]);
                num += c * r.fs[static_cast<size_t>(t)];
                den += c;
            }
            R[static_cast<size_t>(idx)] = num / den;
            err = std::max(err, std::abs(fv[static_cast<size_t>(idx)] -
                                         R[static_cast<size_t>(idx)]));
        }
        if (err <= 1e-13 * fmax) break;
    }
    rat_ = std::make_shared<const Rational>(std::move(r));
    return *rat_;
}

AnalyticFunction::AnalyticFunction(double a, double b, std::vector<double> coeffs)
    : a_(a), b_(b), coeffs_(std::move(coeffs)) {
    if (!(a_ < b_)) fail("BadInterval", "funcspace", "need a < b");
    if (coeffs_.empty()) fail("BadInterval", "funcspace", "empty coefficients");
}

std::vector<double> AnalyticFunction::nodes(double a, double b, int n) {
    // Chebyshev extremal points, ascending
    std::vector<double> x(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        double s = -std::cos(kPi * k / (n - 1));
        x[static_cast<size_t>(k)] = 0.5 * (a + b) + 0.5 * (b - a) * s;
    }
    x.front() = a;
    x.back() = b;
    return x;
}

std::vector<double> AnalyticFunction::nodes() const {
    return nodes(a_, b_, degree());
}

AnalyticFunction AnalyticFunction::from_node_values(double a, double b,
                                                    const std::vector<double>& v) {
    // type-I DCT on extremal nodes; O(n^2) is fine at the degrees used here
    const int n = static_cast<int>(v.size());
    if (n < 2) fail("BadInterval", "funcspace", "need at least 2 node values");
    std::vector<double> c(static_cast<size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            // node k is at s = -cos(pi k/(n-1)); T_j(-cos t) = (-1)^j cos(j t)
            double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
            acc += w * v[static_cast<size_t>(k)] * std::cos(kPi * j * k / (n - 1));
        }
        double sign = (j % 2 == 0) ? 1.0 : -1.0;
        c[static_cast<size_t>(j)] = sign * 2.0 * acc / (n - 1);
    }
    c[0] *= 0.5;
    c[static_cast<size_t>(n - 1)] *= 0.5;
    return AnalyticFunction(a, b, std::move(c));
}

AnalyticFunction AnalyticFunction::fit(const std::function<double(double)>& fn,
                                       double a, double b, int degree,
                                       double tail_tol, bool check_tail) {
    if (degree < 2) fail("BadInterval", "funcspace", "degree must be >= 2");
    auto xs = nodes(a, b, degree);
    std::vector<double> v(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        v[i] = fn(xs[i]);
        if (!std::isfinite(v[i]))
            fail("NonFiniteSample", "funcspace",
                 "node x=" + std::to_string(xs[i]));
    }
    auto f = from_node_values(a, b, v);
    if (check_tail && !f.tail_ok(tail_tol))
        fail("TailNotDecayed", "funcspace",
             "tail ratio " + std::to_string(f.tail_ratio()) + " at degree " +
                 std::to_string(degree));
    return f;
}

double AnalyticFunction::operator()(double x) const {
    double s = (2.0 * x - a_ - b_) / (b_ - a_);
    return clenshaw(coeffs_, s);
}

Complex AnalyticFunction::eval_unchecked(Complex z) const { return continued(z); }

Complex AnalyticFunction::continued(Complex z) const {
    if (z.imag() == 0.0 && z.real() >= a_ && z.real() <= b_)
        return Complex((*this)(z.real()));
    const DecayFit df = fit_decay(coeffs_);
    if (df.cmax == 0.0) return Complex(0.0);
    Complex vr = rational().eval(z);
    double rho = bernstein_radius(z);
    double qr = df.q * rho;
    if (df.q > 0.0 && qr >= 1.0) return vr;  // series carries no information here
    // Series chopped at its resolved length; coefficients beyond keff are
    // rounding noise and only get amplified by rho^k.
    std::vector<double> head(coeffs_.begin(), coeffs_.begin() + df.keff + 1);
    Complex s = (2.0 * z - a_ - b_) / (b_ - a_);
    Complex vc = clenshaw(head, s);
    // Accept the rational value when it sits inside the chopped series' error
    // bar (discarded true tail + amplified noise); a spurious pole of the
    // rational fit near z would blow that band, and then the series wins.
    double tail_err =
        df.q > 0.0 ? df.cmax * std::pow(qr, df.keff + 1) / (1.0 - qr) : 0.0;
    double noise_err = df.floor_abs * std::pow(rho, df.keff) / std::max(rho - 1.0, 0.05);
    double band = 50.0 * (tail_err + noise_err) + 1e-13 * df.cmax;
    return std::abs(vr - vc) <= band ? vr : vc;
}

double AnalyticFunction::bernstein_radius(Complex z) const {
    Complex s = (2.0 * z - a_ - b_) / (b_ - a_);
    Complex w = s + std::sqrt(s - 1.0) * std::sqrt(s + 1.0);  // |w|>=1 branch
    double r = std::abs(w);
    if (r < 1.0) r = 1.0 / r;
    return r;
}

Complex AnalyticFunction::eval_complex(Complex z, double eval_tol) const {
    const DecayFit df = fit_decay(coeffs_);
    if (df.cmax == 0.0) return Complex(0.0);
    double rho = bernstein_radius(z);
    if (rho > 1.0 + 1e-13 && df.q > 0.0) {
        double qr = df.q * rho;
        if (qr >= 1.0)
            fail("OutsideAnalyticityRegion", "funcspace",
                 "Bernstein radius " + std::to_string(rho) +
                     " exceeds decay rate 1/q = " + std::to_string(1.0 / df.q));
        double tail = df.cmax * std::pow(qr, df.keff + 1) / (1.0 - qr);
        if (tail > eval_tol * std::max(1.0, df.cmax))
            fail("OutsideAnalyticityRegion", "funcspace",
                 "extrapolated tail " + std::to_string(tail) + " at |w|=" +
                     std::to_string(rho));
    }
    return continued(z);
}

AnalyticFunction AnalyticFunction::differentiate() const {
    const int n = degree();
    std::vector<double> d(static_cast<size_t>(std::max(1, n - 1)), 0.0);
    if (n >= 2) {
        // standard backward recurrence for Chebyshev derivative coefficients
        std::vector<double> work(static_cast<size_t>(n + 1), 0.0);
        for (int k = n - 1; k >= 1; --k) {
            work[static_cast<size_t>(k - 1)] =
                work[static_cast<size_t>(k + 1)] + 2.0 * k * coeffs_[static_cast<size_t>(k)];
        }
        work[0] *= 0.5;
        for (int k = 0; k < n - 1; ++k) d[static_cast<size_t>(k)] = work[static_cast<size_t>(k)];
        double scale = 2.0 / (b_ - a_);
        for (double& c : d) c *= scale;
    }
    return AnalyticFunction(a_, b_, std::move(d));
}

const AnalyticFunction& AnalyticFunction::dfun() const {
    if (!dfun_) dfun_ = std::make_shared<const AnalyticFunction>(differentiate());
    return *dfun_;
}

double AnalyticFunction::deriv(double x) const { return dfun()(x); }

Complex AnalyticFunction::deriv_complex(Complex z) const {
    return dfun().eval_unchecked(z);
}

AnalyticFunction AnalyticFunction::antiderivative() const {
    const int n = degree();
    std::vector<double> A(static_cast<size_t>(n + 1), 0.0);
    auto c = [&](int k) -> double {
        return k < n ? coeffs_[static_cast<size_t>(k)] : 0.0;
    };
    for (int k = 1; k <= n; ++k) {
        double prev = c(k - 1), next = c(k + 1);
        if (k == 1)
            A[1] = prev - 0.5 * next;  // c0 enters T1 directly
        else
            A[static_cast<size_t>(k)] = (prev - next) / (2.0 * k);
    }
    double scale = 0.5 * (b_ - a_);
    for (double& x : A) x *= scale;
    AnalyticFunction F(a_, b_, std::move(A));
    // pin F(a)=0
    double Fa = F(a_);
    F.coeffs_[0] -= Fa;
    return F;
}

double AnalyticFunction::integrate(double lo, double hi) const {
    auto F = antiderivative();
    return F(hi) - F(lo);
}

double AnalyticFunction::invert_monotone(double y, double lo, double hi,
                                         double tol) const {
    double flo = (*this)(lo) - y, fhi = (*this)(hi) - y;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        fail("NotBracketed", "funcspace",
             "no sign change on [" + std::to_string(lo) + "," +
                 std::to_string(hi) + "]");
    double x = 0.5 * (lo + hi);
    auto df = differentiate();
    for (int it = 0; it < 200; ++it) {
        double fx = (*this)(x) - y;
        if (std::abs(fx) <= tol * (1.0 + std::abs(y))) return x;
        if ((fx > 0.0) == (fhi > 0.0))
            hi = x;
        else
            lo = x;
        double d = df(x);
        double step = (d != 0.0) ? fx / d : 0.0;
        double xn = x - step;
        if (!(xn > lo && xn < hi) || d == 0.0) xn = 0.5 * (lo + hi);  // safeguard
        if (std::abs(xn - x) < 1e-17 * (1.0 + std::abs(x))) return xn;
        x = xn;
    }
    return x;
}

double AnalyticFunction::tail_ratio() const {
    const int n = degree();
    double cmax = 0.0;
    for (double c : coeffs_) cmax = std::max(cmax, std::abs(c));
    if (cmax == 0.0) return 0.0;
    double t = std::abs(coeffs_.back());
    if (n >= 2) t = std::max(t, std::abs(coeffs_[static_cast<size_t>(n - 2)]));
    return t / cmax;
}

}  // namespace fibdrift
