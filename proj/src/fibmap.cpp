#include "fibdrift/fibmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace fibdrift {

namespace {

double odd_root(double u, int ell) {
    return u >= 0.0 ? std::pow(u, 1.0 / ell) : -std::pow(-u, 1.0 / ell);
}

// branch value with a small extrapolation guard at the domain edges
double beval(const Branch& br, double x, double guard = 1e-6) {
    double span = br.hi() - br.lo();
    if (x < br.lo() - guard * span || x > br.hi() + guard * span)
        fail("DomainEscape", "renorm", "branch evaluated outside its domain");
    return br.f(std::clamp(x, br.lo(), br.hi()));
}

double binv(const Branch& br, double y) {
    return br.f.invert_monotone(y, br.lo(), br.hi());
}

}  // namespace

void FamilyKind::validate() const {
    if (tag == Family::Covering && (ell < 3 || ell % 2 == 0))
        fail("BadFamily", "renorm",
             "covering family needs odd ell >= 3, got " + std::to_string(ell));
    if (tag == Family::Unimodal && (ell < 4 || ell % 2 == 1))
        fail("BadFamily", "renorm",
             "unimodal family needs even ell >= 4, got " + std::to_string(ell));
}

void check_class(const ConcreteFibMap& g, double tol) {
    auto bad = [&](const std::string& what) {
        fail("ClassViolation", "renorm", what);
    };
    double p = g.b0.lo(), q = g.b0.hi(), a = g.b1.lo(), b = g.b1.hi();
    if (!(g.I_lo < p && q < g.I_hi && g.I_lo < a && b < g.I_hi))
        bad("branch domain not inside the range interval");
    if (!(q < a || b < p)) bad("branch domains overlap");
    if (!(p < 0.0 && 0.0 < q)) bad("0 not interior to dom b0");
    if (!(p < g.b0.crit && g.b0.crit < q && a < g.b1.crit && g.b1.crit < b))
        bad("critical point not interior");
    for (const Branch* br : {&g.b0, &g.b1}) {
        double lo = br->lo(), hi = br->hi();
        for (int i = 0; i <= 800; ++i) {
            double x = lo + (hi - lo) * i / 800.0;
            if (br->f.deriv(x) < -1e-9) bad("branch not increasing");
        }
        if (std::abs(br->f(br->crit)) > tol) bad("critical value not 0");
    }
    if (std::abs(g.b0.f(0.0) - 1.0) > tol) bad("b0(0) != 1");
}

ConcreteFibMap make_power_template(int ell, double d) {
    // branch(x) = s*(x-c)^ell chosen so each branch is onto (IA, IB) and
    // b0(0) = 1 exactly
    const double IA = -2.0, IB = 4.0, c = -0.75, beta = 1.2;
    const double alpha = 1.0 / std::pow(-c, ell);  // makes b0(0) = 1
    auto cube_branch = [&](double lo_v, double hi_v, double crit,
                           double scale) -> Branch {
        double lo = crit + odd_root(lo_v / scale, ell);
        double hi = crit + odd_root(hi_v / scale, ell);
        auto nodes = AnalyticFunction::nodes(lo, hi, ell + 6);
        std::vector<double> v(nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i)
            v[i] = scale * std::pow(nodes[i] - crit, ell);
        return Branch{AnalyticFunction::from_node_values(lo, hi, v), crit};
    };
    ConcreteFibMap g;
    g.I_lo = IA;
    g.I_hi = IB;
    g.b0 = cube_branch(IA, IB, c, alpha);
    g.b1 = cube_branch(IA, IB, d, beta);
    g.ell = ell;
    g.tuning = d;
    return g;
}

std::optional<RenormStep> try_renormalize(const ConcreteFibMap& g,
                                          RenormFailure* why, int degree) {
    double p = g.b0.lo(), q = g.b0.hi();
    double a = g.b1.lo(), b = g.b1.hi();
    double v1 = beval(g.b0, 0.0);
    if (!(a < v1 && v1 < b)) {
        if (why) *why = {1, v1 <= a ? -1 : 1};
        return std::nullopt;
    }
    double v2 = beval(g.b1, v1);
    if (!(p < v2 && v2 < q)) {
        if (why) *why = {2, v2 <= p ? -1 : 1};
        return std::nullopt;
    }
    const double lam = v2;  // = b1(b0(0)), the rescaling zeta^-1
    // one-iterate return window A = b0^{-1}(dom b0)
    double A0 = binv(g.b0, p), A1 = binv(g.b0, q);
    // two-iterate return window B = (b1 b0)^{-1}(dom b0)
    double B0 = binv(g.b0, binv(g.b1, p)), B1 = binv(g.b0, binv(g.b1, q));

    auto sample = [&](double lo, double hi,
                      const std::function<double(double)>& fn) {
        auto nodes = AnalyticFunction::nodes(lo, hi, degree);
        std::vector<double> v(nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i) v[i] = fn(nodes[i]);
        return AnalyticFunction::from_node_values(lo, hi, v);
    };

    RenormStep st;
    st.lambda = lam;
    double d0lo = std::min(B0 / lam, B1 / lam), d0hi = std::max(B0 / lam, B1 / lam);
    st.map.b0 = Branch{
        sample(d0lo, d0hi,
               [&](double x) { return beval(g.b1, beval(g.b0, lam * x)) / lam; }),
        binv(g.b0, g.b1.crit) / lam};
    double d1lo = std::min(A0 / lam, A1 / lam), d1hi = std::max(A0 / lam, A1 / lam);
    st.map.b1 = Branch{
        sample(d1lo, d1hi, [&](double x) { return beval(g.b0, lam * x) / lam; }),
        g.b0.crit / lam};
    st.map.I_lo = std::min(p / lam, q / lam);
    st.map.I_hi = std::max(p / lam, q / lam);
    st.map.ell = g.ell;
    st.map.tuning = g.tuning;
    return st;
}

ConcreteFibMap renormalize(const ConcreteFibMap& g, int degree) {
    RenormFailure why;
    auto st = try_renormalize(g, &why, degree);
    if (!st)
        fail("CombinatoricsExhausted", "renorm",
             "critical orbit escaped at stage " + std::to_string(why.stage) +
                 (why.side < 0 ? " low" : " high"));
    return std::move(st->map);
}

int fib_depth(const ConcreteFibMap& g, int kmax, int degree) {
    ConcreteFibMap cur = g;
    for (int k = 0; k < kmax; ++k) {
        std::optional<RenormStep> st;
        try {
            st = try_renormalize(cur, nullptr, degree);
        } catch (const Error&) {
            return k;  // inversion lost its bracket: structure already broken
        }
        if (!st) return k;
        cur = std::move(st->map);
    }
    return kmax;
}

ConcreteFibMap find_fibonacci_parameter(const FamilyKind& kind,
                                        const FibTemplate& tmpl, int depth,
                                        std::pair<double, double>* window) {
    kind.validate();
    if (depth < 1) fail("BadDepth", "renorm", "depth must be >= 1");
    double lo = tmpl.lo, hi = tmpl.hi;
    const int npts = 33;
    bool narrowed = false;
    for (int k = 1; k <= depth; ++k) {
        std::vector<double> ds(npts);
        std::vector<int> dep(npts);
        int pts = npts;
        for (int attempt = 0;; ++attempt) {
            ds.resize(static_cast<size_t>(pts));
            dep.resize(static_cast<size_t>(pts));
            for (int i = 0; i < pts; ++i) {
                ds[static_cast<size_t>(i)] = lo + (hi - lo) * i / (pts - 1);
                dep[static_cast<size_t>(i)] =
                    fib_depth(tmpl.make(ds[static_cast<size_t>(i)]), k);
            }
            int first = -1, last = -1;
            for (int i = 0; i < pts; ++i)
                if (dep[static_cast<size_t>(i)] >= k) {
                    if (first < 0) first = i;
                    last = i;
                }
            if (first >= 0) {
                bool all = (first == 0 && last == pts - 1);
                double nlo = ds[static_cast<size_t>(std::max(first - 1, 0))];
                double nhi = ds[static_cast<size_t>(std::min(last + 1, pts - 1))];
                if (!all) narrowed = true;
                lo = nlo;
                hi = nhi;
                break;
            }
            // no grid point survives level k: either the window fell between
            // grid points or there is none; refine before giving up
            if (attempt >= 2) {
                if (!narrowed)
                    fail("NoSignChange", "renorm",
                         "combinatorics does not vary across the bracket "
                         "(stuck at depth " + std::to_string(k - 1) + ")");
                fail("DepthUnresolvable", "renorm",
                     "window lost below grid resolution at depth " +
                         std::to_string(k) + ", width " +
                         std::to_string(hi - lo));
            }
            pts = 4 * (pts - 1) + 1;
        }
        if (hi - lo < 64 * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, std::abs(lo)) && k < depth) {
            // window at machine resolution: accept only if the midpoint
            // already reaches the requested depth
            double mid = 0.5 * (lo + hi);
            if (fib_depth(tmpl.make(mid), depth) >= depth) {
                lo = hi = mid;
                break;
            }
            fail("DepthUnresolvable", "renorm",
                 "parameter window reached machine epsilon at depth " +
                     std::to_string(k));
        }
    }
    if (window) *window = {lo, hi};
    ConcreteFibMap g = tmpl.make(0.5 * (lo + hi));
    return g;
}

}  // namespace fibdrift
