#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "fibdrift/analytic.hpp"

namespace fibdrift {

enum class Family { Covering, Unimodal };

struct FamilyKind {
    Family tag = Family::Covering;
    int ell = 3;

    // Covering: ell odd >= 3.  Unimodal: ell even >= 4.  Throws BadFamily.
    void validate() const;
};

// One increasing branch of a two-branch map: an interpolant on its domain
// [f.a(), f.b()] together with the abscissa of its single interior critical
// point (odd order, value 0 there in exact arithmetic).
struct Branch {
    AnalyticFunction f;
    double crit = 0.0;

    double lo() const { return f.a(); }
    double hi() const { return f.b(); }
};

// Two-branch Fibonacci map: b0 on a subinterval containing 0, b1 on a
// disjoint subinterval, both increasing onto the range interval (I_lo, I_hi),
// shared critical value 0, and b0(0) = 1 (the normalized critical orbit).
struct ConcreteFibMap {
    double I_lo = 0.0, I_hi = 0.0;
    Branch b0, b1;
    int ell = 3;
    double tuning = 0.0;  // the one-parameter family coordinate this map came from
};

// Structural class invariants (domains disjoint and inside I, 0 interior to
// dom b0, positive slopes, critical values ~0, b0(0) ~ 1).  Throws ClassViolation.
void check_class(const ConcreteFibMap& g, double tol = 1e-7);

// One-parameter family of candidate maps with a tuning bracket.
struct FibTemplate {
    std::function<ConcreteFibMap(double)> make;
    double lo = 0.0, hi = 0.0;
};

// Two-cubic covering template used for bootstrap seeds and tests; d positions
// the second branch's inflection.  Generalizes to any odd ell.
ConcreteFibMap make_power_template(int ell, double d);

// First-return renormalization to dom(b0), restricted to the 1-and-2-iterate
// part, rescaled by zeta(x) = x/lambda with lambda = b1(b0(0)) so the new map
// again sends 0 to 1.  Failure reports which composition step escaped and on
// which side.
struct RenormFailure {
    int stage = 0;  // 1: b0(0) missed dom(b1); 2: b1(b0(0)) missed dom(b0)
    int side = 0;   // -1 low, +1 high
};
struct RenormStep {
    ConcreteFibMap map;
    double lambda = 0.0;
};
// Returns the step, or the failure signal if the return structure is not
// Fibonacci at this level.  degree = sampling degree of the new branches.
std::optional<RenormStep> try_renormalize(const ConcreteFibMap& g,
                                          RenormFailure* why = nullptr,
                                          int degree = 48);
// Throwing form: CombinatoricsExhausted on failure.
ConcreteFibMap renormalize(const ConcreteFibMap& g, int degree = 48);

// Number of successful renormalizations before the Fibonacci return structure
// breaks, capped at kmax.
int fib_depth(const ConcreteFibMap& g, int kmax, int degree = 48);

// Tune the template to Fibonacci combinatorics for `depth` return levels by
// nested window refinement: at each level keep the connected parameter run
// whose maps renormalize one level deeper.  (The renormalization cascade
// flips orientation level by level, so a single global bisection sign does
// not exist; the window refinement is the bisection done level-wise.)
// Throws NoSignChange if failures never bracket a window inside (lo, hi),
// DepthUnresolvable if the window collapses below machine resolution.
// On success *window receives the final parameter window.
ConcreteFibMap find_fibonacci_parameter(const FamilyKind& kind,
                                        const FibTemplate& tmpl, int depth,
                                        std::pair<double, double>* window = nullptr);

}  // namespace fibdrift
