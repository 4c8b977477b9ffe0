#pragma once

#include <span>
#include <vector>

#include "hardy/function.hpp"

namespace hardy {

// The two explicit families behind the optimality arguments, plus the
// complement of the tent (infinite support; materialized truncated).
enum class TestFamilyKind { IndicatorUn, TentVn, ComplementVn };

const char* to_string(TestFamilyKind k);
TestFamilyKind test_family_from_string(const std::string& s);

struct TestFamily {
    TestFamilyKind kind;
    Coord n; // scale
};

// Exact values on the domain box. IndicatorUn and TentVn require
// dom.radius() >= n + 1 so the transition to zero is inside the box;
// ComplementVn uses the whole box as its truncation radius.
LatticeFunction materialize(const TestFamily& family, const Domain& dom);

// Displayed lower bound for the weighted sum of the indicator family,
// case-split on d - t.
double un_lhs_bound(int d, double t, Coord n);
// Displayed upper bound for its neighbour energy.
double un_rhs_bound(int d, double p, Coord n);

// Tent family: lower bound d n^{d-t} (B(p+1, d-t) - n^{-((d-t)^1)} / ((d-t)^1))
// for 0 < t < d.
double vn_lhs_bound(int d, double t, double p, Coord n);
// Complement family: n^{d-t} for t > d, +infinity at t = d. The bound is used
// on grids with t <= 2d, where the discarded integral factor d/(t-d) is >= 1.
double one_minus_vn_lhs_bound(int d, double t, double p, Coord n);
// Tent neighbour-energy upper bound 2 n^{d-p} (+ 2^{d+1} n^{d-1-p} for d >= 2).
double vn_energy_bound(int d, double p, Coord n);

// Euler Beta via log-gamma, relative error about 1e-12 or better.
double beta_function(double a, double b);

struct ExponentFit {
    double slope = 0.0;
    double residual = 0.0; // Euclidean norm of log-space residuals
};

// Least-squares slope of log(value) against log(n). Needs at least three
// samples with strictly increasing n and positive values.
ExponentFit fit_exponent(std::span<const double> ns, std::span<const double> values);

} // namespace hardy
