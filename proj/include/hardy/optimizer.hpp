#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "hardy/verify.hpp"

namespace hardy {

struct OptimizeOptions {
    double tol = 1e-10;
    int max_iter = 200;
    int cg_steps = 64;   // fixed conjugate-direction steps per outer solve
    int restarts = 8;    // general method only
    std::uint64_t seed = 1;
    Coord margin = 0;    // fractional regimes; 0 picks margin = N
    const LatticeFunction* init = nullptr;
};

struct OptimizeResult {
    double estimate = 0.0; // ratio of the witness, recomputed through the functionals
    int iterations = 0;
    bool converged = false;
    bool lower_bound_only = false; // p < 1: nonsmooth ascent certifies a lower bound
    LatticeFunction witness;
    std::vector<std::pair<int, double>> history; // (iteration, accepted ratio)
};

// p = 2 only: power iteration on the generalized pencil (weight form, energy
// form), both applied matrix-free. The accepted ratio history is monotone
// nondecreasing.
OptimizeResult best_constant_p2(const HardyParams& params, Coord N,
                                const OptimizeOptions& opts = {});

// Any p > 0: normalized ratio ascent with backtracking line search and
// random restarts. Analytic gradients for p > 1, central differences
// otherwise.
OptimizeResult best_constant_general(const HardyParams& params, Coord N,
                                     const OptimizeOptions& opts = {});

// Ratio lhs/rhs of one function under the regime's forms (0/0 -> 0).
double regime_ratio(const HardyParams& params, const LatticeFunction& u, Coord margin);

} // namespace hardy
