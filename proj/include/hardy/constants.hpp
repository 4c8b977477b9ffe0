#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hardy/functionals.hpp"
#include "hardy/lattice.hpp"

namespace hardy {

// One inequality regime: an item of the local theorem (T11_*), of the
// fractional theorem (T12_*), or one of the two core-lemma cases.
enum class Regime {
    T11_1, // 0 < p <= 1 < d, weight exponent 1
    T11_2, // 1 <= p < d, d - p >= delta > 0, weight exponent p
    T11_3, // d < p, weight exponent p, u(0) = 0
    T11_4, // d = p, eps > 0, weight exponent p + eps, u(0) = 0
    T11_5, // d = 1, 0 < p < 1, eps > 0, weight exponent 1 + eps, u(0) = 0
    T12_1, // sp < d, d - sp >= delta > 0
    T12_2, // sp = d, eps > 0, u(0) = 0
    T12_3, // sp > d, u(0) = 0
    Lem21Small, // sp < d
    Lem21Large, // sp > d
};

const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);
bool regime_is_fractional(Regime r);
bool regime_is_lemma(Regime r);

inline constexpr int kAutoK = 0;

struct HardyParams {
    Regime regime;
    int d = 1;
    double p = 2.0;
    double s = 0.0;     // fractional regimes only; derived otherwise
    double eps = 0.0;   // T11_4, T11_5, T12_2
    double delta = 0.0; // T11_2, T12_1
    int K = kAutoK;     // annulus gap; kAutoK picks the smallest admissible
    LatticeKind lattice = LatticeKind::NonNegative;
};

// Everything the harness needs once the regime rules are applied.
struct ResolvedParams {
    HardyParams input;
    double s_used = 0.0; // s substituted by the proof (s, 1/p v 1, 1 + eps/p, ...)
    double sp = 0.0;     // s_used * p
    double t = 0.0;      // weight exponent on the left side
    int K = 0;
    EnergyVariant rhs_variant{EnergyKind::LocalExcludeOrigin};
    bool origin_must_vanish = false;
};

// Validates the regime rules and fills in derived quantities; throws
// ValidationError naming the violated condition.
ResolvedParams resolve_params(const HardyParams& params);

// Smallest K in {1, 2, ...} with 2^{sp+1} (2^{p-1} v 1) 2^{-K|sp-d|} <= 1.
int minimal_K(double s, double p, int d);
// Same condition with an explicit gap in place of |sp - d|.
int minimal_K_for_gap(double s, double p, double gap);

// C(d,p,s,K) = 2^{sp+1+K(d ^ sp)} (2^{p-1} v 1) / (1 - 2^{-d}).
double lemma_constant(int d, double p, double s, int K);

// Dimension-free bound 2^{sp+2+K sp} (2^{p-1} v 1) >= C(d,p,s,K) for sp <= d.
double lemma_constant_dim1_bound(double p, double s, int K);

// Path-decomposition constant C_L(k,s,p), three cases split on sp vs p v 1.
double path_constant(int k, double s, double p);

// Small-box constant c(p,d,N): Nd steps of
// c <- (1 + (2^{p-1} v 1)) c  v  (2^{p-1} v 1) from c = 1/2.
// Returns +infinity once the recursion passes 1e300.
double trivial_lemma_constant(double p, int d, Coord N);

struct TraceFactor {
    std::string name;
    double value;
    std::string source; // which part of the argument contributes the factor
};

// value = sum over terms of (product of the term's factors)
struct TraceTerm {
    std::string label;
    std::vector<TraceFactor> factors;
    double value() const;
};

struct ConstantReport {
    Regime regime;
    LatticeKind lattice;
    int d = 0;
    double p = 0.0;
    double s_used = 0.0;
    double t = 0.0;
    int K = 0;
    double value = 0.0;
    std::vector<TraceTerm> assembly;

    double value_from_trace() const;
};

// The constant the proofs actually assemble for the regime, with the full
// factor trace. Upper bound; no tightness is claimed.
ConstantReport theorem_constant(const HardyParams& params);

} // namespace hardy
