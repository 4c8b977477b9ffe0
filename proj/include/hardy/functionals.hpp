#pragma once

#include <limits>

#include "hardy/function.hpp"

namespace hardy {

// Index-range/weight tag for the energy double sums. Local tags run over
// nearest-neighbour pairs, fractional tags over all distinct ordered pairs.
//
//   LocalExcludeOrigin : j, k in lattice minus the origin
//   LocalIncludeOrigin : j, k in the full lattice
//   LocalWeighted      : j != 0, k in lattice, weight |j|_inf^{-eps}
//   LocalWeightedMax   : j, k in lattice, weight (|j|_inf v |k|_inf)^{-eps}
//   FracExcludeOrigin  : j, m != 0, m != j, kernel |j-m|_inf^{-(sp+d)}
//   FracFull           : j, m in lattice, m != j, same kernel
//   FracWeighted       : as FracFull with kernel exponent sp+d+eps
enum class EnergyKind {
    LocalExcludeOrigin,
    LocalIncludeOrigin,
    LocalWeighted,
    LocalWeightedMax,
    FracExcludeOrigin,
    FracFull,
    FracWeighted,
};

struct EnergyVariant {
    EnergyKind kind;
    double eps = 0.0;

    static EnergyVariant local_exclude_origin() { return {EnergyKind::LocalExcludeOrigin}; }
    static EnergyVariant local_include_origin() { return {EnergyKind::LocalIncludeOrigin}; }
    static EnergyVariant local_weighted(double eps) { return {EnergyKind::LocalWeighted, eps}; }
    static EnergyVariant local_weighted_max(double eps) { return {EnergyKind::LocalWeightedMax, eps}; }
    static EnergyVariant frac_exclude_origin() { return {EnergyKind::FracExcludeOrigin}; }
    static EnergyVariant frac_full() { return {EnergyKind::FracFull}; }
    static EnergyVariant frac_weighted(double eps) { return {EnergyKind::FracWeighted, eps}; }

    bool is_local() const {
        return kind == EnergyKind::LocalExcludeOrigin || kind == EnergyKind::LocalIncludeOrigin ||
               kind == EnergyKind::LocalWeighted || kind == EnergyKind::LocalWeightedMax;
    }
    bool is_fractional() const { return !is_local(); }
    bool is_weighted() const {
        return kind == EnergyKind::LocalWeighted || kind == EnergyKind::LocalWeightedMax ||
               kind == EnergyKind::FracWeighted;
    }
};

const char* to_string(EnergyKind k);

// |z|^p with the 0 -> 0 guard; valid for every p > 0.
double pow_abs(double z, double p);

// Sum over the box minus the origin of |u(j)|^p |j|_inf^{-t}.
double weighted_lhs(const LatticeFunction& u, double p, double t);

// Same sum restricted to min_norm <= |j|_inf < max_norm.
double weighted_lhs_range(const LatticeFunction& u, double p, double t,
                          Coord min_norm,
                          Coord max_norm = std::numeric_limits<Coord>::max());

// Ordered nearest-neighbour pair sum of |u(j)-u(k)|^p over the variant's
// ranges; each interior unordered edge contributes twice.
double local_energy(const LatticeFunction& u, double p, EnergyVariant variant);

// Ordered pair sum of |u(j)-u(m)|^p |j-m|_inf^{-(sp+d)} (+eps for the
// weighted tag) with both points in the support box enlarged by `margin`.
// All kernel terms are nonnegative, so the value is a lower bound of the
// infinite sum and is nondecreasing in the margin.
double fractional_energy(const LatticeFunction& u, double s, double p,
                         EnergyVariant variant, Coord margin,
                         std::size_t point_budget = kDefaultPointBudget);

// Lemma-style annuli pairing: sum over n >= 1, j in A_n, m in A_{n+K} of
// |u(j)-u(m)|^p 2^{-(n+K)(d+sp)}. Exact for compactly supported u: annuli
// beyond the support contribute through closed-form cardinalities.
double annuli_energy(const LatticeFunction& u, double s, double p, int K);

} // namespace hardy
