#pragma once

#include <iosfwd>
#include <vector>

#include "hardy/lattice.hpp"

namespace hardy {

// Axis-ordered shortest lattice path. Steps along axis q are contiguous,
// axes are visited in increasing (rotated) order, and no axis is traversed
// in both directions.
struct LatticePath {
    std::vector<LatticePoint> points;

    std::size_t length() const { return points.empty() ? 0 : points.size() - 1; }
    const LatticePoint& front() const { return points.front(); }
    const LatticePoint& back() const { return points.back(); }
};

// Path from j to m moving along axis 1 first, then axis 2, and so on.
LatticePath build_path(const LatticePoint& j, const LatticePoint& m);

// Conjugation by the cyclic shift: axes are visited in the order
// beta+1, ..., d, 1, ..., beta.
LatticePath build_shifted_path(const LatticePoint& j, const LatticePoint& m, int beta);

// Checks the four path properties for the given axis rotation.
bool validate_path(const LatticePath& path, int beta = 0);

inline constexpr int kCensusAllShifts = -1;

struct CensusEntry {
    LatticePoint from;
    LatticePoint to;
    int axis;        // 0-based step axis
    long long count; // pairs (j, m) whose path traverses (from -> to)
};

struct CensusResult {
    int n = 0;
    int k = 0;
    int d = 0;
    int beta = 0; // kCensusAllShifts when summed over all shifts
    long long pair_count = 0;
    long long max_count = 0;           // max over directed edges
    double bound = 0.0;                // 2^{(d+1)n} 2^{kd}, doubled for ALL
    long long strayed_below = 0;       // path steps starting below the inner radius
    std::vector<long long> per_beta_max;
    std::vector<CensusEntry> entries;  // nonzero counts only

    void write_csv(std::ostream& os) const;
};

// Exhaustive edge-usage counts over all (j, m) in A_n x A_{n+k}. Paths whose
// endpoints sit on complementary axes can pass near (or through) the origin,
// below the inner annulus; such steps are tallied in strayed_below.
CensusResult edge_usage_census(int n, int k, int d, int beta = 0,
                               std::size_t point_budget = kDefaultPointBudget);

} // namespace hardy
