#include "hardy/paths.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "hardy/parallel.hpp"

namespace hardy {

namespace {

void check_same_dim(const LatticePoint& j, const LatticePoint& m) {
    if (j.dim() != m.dim()) throw ValidationError("path endpoints have different dimensions");
}

LatticePoint rotate_left(const LatticePoint& x, int beta) {
    const int d = x.dim();
    LatticePoint y = x;
    for (int q = 0; q < d; ++q) y[q] = x[(q + beta) % d];
    return y;
}

LatticePoint rotate_right(const LatticePoint& x, int beta) {
    const int d = x.dim();
    LatticePoint y = x;
    for (int q = 0; q < d; ++q) y[(q + beta) % d] = x[q];
    return y;
}

} // namespace

LatticePath build_path(const LatticePoint& j, const LatticePoint& m) {
    check_same_dim(j, m);
    LatticePath path;
    path.points.reserve(static_cast<std::size_t>(norm_one(j.span()) + 1));
    LatticePoint x = j;
    path.points.push_back(x);
    for (int q = 0; q < j.dim(); ++q) {
        const Coord step = m[q] > x[q] ? 1 : -1;
        while (x[q] != m[q]) {
            x[q] += step;
            path.points.push_back(x);
        }
    }
    return path;
}

LatticePath build_shifted_path(const LatticePoint& j, const LatticePoint& m, int beta) {
    check_same_dim(j, m);
    if (beta < 0 || beta >= j.dim()) throw ValidationError("shift index out of range");
    LatticePath inner = build_path(rotate_left(j, beta), rotate_left(m, beta));
    LatticePath out;
    out.points.reserve(inner.points.size());
    for (const auto& x : inner.points) out.points.push_back(rotate_right(x, beta));
    return out;
}

bool validate_path(const LatticePath& path, int beta) {
    if (path.points.empty()) return false;
    const int d = path.points.front().dim();
    // axis rank under the rotation beta, beta+1, ..., beta-1
    auto rank = [&](int q) { return (q - beta + d) % d; };
    int last_rank = -1;
    std::vector<int> used_dir(static_cast<std::size_t>(d), 0);
    Coord steps = 0;
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const LatticePoint& a = path.points[i];
        const LatticePoint& b = path.points[i + 1];
        if (!are_neighbors(a.span(), b.span())) return false;
        int axis = -1;
        Coord dir = 0;
        for (int q = 0; q < d; ++q) {
            if (a[q] != b[q]) {
                axis = q;
                dir = b[q] - a[q];
            }
        }
        if (used_dir[static_cast<std::size_t>(axis)] == 0) {
            used_dir[static_cast<std::size_t>(axis)] = static_cast<int>(dir);
        } else if (used_dir[static_cast<std::size_t>(axis)] != static_cast<int>(dir)) {
            return false; // axis traversed in both directions
        }
        if (rank(axis) < last_rank) return false; // axis order must be monotone
        last_rank = rank(axis);
        ++steps;
    }
    const LatticePoint& j = path.points.front();
    const LatticePoint& m = path.points.back();
    Coord l1 = 0;
    for (int q = 0; q < d; ++q) l1 += std::abs(j[q] - m[q]);
    return steps == l1;
}

namespace {

// Flattened coordinates over [0, 2^{n+k})^d with axis 0 most significant,
// matching Domain enumeration order.
struct CensusGrid {
    int d;
    Coord side;
    std::size_t vertices;

    std::size_t flatten(std::span<const Coord> x) const {
        std::size_t idx = 0;
        for (int q = 0; q < d; ++q)
            idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(x[static_cast<std::size_t>(q)]);
        return idx;
    }
};

} // namespace

CensusResult edge_usage_census(int n, int k, int d, int beta, std::size_t point_budget) {
    if (n < 1 || k < 1 || d < 1) throw ValidationError("census needs n, k, d >= 1");
    if (beta != kCensusAllShifts && (beta < 0 || beta >= d))
        throw ValidationError("shift index out of range");

    const auto A_n = annulus_points(n, d, point_budget);
    const auto A_nk = annulus_points(n + k, d, point_budget);
    const double pairs =
        static_cast<double>(A_n.size()) * static_cast<double>(A_nk.size());
    if (pairs > static_cast<double>(point_budget))
        throw CapacityError("census pair count exceeds the point budget");

    CensusResult res;
    res.n = n;
    res.k = k;
    res.d = d;
    res.beta = beta;
    res.pair_count = static_cast<long long>(A_n.size()) * static_cast<long long>(A_nk.size());

    const Coord side = Coord{1} << (n + k);
    CensusGrid grid{d, side, 1};
    for (int q = 0; q < d; ++q) grid.vertices *= static_cast<std::size_t>(side);
    const std::size_t slots = grid.vertices * 2 * static_cast<std::size_t>(d);
    if (static_cast<double>(slots) > 4.0 * static_cast<double>(point_budget))
        throw CapacityError("census counter table exceeds the point budget");

    std::vector<int> betas;
    if (beta == kCensusAllShifts)
        for (int b = 0; b < d; ++b) betas.push_back(b);
    else
        betas.push_back(beta);

    // Every path coordinate lies between the endpoint coordinates, so the
    // vertex grid [0, 2^{n+k})^d always contains the walk. Vertices can dip
    // below the inner annulus radius near the origin, though; those are
    // counted rather than rejected.
    const Coord lo_norm = Coord{1} << (n - 1);

    std::vector<long long> counts(slots, 0);
    res.per_beta_max.assign(betas.size(), 0);

    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
        const int b = betas[bi];
        std::vector<long long> beta_counts(slots, 0);

        // fixed lane grid, one writer per lane; integer merges keep the
        // totals independent of scheduling
        const std::size_t lanes = std::min<std::size_t>(16, std::max<std::size_t>(A_n.size(), 1));
        std::vector<std::vector<long long>> partial(lanes);
        for (auto& lane : partial) lane.assign(slots, 0);
        std::vector<long long> strayed(lanes, 0);

        parallel_for(lanes, 1, [&](std::size_t lane_lo, std::size_t lane_hi) {
            std::vector<Coord> x(static_cast<std::size_t>(d));
            for (std::size_t lane = lane_lo; lane < lane_hi; ++lane) {
                for (std::size_t ji = lane; ji < A_n.size(); ji += lanes) {
                    const LatticePoint& j = A_n[ji];
                    for (const LatticePoint& m : A_nk) {
                        // walk pat^b(j, m) without materializing it
                        for (int q = 0; q < d; ++q) x[static_cast<std::size_t>(q)] = j[q];
                        for (int qi = 0; qi < d; ++qi) {
                            const int q = (b + qi) % d;
                            const Coord target = m[q];
                            const Coord step = target > x[static_cast<std::size_t>(q)] ? 1 : -1;
                            while (x[static_cast<std::size_t>(q)] != target) {
                                if (norm_inf(std::span<const Coord>(x)) < lo_norm)
                                    ++strayed[lane];
                                const std::size_t v = grid.flatten(x);
                                const std::size_t dir =
                                    static_cast<std::size_t>(q) +
                                    (step < 0 ? static_cast<std::size_t>(d) : 0);
                                ++partial[lane][v * 2 * static_cast<std::size_t>(d) + dir];
                                x[static_cast<std::size_t>(q)] += step;
                            }
                        }
                    }
                }
            }
        });

        for (const auto& lane : partial)
            for (std::size_t i = 0; i < slots; ++i) beta_counts[i] += lane[i];
        for (long long s : strayed) res.strayed_below += s;

        long long bmax = 0;
        for (std::size_t i = 0; i < slots; ++i) {
            bmax = std::max(bmax, beta_counts[i]);
            counts[i] += beta_counts[i];
        }
        res.per_beta_max[bi] = bmax;
    }

    const double single_bound =
        std::exp2(static_cast<double>(d + 1) * n) * std::exp2(static_cast<double>(k) * d);
    res.bound = (beta == kCensusAllShifts) ? 2.0 * single_bound : single_bound;

    long long max_count = 0;
    std::vector<Coord> x(static_cast<std::size_t>(d), 0);
    for (std::size_t v = 0; v < grid.vertices; ++v) {
        for (std::size_t dir = 0; dir < 2 * static_cast<std::size_t>(d); ++dir) {
            const long long c = counts[v * 2 * static_cast<std::size_t>(d) + dir];
            if (c == 0) continue;
            max_count = std::max(max_count, c);
            CensusEntry e;
            e.count = c;
            e.axis = static_cast<int>(dir % static_cast<std::size_t>(d));
            std::size_t rest = v;
            LatticePoint from(std::vector<Coord>(static_cast<std::size_t>(d), 0));
            for (int q = d - 1; q >= 0; --q) {
                from[q] = static_cast<Coord>(rest % static_cast<std::size_t>(side));
                rest /= static_cast<std::size_t>(side);
            }
            LatticePoint to = from;
            to[e.axis] += dir < static_cast<std::size_t>(d) ? 1 : -1;
            e.from = std::move(from);
            e.to = std::move(to);
            res.entries.push_back(std::move(e));
        }
    }
    res.max_count = max_count;
    return res;
}

void CensusResult::write_csv(std::ostream& os) const {
    os << "from,to,axis,count,bound\n";
    for (const auto& e : entries) {
        os << '"' << to_string(e.from) << "\",\"" << to_string(e.to) << "\"," << e.axis << ','
           << e.count << ',' << bound << '\n';
    }
}

} // namespace hardy
