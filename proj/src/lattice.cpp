#include "hardy/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace hardy {

std::string to_string(const LatticePoint& x) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < x.dim(); ++i) {
        if (i) os << ',';
        os << x[i];
    }
    os << ')';
    return os.str();
}

Coord norm_inf(std::span<const Coord> x) {
    Coord m = 0;
    for (Coord c : x) m = std::max(m, c < 0 ? -c : c);
    return m;
}

Coord norm_one(std::span<const Coord> x) {
    Coord m = 0;
    for (Coord c : x) m += (c < 0 ? -c : c);
    return m;
}

double norm_p(std::span<const Coord> x, double p) {
    double acc = 0.0;
    for (Coord c : x) acc += std::pow(std::abs(static_cast<double>(c)), p);
    return std::pow(acc, 1.0 / p);
}

bool are_neighbors(std::span<const Coord> a, std::span<const Coord> b) {
    if (a.size() != b.size()) return false;
    int diffs = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Coord d = a[i] - b[i];
        if (d == 0) continue;
        if (d != 1 && d != -1) return false;
        if (++diffs > 1) return false;
    }
    return diffs == 1;
}

const char* to_string(LatticeKind k) {
    return k == LatticeKind::NonNegative ? "zplus" : "z";
}

LatticeKind lattice_kind_from_string(const std::string& s) {
    if (s == "zplus" || s == "nonnegative") return LatticeKind::NonNegative;
    if (s == "z" || s == "full") return LatticeKind::Full;
    throw ValidationError("unknown lattice kind: " + s);
}

Domain::Domain(LatticeKind kind, int dimension, Coord radius, std::size_t point_budget)
    : kind_(kind), dim_(dimension), radius_(radius) {
    if (dimension < 1) throw ValidationError("domain dimension must be >= 1");
    if (radius < 1) throw ValidationError("domain radius must be >= 1");
    lo_ = kind == LatticeKind::NonNegative ? 0 : -radius;
    side_ = radius - lo_ + 1;
    double size = 1.0;
    for (int i = 0; i < dimension; ++i) size *= static_cast<double>(side_);
    if (size > static_cast<double>(point_budget))
        throw CapacityError("domain box exceeds the point budget");
    size_ = 1;
    for (int i = 0; i < dimension; ++i) size_ *= static_cast<std::size_t>(side_);
    std::vector<Coord> zero(static_cast<std::size_t>(dimension), 0);
    origin_index_ = index_of(zero);
}

std::size_t Domain::index_of(std::span<const Coord> x) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim_; ++i)
        idx = idx * static_cast<std::size_t>(side_) + static_cast<std::size_t>(x[static_cast<std::size_t>(i)] - lo_);
    return idx;
}

void Domain::decode(std::size_t index, std::span<Coord> out) const {
    for (int i = dim_ - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = lo_ + static_cast<Coord>(index % static_cast<std::size_t>(side_));
        index /= static_cast<std::size_t>(side_);
    }
}

LatticePoint Domain::point_at(std::size_t index) const {
    LatticePoint p(std::vector<Coord>(static_cast<std::size_t>(dim_), 0));
    decode(index, p.coords);
    return p;
}

bool Domain::contains(std::span<const Coord> x) const {
    if (static_cast<int>(x.size()) != dim_) return false;
    for (Coord c : x)
        if (c < lo_ || c > radius_) return false;
    return true;
}

bool Domain::in_lattice(std::span<const Coord> x) const {
    if (kind_ == LatticeKind::Full) return true;
    for (Coord c : x)
        if (c < 0) return false;
    return true;
}

Domain Domain::expanded(Coord extra, std::size_t point_budget) const {
    return Domain(kind_, dim_, radius_ + extra, point_budget);
}

long long annulus_cardinality(int n, int d) {
    if (n == 0) return 1;
    long long outer = 1, inner = 1;
    for (int i = 0; i < d; ++i) {
        outer *= (1LL << n);
        inner *= (1LL << (n - 1));
    }
    return outer - inner;
}

bool annulus_contains(std::span<const Coord> x, int n) {
    for (Coord c : x)
        if (c < 0) return false;
    const Coord r = norm_inf(x);
    if (n == 0) return r == 0;
    return r >= (Coord{1} << (n - 1)) && r <= (Coord{1} << n) - 1;
}

namespace {

// Lexicographic walk over [0, hi]^d applying fn to each point.
template <typename Fn>
void for_each_box_point(Coord hi, int d, Fn&& fn) {
    std::vector<Coord> x(static_cast<std::size_t>(d), 0);
    for (;;) {
        fn(std::span<const Coord>(x));
        int i = d - 1;
        while (i >= 0 && x[static_cast<std::size_t>(i)] == hi) {
            x[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++x[static_cast<std::size_t>(i)];
    }
}

} // namespace

std::vector<LatticePoint> annulus_points(int n, int d, std::size_t point_budget) {
    if (n < 0) throw ValidationError("annulus level must be >= 0");
    if (d < 1) throw ValidationError("dimension must be >= 1");
    if (n == 0) return {LatticePoint(std::vector<Coord>(static_cast<std::size_t>(d), 0))};
    if (static_cast<double>(n) * d > 62 ||
        std::pow(2.0, static_cast<double>(n) * d) > static_cast<double>(point_budget))
        throw CapacityError("annulus enumeration exceeds the point budget");
    const Coord hi = (Coord{1} << n) - 1;
    const Coord lo_norm = Coord{1} << (n - 1);
    std::vector<LatticePoint> out;
    out.reserve(static_cast<std::size_t>(annulus_cardinality(n, d)));
    for_each_box_point(hi, d, [&](std::span<const Coord> x) {
        if (norm_inf(x) >= lo_norm) out.emplace_back(std::vector<Coord>(x.begin(), x.end()));
    });
    return out;
}

long long sphere_face_count(Coord k, int d) {
    long long v = d;
    for (int i = 0; i < d - 1; ++i) v *= k;
    return v;
}

long long sphere_corner_count(Coord k, int d) {
    long long outer = 1, inner = 1;
    for (int i = 0; i < d; ++i) {
        outer *= (k + 1);
        inner *= k;
    }
    return outer - inner - sphere_face_count(k, d);
}

SphereDecomposition sphere_decomposition(Coord k, int d, std::size_t point_budget) {
    if (k < 1) throw ValidationError("sphere level must be >= 1");
    if (d < 1) throw ValidationError("dimension must be >= 1");
    double box = 1.0;
    for (int i = 0; i < d; ++i) box *= static_cast<double>(k + 1);
    if (box > static_cast<double>(point_budget))
        throw CapacityError("sphere enumeration exceeds the point budget");
    SphereDecomposition out;
    for_each_box_point(k, d, [&](std::span<const Coord> x) {
        if (norm_inf(x) != k) return;
        int at_k = 0;
        for (Coord c : x) at_k += (c == k);
        auto& dst = (at_k == 1) ? out.faces : out.corners;
        dst.emplace_back(std::vector<Coord>(x.begin(), x.end()));
    });
    return out;
}

std::vector<LatticePoint> neighbors(const LatticePoint& x, LatticeKind kind,
                                    NeighborVariant variant) {
    std::vector<LatticePoint> out;
    out.reserve(2 * static_cast<std::size_t>(x.dim()));
    for (int q = 0; q < x.dim(); ++q) {
        for (Coord step : {Coord{1}, Coord{-1}}) {
            LatticePoint y = x;
            y[q] += step;
            if (kind == LatticeKind::NonNegative && y[q] < 0) continue;
            if (variant == NeighborVariant::ExcludeOrigin && norm_inf(y) == 0) continue;
            out.push_back(std::move(y));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<LatticePoint> neighbors(const LatticePoint& x, const Domain& dom,
                                    NeighborVariant variant) {
    return neighbors(x, dom.kind(), variant);
}

} // namespace hardy
