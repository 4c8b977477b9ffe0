#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

using Coord = std::int64_t;

inline constexpr std::size_t kDefaultPointBudget = 100'000'000;

struct LatticePoint {
    std::vector<Coord> coords;

    LatticePoint() = default;
    explicit LatticePoint(std::vector<Coord> c) : coords(std::move(c)) {}
    LatticePoint(std::initializer_list<Coord> c) : coords(c) {}

    int dim() const { return static_cast<int>(coords.size()); }
    Coord operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }
    Coord& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }
    std::span<const Coord> span() const { return coords; }

    bool operator==(const LatticePoint&) const = default;
    auto operator<=>(const LatticePoint&) const = default;
};

std::string to_string(const LatticePoint& x);

Coord norm_inf(std::span<const Coord> x);
Coord norm_one(std::span<const Coord> x);
double norm_p(std::span<const Coord> x, double p);

inline Coord norm_inf(const LatticePoint& x) { return norm_inf(x.span()); }
inline Coord norm_one(const LatticePoint& x) { return norm_one(x.span()); }

// Euclidean distance exactly one: the points differ by 1 in a single axis.
bool are_neighbors(std::span<const Coord> a, std::span<const Coord> b);

enum class LatticeKind { NonNegative, Full };

const char* to_string(LatticeKind k);
LatticeKind lattice_kind_from_string(const std::string& s);

enum class NeighborVariant { AllLattice, ExcludeOrigin };

// Finite support box inside one of the two lattices. NonNegative uses
// [0,N]^d, Full uses [-N,N]^d; enumeration is lexicographic with the first
// coordinate most significant.
class Domain {
  public:
    Domain(LatticeKind kind, int dimension, Coord radius,
           std::size_t point_budget = kDefaultPointBudget);

    LatticeKind kind() const { return kind_; }
    int dim() const { return dim_; }
    Coord radius() const { return radius_; }
    Coord lo() const { return lo_; }   // smallest coordinate in the box
    Coord hi() const { return radius_; } // largest coordinate in the box
    Coord side() const { return side_; }
    std::size_t size() const { return size_; }
    std::size_t origin_index() const { return origin_index_; }

    std::size_t index_of(std::span<const Coord> x) const;
    void decode(std::size_t index, std::span<Coord> out) const;
    LatticePoint point_at(std::size_t index) const;

    bool contains(std::span<const Coord> x) const;   // inside the box
    bool in_lattice(std::span<const Coord> x) const; // inside the lattice

    // Same kind and dimension with the radius grown by `extra`.
    Domain expanded(Coord extra, std::size_t point_budget = kDefaultPointBudget) const;

    bool operator==(const Domain&) const = default;

  private:
    LatticeKind kind_;
    int dim_;
    Coord radius_;
    Coord lo_;
    Coord side_;
    std::size_t size_;
    std::size_t origin_index_;
};

// Dyadic annulus A_n: {0} for n = 0, otherwise the nonnegative points with
// 2^{n-1} <= max-norm <= 2^n - 1.
long long annulus_cardinality(int n, int d);
bool annulus_contains(std::span<const Coord> x, int n);
std::vector<LatticePoint> annulus_points(int n, int d,
                                         std::size_t point_budget = kDefaultPointBudget);

struct SphereDecomposition {
    std::vector<LatticePoint> faces;   // W_k: exactly one coordinate equals k
    std::vector<LatticePoint> corners; // S_k \ W_k
};

long long sphere_face_count(Coord k, int d);   // d k^{d-1}
long long sphere_corner_count(Coord k, int d); // (k+1)^d - k^d - d k^{d-1}

SphereDecomposition sphere_decomposition(Coord k, int d,
                                         std::size_t point_budget = kDefaultPointBudget);

std::vector<LatticePoint> neighbors(const LatticePoint& x, LatticeKind kind,
                                    NeighborVariant variant);
std::vector<LatticePoint> neighbors(const LatticePoint& x, const Domain& dom,
                                    NeighborVariant variant);

} // namespace hardy
