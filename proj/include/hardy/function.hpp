#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hardy/lattice.hpp"

namespace hardy {

// Compactly supported function on a Domain, stored as a dense value table in
// the domain's enumeration order. Values outside the box are identically 0.
class LatticeFunction {
  public:
    explicit LatticeFunction(Domain domain)
        : domain_(std::move(domain)), values_(domain_.size(), 0.0) {}

    LatticeFunction(Domain domain, std::vector<double> values);

    const Domain& domain() const { return domain_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double at_point(std::span<const Coord> x) const {
        if (!domain_.contains(x)) return 0.0;
        return values_[domain_.index_of(x)];
    }

    void set(std::span<const Coord> x, double v) { values_[domain_.index_of(x)] = v; }
    void set(const LatticePoint& x, double v) { set(x.span(), v); }

    void check_finite() const; // throws NumericError naming the offending index

    double max_abs() const;
    LatticeFunction scaled(double lambda) const;

  private:
    Domain domain_;
    std::vector<double> values_;
};

} // namespace hardy
