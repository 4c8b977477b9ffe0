#include "hardy/function.hpp"

#include <cmath>
#include <string>

namespace hardy {

LatticeFunction::LatticeFunction(Domain domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.size())
        throw ValidationError("value table size does not match the domain box");
}

void LatticeFunction::check_finite() const {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw NumericError("non-finite value at " + to_string(domain_.point_at(i)));
    }
}

double LatticeFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

LatticeFunction LatticeFunction::scaled(double lambda) const {
    LatticeFunction out(domain_);
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = lambda * values_[i];
    return out;
}

} // namespace hardy
