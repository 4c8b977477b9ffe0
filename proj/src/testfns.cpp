#include "hardy/testfns.hpp"

#include <cmath>
#include <limits>

namespace hardy {

const char* to_string(TestFamilyKind k) {
    switch (k) {
        case TestFamilyKind::IndicatorUn: return "un";
        case TestFamilyKind::TentVn: return "vn";
        case TestFamilyKind::ComplementVn: return "one_minus_vn";
    }
    return "?";
}

TestFamilyKind test_family_from_string(const std::string& s) {
    if (s == "un" || s == "indicator") return TestFamilyKind::IndicatorUn;
    if (s == "vn" || s == "tent") return TestFamilyKind::TentVn;
    if (s == "one_minus_vn" || s == "complement") return TestFamilyKind::ComplementVn;
    throw ValidationError("unknown test family: " + s);
}

LatticeFunction materialize(const TestFamily& family, const Domain& dom) {
    if (family.n < 1) throw ValidationError("test family scale must be >= 1");
    if (family.kind != TestFamilyKind::ComplementVn && dom.radius() < family.n + 1)
        throw ValidationError("domain radius must be >= n + 1 for this family");
    LatticeFunction u(dom);
    const int d = dom.dim();
    std::vector<Coord> x(static_cast<std::size_t>(d));
    const double n = static_cast<double>(family.n);
    for (std::size_t i = 0; i < dom.size(); ++i) {
        dom.decode(i, x);
        const double r = static_cast<double>(norm_inf(std::span<const Coord>(x)));
        switch (family.kind) {
            case TestFamilyKind::IndicatorUn: u[i] = r <= n ? 1.0 : 0.0; break;
            case TestFamilyKind::TentVn: u[i] = std::max(1.0 - r / n, 0.0); break;
            case TestFamilyKind::ComplementVn: u[i] = 1.0 - std::max(1.0 - r / n, 0.0); break;
        }
    }
    return u;
}

double un_lhs_bound(int d, double t, Coord n) {
    if (t <= 0 || d < 1 || n < 1) throw ValidationError("un_lhs_bound needs d,n >= 1 and t > 0");
    const double dd = d, nn = static_cast<double>(n);
    const double gap = dd - t;
    if (gap >= 1.0) return dd / gap * std::pow(nn, gap);
    if (gap == 0.0) return dd * std::log(nn + 1.0);
    return dd / std::abs(gap) * std::abs(std::pow(nn + 1.0, gap) - 1.0);
}

double un_rhs_bound(int d, double p, Coord n) {
    if (p <= 0 || d < 1 || n < 1) throw ValidationError("un_rhs_bound needs d,n >= 1 and p > 0");
    const double dd = d, nn = static_cast<double>(n);
    double b = 2.0 * dd * std::pow(nn, dd - 1.0);
    if (d >= 2) b += std::exp2(dd + 1.0) * dd * std::pow(nn, dd - 2.0);
    return b;
}

double vn_lhs_bound(int d, double t, double p, Coord n) {
    if (!(t > 0 && t < static_cast<double>(d)))
        throw ValidationError("vn_lhs_bound needs 0 < t < d");
    if (p <= 0 || n < 1) throw ValidationError("vn_lhs_bound needs p > 0 and n >= 1");
    const double dd = d, nn = static_cast<double>(n);
    const double gap1 = std::min(dd - t, 1.0);
    return dd * std::pow(nn, dd - t) *
           (beta_function(p + 1.0, dd - t) - std::pow(nn, -gap1) / gap1);
}

double one_minus_vn_lhs_bound(int d, double t, double /*p*/, Coord n) {
    if (t < static_cast<double>(d))
        throw ValidationError("one_minus_vn_lhs_bound needs t >= d");
    if (n < 1) throw ValidationError("one_minus_vn_lhs_bound needs n >= 1");
    if (t == static_cast<double>(d)) return std::numeric_limits<double>::infinity();
    return std::pow(static_cast<double>(n), static_cast<double>(d) - t);
}

double vn_energy_bound(int d, double p, Coord n) {
    if (p <= 0 || d < 1 || n < 1) throw ValidationError("vn_energy_bound needs d,n >= 1 and p > 0");
    const double dd = d, nn = static_cast<double>(n);
    double b = 2.0 * std::pow(nn, dd - p);
    if (d >= 2) b += std::exp2(dd + 1.0) * std::pow(nn, dd - 1.0 - p);
    return b;
}

double beta_function(double a, double b) {
    if (a <= 0 || b <= 0) throw ValidationError("beta function needs positive arguments");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

ExponentFit fit_exponent(std::span<const double> ns, std::span<const double> values) {
    if (ns.size() != values.size()) throw ValidationError("fit_exponent: size mismatch");
    if (ns.size() < 3) throw ValidationError("fit_exponent needs at least three samples");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (values[i] <= 0) throw ValidationError("fit_exponent needs positive values");
        if (i > 0 && !(ns[i] > ns[i - 1]))
            throw ValidationError("fit_exponent needs strictly increasing n");
    }
    const std::size_t m = ns.size();
    double mx = 0, my = 0;
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        xs[i] = std::log(ns[i]);
        ys[i] = std::log(values[i]);
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw ValidationError("fit_exponent: degenerate abscissae");
    ExponentFit fit;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double r2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = ys[i] - (intercept + fit.slope * xs[i]);
        r2 += e * e;
    }
    fit.residual = std::sqrt(r2);
    return fit;
}

} // namespace hardy
