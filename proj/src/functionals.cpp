#include "hardy/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hardy/parallel.hpp"

namespace hardy {

const char* to_string(EnergyKind k) {
    switch (k) {
        case EnergyKind::LocalExcludeOrigin: return "local_exclude_origin";
        case EnergyKind::LocalIncludeOrigin: return "local_include_origin";
        case EnergyKind::LocalWeighted: return "local_weighted";
        case EnergyKind::LocalWeightedMax: return "local_weighted_max";
        case EnergyKind::FracExcludeOrigin: return "frac_exclude_origin";
        case EnergyKind::FracFull: return "frac_full";
        case EnergyKind::FracWeighted: return "frac_weighted";
    }
    return "?";
}

double pow_abs(double z, double p) {
    if (z == 0.0) return 0.0;
    return std::exp(p * std::log(std::abs(z)));
}

namespace {

struct PowOne {
    double operator()(double z) const { return std::abs(z); }
};
struct PowTwo {
    double operator()(double z) const { return z * z; }
};
struct PowGeneral {
    double p;
    double operator()(double z) const { return pow_abs(z, p); }
};

template <typename Fn>
auto dispatch_pow(double p, Fn&& fn) {
    if (p == 1.0) return fn(PowOne{});
    if (p == 2.0) return fn(PowTwo{});
    return fn(PowGeneral{p});
}

double finish_sum(std::vector<double>& rows, const char* what) {
    const double total = pairwise_sum(rows);
    if (!std::isfinite(total)) throw NumericError(std::string(what) + ": non-finite sum");
    return total;
}

// norm^{-t} lookup; falls back to pow for boxes too large to table.
class NormWeight {
  public:
    NormWeight(Coord max_norm, double t) : t_(t) {
        if (max_norm <= (Coord{1} << 21)) {
            table_.resize(static_cast<std::size_t>(max_norm) + 1, 0.0);
            for (Coord r = 1; r <= max_norm; ++r)
                table_[static_cast<std::size_t>(r)] = std::pow(static_cast<double>(r), -t_);
        }
    }
    double operator()(Coord r) const {
        if (!table_.empty()) return table_[static_cast<std::size_t>(r)];
        return std::pow(static_cast<double>(r), -t_);
    }

  private:
    double t_;
    std::vector<double> table_;
};

template <typename Pow>
double weighted_lhs_impl(const LatticeFunction& u, Pow pw, double t, Coord min_norm,
                         Coord max_norm) {
    const Domain& dom = u.domain();
    const int d = dom.dim();
    NormWeight weight(dom.radius(), t);
    std::vector<double> rows(dom.size(), 0.0);
    parallel_for(dom.size(), 4096, [&](std::size_t lo, std::size_t hi) {
        std::vector<Coord> x(static_cast<std::size_t>(d));
        for (std::size_t i = lo; i < hi; ++i) {
            const double v = u[i];
            if (v == 0.0) continue;
            dom.decode(i, x);
            const Coord r = norm_inf(x);
            if (r == 0 || r < min_norm || r >= max_norm) continue;
            rows[i] = pw(v) * weight(r);
        }
    });
    return finish_sum(rows, "weighted_lhs");
}

template <typename Pow>
double local_energy_impl(const LatticeFunction& u, Pow pw, EnergyVariant variant) {
    const Domain& dom = u.domain();
    const int d = dom.dim();
    const Domain ext = dom.expanded(1);
    const bool exclude_j = variant.kind == EnergyKind::LocalExcludeOrigin ||
                           variant.kind == EnergyKind::LocalWeighted;
    const bool exclude_k = variant.kind == EnergyKind::LocalExcludeOrigin;
    const bool weight_j = variant.kind == EnergyKind::LocalWeighted;
    const bool weight_max = variant.kind == EnergyKind::LocalWeightedMax;
    if ((weight_j || weight_max) && variant.eps == 0.0)
        throw ValidationError("weighted energy variant needs eps > 0");
    if (!(weight_j || weight_max) && variant.eps != 0.0)
        throw ValidationError("eps given with a non-weighted energy variant");
    NormWeight weight(ext.radius(), variant.eps);

    std::vector<double> rows(ext.size(), 0.0);
    parallel_for(ext.size(), 2048, [&](std::size_t lo, std::size_t hi) {
        std::vector<Coord> x(static_cast<std::size_t>(d));
        for (std::size_t i = lo; i < hi; ++i) {
            ext.decode(i, x);
            const Coord rj = norm_inf(x);
            if (exclude_j && rj == 0) continue;
            const double uj = u.at_point(x);
            double row = 0.0;
            for (int q = 0; q < d; ++q) {
                const Coord old = x[static_cast<std::size_t>(q)];
                for (Coord step : {Coord{1}, Coord{-1}}) {
                    const Coord yq = old + step;
                    if (dom.kind() == LatticeKind::NonNegative && yq < 0) continue;
                    x[static_cast<std::size_t>(q)] = yq;
                    const Coord rk = norm_inf(x);
                    if (exclude_k && rk == 0) {
                        x[static_cast<std::size_t>(q)] = old;
                        continue;
                    }
                    const double diff = uj - u.at_point(x);
                    x[static_cast<std::size_t>(q)] = old;
                    if (diff == 0.0) continue;
                    double w = 1.0;
                    if (weight_j) w = weight(rj);
                    else if (weight_max) w = weight(std::max(rj, rk));
                    row += w * pw(diff);
                }
            }
            rows[i] = row;
        }
    });
    return finish_sum(rows, "local_energy");
}

template <typename Pow>
double fractional_energy_impl(const LatticeFunction& u, Pow pw, double expo,
                              EnergyVariant variant, Coord margin, std::size_t budget) {
    const Domain& dom = u.domain();
    const int d = dom.dim();
    const Domain ext = dom.expanded(margin, budget);
    const bool exclude_origin = variant.kind == EnergyKind::FracExcludeOrigin;

    // |j - m|_inf^{-expo} per integer distance.
    const Coord max_dist = ext.side() - 1;
    std::vector<double> kernel(static_cast<std::size_t>(max_dist) + 1, 0.0);
    for (Coord r = 1; r <= max_dist; ++r)
        kernel[static_cast<std::size_t>(r)] = std::pow(static_cast<double>(r), -expo);

    const Coord blo = dom.lo(), bhi = dom.hi();
    const std::size_t ext_size = ext.size();
    const std::size_t grain = std::max<std::size_t>(1, 1u << 18) / std::max<std::size_t>(ext_size, 1) + 1;

    std::vector<double> rows(dom.size(), 0.0);
    parallel_for(dom.size(), grain, [&](std::size_t lo, std::size_t hi) {
        std::vector<Coord> xj(static_cast<std::size_t>(d)), xm(static_cast<std::size_t>(d));
        for (std::size_t i = lo; i < hi; ++i) {
            dom.decode(i, xj);
            if (exclude_origin && norm_inf(xj) == 0) continue;
            const double uj = u[i];
            const double uj_p = pw(uj);
            double row = 0.0;
            // Pairs with the mate outside the support box mirror onto this
            // row: (j, m) and (m, j) contribute the same term.
            std::fill(xm.begin(), xm.end(), ext.lo());
            for (std::size_t mi = 0; mi < ext_size; ++mi) {
                Coord dist = 0;
                bool in_box = true;
                for (int q = 0; q < d; ++q) {
                    const Coord mq = xm[static_cast<std::size_t>(q)];
                    const Coord delta = xj[static_cast<std::size_t>(q)] - mq;
                    dist = std::max(dist, delta < 0 ? -delta : delta);
                    in_box = in_box && mq >= blo && mq <= bhi;
                }
                if (dist != 0 && !(exclude_origin && norm_inf(xm) == 0)) {
                    if (in_box) {
                        const double diff = uj - u[dom.index_of(xm)];
                        if (diff != 0.0) row += pw(diff) * kernel[static_cast<std::size_t>(dist)];
                    } else if (uj_p != 0.0) {
                        row += 2.0 * uj_p * kernel[static_cast<std::size_t>(dist)];
                    }
                }
                // odometer step through the extended box
                int q = d - 1;
                while (q >= 0 && xm[static_cast<std::size_t>(q)] == ext.hi()) {
                    xm[static_cast<std::size_t>(q)] = ext.lo();
                    --q;
                }
                if (q >= 0) ++xm[static_cast<std::size_t>(q)];
            }
            rows[i] = row;
        }
    });
    return finish_sum(rows, "fractional_energy");
}

// Points of A_n clipped to [0, N]^d, with their values under u.
struct ClippedAnnulus {
    std::vector<double> values;
    double abs_p_sum = 0.0; // sum of |u|^p over the clipped points
    long long count = 0;
};

template <typename Pow>
ClippedAnnulus clip_annulus(const LatticeFunction& u, Pow pw, int n, Coord N) {
    ClippedAnnulus out;
    const int d = u.domain().dim();
    const Coord lo_norm = Coord{1} << (n - 1);
    if (lo_norm > N) return out;
    const Coord hi = std::min((Coord{1} << n) - 1, N);
    std::vector<Coord> x(static_cast<std::size_t>(d), 0);
    std::vector<double> abs_rows;
    for (;;) {
        if (norm_inf(x) >= lo_norm) {
            const double v = u.at_point(x);
            out.values.push_back(v);
            abs_rows.push_back(pw(v));
            ++out.count;
        }
        int i = d - 1;
        while (i >= 0 && x[static_cast<std::size_t>(i)] == hi) {
            x[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++x[static_cast<std::size_t>(i)];
    }
    out.abs_p_sum = pairwise_sum(abs_rows);
    return out;
}

template <typename Pow>
double annuli_energy_impl(const LatticeFunction& u, Pow pw, double sp, int K) {
    const Domain& dom = u.domain();
    const int d = dom.dim();
    const Coord N = dom.radius();
    const double frac_d = 1.0 - std::exp2(-static_cast<double>(d));

    std::vector<double> totals;
    for (int n = 1; (Coord{1} << (n - 1)) <= N; ++n) {
        const double scale = std::exp2(-static_cast<double>(n + K) * (d + sp));
        const ClippedAnnulus P = clip_annulus(u, pw, n, N);
        ClippedAnnulus Q;
        if (n + K - 1 < 62 && (Coord{1} << (n + K - 1)) <= N) Q = clip_annulus(u, pw, n + K, N);

        // #A_{n+K} outside the box, via the closed-form cardinality:
        // #A_m * 2^{-m(d+sp)} = (1 - 2^{-d}) 2^{-m sp}.
        const double far_weight =
            frac_d * std::exp2(-static_cast<double>(n + K) * sp) -
            static_cast<double>(Q.count) * scale;

        std::vector<double> rows(P.values.size(), 0.0);
        parallel_for(P.values.size(), 64, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double vj = P.values[i];
                double pair_sum = 0.0;
                for (double vm : Q.values) pair_sum += pw(vj - vm);
                rows[i] = pair_sum * scale + pw(vj) * far_weight;
            }
        });
        totals.push_back(pairwise_sum(rows));

        // A_n points outside the box pair against in-box A_{n+K} values.
        const double an_out =
            frac_d * std::exp2(static_cast<double>(n) * d) - static_cast<double>(P.count);
        if (an_out > 0 && Q.abs_p_sum != 0.0) totals.push_back(an_out * scale * Q.abs_p_sum);
    }
    return finish_sum(totals, "annuli_energy");
}

} // namespace

double weighted_lhs(const LatticeFunction& u, double p, double t) {
    return weighted_lhs_range(u, p, t, 1);
}

double weighted_lhs_range(const LatticeFunction& u, double p, double t, Coord min_norm,
                          Coord max_norm) {
    if (p <= 0) throw ValidationError("p must be positive");
    u.check_finite();
    return dispatch_pow(p, [&](auto pw) {
        return weighted_lhs_impl(u, pw, t, std::max<Coord>(min_norm, 1), max_norm);
    });
}

double local_energy(const LatticeFunction& u, double p, EnergyVariant variant) {
    if (p <= 0) throw ValidationError("p must be positive");
    if (!variant.is_local()) throw ValidationError("local_energy needs a local variant");
    u.check_finite();
    return dispatch_pow(p, [&](auto pw) { return local_energy_impl(u, pw, variant); });
}

double fractional_energy(const LatticeFunction& u, double s, double p, EnergyVariant variant,
                         Coord margin, std::size_t point_budget) {
    if (p <= 0 || s <= 0) throw ValidationError("s and p must be positive");
    if (!variant.is_fractional())
        throw ValidationError("fractional_energy needs a fractional variant");
    if (variant.kind == EnergyKind::FracWeighted && variant.eps <= 0.0)
        throw ValidationError("frac_weighted needs eps > 0");
    if (variant.kind != EnergyKind::FracWeighted && variant.eps != 0.0)
        throw ValidationError("eps given with a non-weighted energy variant");
    if (margin < 0) throw ValidationError("margin must be >= 0");
    u.check_finite();
    const double expo = s * p + u.domain().dim() + variant.eps;
    return dispatch_pow(p, [&](auto pw) {
        return fractional_energy_impl(u, pw, expo, variant, margin, point_budget);
    });
}

double annuli_energy(const LatticeFunction& u, double s, double p, int K) {
    if (p <= 0 || s <= 0) throw ValidationError("s and p must be positive");
    if (K < 1) throw ValidationError("K must be >= 1");
    u.check_finite();
    return dispatch_pow(p, [&](auto pw) { return annuli_energy_impl(u, pw, s * p, K); });
}

} // namespace hardy
