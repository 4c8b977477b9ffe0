#include "hardy/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hardy/parallel.hpp"
#include "hardy/rng.hpp"

namespace hardy {

namespace {

double phi(double z, double p) { // d|z|^p/dz up to the factor p
    if (z == 0.0) return 0.0;
    const double mag = std::exp((p - 1.0) * std::log(std::abs(z)));
    return z > 0 ? mag : -mag;
}

// Both quadratic/energy forms of one regime, applied matrix-free on the
// value table of a box. The origin coordinate is pinned to zero whenever the
// regime requires u(0) = 0 (and harmlessly otherwise: neither side of any
// regime sees u(0)).
class RegimeForms {
  public:
    RegimeForms(const HardyParams& params, Coord N, Coord margin)
        : params_(params), rp_(resolve_params(params)), dom_(params.lattice, params.d, N),
          margin_(margin) {
        if (regime_is_lemma(params.regime))
            throw ValidationError("best-constant estimation covers the theorem regimes only");
        const int d = dom_.dim();
        weight_.assign(dom_.size(), 0.0);
        std::vector<Coord> x(static_cast<std::size_t>(d));
        for (std::size_t i = 0; i < dom_.size(); ++i) {
            dom_.decode(i, x);
            const Coord r = norm_inf(std::span<const Coord>(x));
            if (r > 0) weight_[i] = std::pow(static_cast<double>(r), -rp_.t);
        }
        if (rp_.rhs_variant.is_fractional()) ext_.emplace(dom_.expanded(margin_));
    }

    const Domain& domain() const { return dom_; }
    const ResolvedParams& resolved() const { return rp_; }
    Coord margin() const { return margin_; }

    void pin(std::vector<double>& u) const { u[dom_.origin_index()] = 0.0; }

    double lhs_form(const std::vector<double>& u, double p) const {
        std::vector<double> rows(u.size(), 0.0);
        for (std::size_t i = 0; i < u.size(); ++i)
            if (weight_[i] != 0.0 && u[i] != 0.0) rows[i] = weight_[i] * pow_abs(u[i], p);
        return pairwise_sum(rows);
    }

    void lhs_gradient(const std::vector<double>& u, double p, std::vector<double>& g) const {
        g.assign(u.size(), 0.0);
        for (std::size_t i = 0; i < u.size(); ++i)
            if (weight_[i] != 0.0) g[i] = p * weight_[i] * phi(u[i], p);
    }

    double energy(const std::vector<double>& u, double p) const {
        LatticeFunction f(dom_, u);
        if (rp_.rhs_variant.is_fractional())
            return fractional_energy(f, params_.s, p, rp_.rhs_variant, margin_);
        return local_energy(f, p, rp_.rhs_variant);
    }

    // dE/du; at p = 2 the energy matvec is half of this.
    void energy_gradient(const std::vector<double>& u, double p, std::vector<double>& g) const {
        g.assign(u.size(), 0.0);
        if (rp_.rhs_variant.is_fractional())
            fractional_gradient(u, p, g);
        else
            local_gradient(u, p, g);
    }

    void matvec(const std::vector<double>& u, std::vector<double>& out) const {
        energy_gradient(u, 2.0, out);
        for (double& v : out) v *= 0.5;
        out[dom_.origin_index()] = 0.0;
    }

    double lhs_diag(std::size_t i) const { return weight_[i]; }

    std::vector<double> energy_diagonal() const {
        std::vector<double> diag(dom_.size(), 0.0);
        diagonal_impl(diag);
        return diag;
    }

  private:
    double at(const std::vector<double>& u, std::span<const Coord> x) const {
        if (!dom_.contains(x)) return 0.0;
        return u[dom_.index_of(x)];
    }

    void local_gradient(const std::vector<double>& u, double p, std::vector<double>& g) const {
        const int d = dom_.dim();
        const EnergyKind kind = rp_.rhs_variant.kind;
        const double eps = rp_.rhs_variant.eps;
        parallel_for(dom_.size(), 4096, [&](std::size_t lo, std::size_t hi) {
            std::vector<Coord> x(static_cast<std::size_t>(d));
            for (std::size_t i = lo; i < hi; ++i) {
                dom_.decode(i, x);
                const Coord rx = norm_inf(std::span<const Coord>(x));
                const double ux = u[i];
                double acc = 0.0;
                for (int q = 0; q < d; ++q) {
                    const Coord old = x[static_cast<std::size_t>(q)];
                    for (Coord step : {Coord{1}, Coord{-1}}) {
                        const Coord yq = old + step;
                        if (dom_.kind() == LatticeKind::NonNegative && yq < 0) continue;
                        x[static_cast<std::size_t>(q)] = yq;
                        const Coord ry = norm_inf(std::span<const Coord>(x));
                        const double uy = at(u, x);
                        x[static_cast<std::size_t>(q)] = old;
                        const double f = phi(ux - uy, p);
                        switch (kind) {
                            case EnergyKind::LocalIncludeOrigin: acc += 2.0 * f; break;
                            case EnergyKind::LocalExcludeOrigin:
                                if (rx != 0 && ry != 0) acc += 2.0 * f;
                                break;
                            case EnergyKind::LocalWeighted: {
                                double w = 0.0;
                                if (rx != 0) w += std::pow(static_cast<double>(rx), -eps);
                                if (ry != 0) w += std::pow(static_cast<double>(ry), -eps);
                                acc += w * f;
                                break;
                            }
                            case EnergyKind::LocalWeightedMax:
                                acc += 2.0 *
                                       std::pow(static_cast<double>(std::max(rx, ry)), -eps) * f;
                                break;
                            default: break;
                        }
                    }
                }
                g[i] = p * acc;
            }
        });
    }

    void fractional_gradient(const std::vector<double>& u, double p, std::vector<double>& g) const {
        const int d = dom_.dim();
        const Domain& ext = *ext_;
        const bool exclude = rp_.rhs_variant.kind == EnergyKind::FracExcludeOrigin;
        const double expo = params_.s * p + d + rp_.rhs_variant.eps;
        const Coord max_dist = ext.side() - 1;
        std::vector<double> kernel(static_cast<std::size_t>(max_dist) + 1, 0.0);
        for (Coord r = 1; r <= max_dist; ++r)
            kernel[static_cast<std::size_t>(r)] = std::pow(static_cast<double>(r), -expo);
        parallel_for(dom_.size(), 64, [&](std::size_t lo, std::size_t hi) {
            std::vector<Coord> xj(static_cast<std::size_t>(d)), xm(static_cast<std::size_t>(d));
            for (std::size_t i = lo; i < hi; ++i) {
                dom_.decode(i, xj);
                if (exclude && norm_inf(std::span<const Coord>(xj)) == 0) continue;
                const double uj = u[i];
                double acc = 0.0;
                std::fill(xm.begin(), xm.end(), ext.lo());
                for (std::size_t mi = 0; mi < ext.size(); ++mi) {
                    Coord dist = 0;
                    for (int q = 0; q < d; ++q) {
                        const Coord delta =
                            xj[static_cast<std::size_t>(q)] - xm[static_cast<std::size_t>(q)];
                        dist = std::max(dist, delta < 0 ? -delta : delta);
                    }
                    if (dist != 0 && !(exclude && norm_inf(std::span<const Coord>(xm)) == 0)) {
                        const double um = at(u, xm);
                        acc += 2.0 * kernel[static_cast<std::size_t>(dist)] * phi(uj - um, p);
                    }
                    int q = d - 1;
                    while (q >= 0 && xm[static_cast<std::size_t>(q)] == ext.hi()) {
                        xm[static_cast<std::size_t>(q)] = ext.lo();
                        --q;
                    }
                    if (q >= 0) ++xm[static_cast<std::size_t>(q)];
                }
                g[i] = p * acc;
            }
        });
    }

    void diagonal_impl(std::vector<double>& diag) const {
        // (B e_i)_i through the p = 2 gradient of the basis vector would be
        // O(n^2); use unit vectors only on the cheap local forms and a row
        // sum for the fractional kernel.
        const int d = dom_.dim();
        if (!rp_.rhs_variant.is_fractional()) {
            const EnergyKind kind = rp_.rhs_variant.kind;
            const double eps = rp_.rhs_variant.eps;
            std::vector<Coord> x(static_cast<std::size_t>(d));
            for (std::size_t i = 0; i < dom_.size(); ++i) {
                dom_.decode(i, x);
                const Coord rx = norm_inf(std::span<const Coord>(x));
                double acc = 0.0;
                for (int q = 0; q < d; ++q) {
                    const Coord old = x[static_cast<std::size_t>(q)];
                    for (Coord step : {Coord{1}, Coord{-1}}) {
                        const Coord yq = old + step;
                        if (dom_.kind() == LatticeKind::NonNegative && yq < 0) continue;
                        x[static_cast<std::size_t>(q)] = yq;
                        const Coord ry = norm_inf(std::span<const Coord>(x));
                        x[static_cast<std::size_t>(q)] = old;
                        switch (kind) {
                            case EnergyKind::LocalIncludeOrigin: acc += 2.0; break;
                            case EnergyKind::LocalExcludeOrigin:
                                if (rx != 0 && ry != 0) acc += 2.0;
                                break;
                            case EnergyKind::LocalWeighted:
                                if (rx != 0) acc += std::pow(static_cast<double>(rx), -eps);
                                if (ry != 0) acc += std::pow(static_cast<double>(ry), -eps);
                                break;
                            case EnergyKind::LocalWeightedMax:
                                acc += 2.0 * std::pow(static_cast<double>(std::max(rx, ry)), -eps);
                                break;
                            default: break;
                        }
                    }
                }
                diag[i] = acc;
            }
            return;
        }
        const Domain& ext = *ext_;
        const bool exclude = rp_.rhs_variant.kind == EnergyKind::FracExcludeOrigin;
        const double expo = params_.s * 2.0 + d + rp_.rhs_variant.eps;
        std::vector<Coord> xj(static_cast<std::size_t>(d)), xm(static_cast<std::size_t>(d));
        for (std::size_t i = 0; i < dom_.size(); ++i) {
            dom_.decode(i, xj);
            if (exclude && norm_inf(std::span<const Coord>(xj)) == 0) continue;
            double acc = 0.0;
            std::fill(xm.begin(), xm.end(), ext.lo());
            for (std::size_t mi = 0; mi < ext.size(); ++mi) {
                Coord dist = 0;
                for (int q = 0; q < d; ++q) {
                    const Coord delta =
                        xj[static_cast<std::size_t>(q)] - xm[static_cast<std::size_t>(q)];
                    dist = std::max(dist, delta < 0 ? -delta : delta);
                }
                if (dist != 0 && !(exclude && norm_inf(std::span<const Coord>(xm)) == 0))
                    acc += 2.0 * std::pow(static_cast<double>(dist), -expo);
                int q = d - 1;
                while (q >= 0 && xm[static_cast<std::size_t>(q)] == ext.hi()) {
                    xm[static_cast<std::size_t>(q)] = ext.lo();
                    --q;
                }
                if (q >= 0) ++xm[static_cast<std::size_t>(q)];
            }
            diag[i] = acc;
        }
    }

    HardyParams params_;
    ResolvedParams rp_;
    Domain dom_;
    Coord margin_;
    std::optional<Domain> ext_;
    std::vector<double> weight_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> rows(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) rows[i] = a[i] * b[i];
    return pairwise_sum(rows);
}

void normalize_max(std::vector<double>& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    if (m > 0)
        for (double& v : u) v /= m;
}

// Largest eigenpair of a tiny symmetric pencil (Ared, Bred) with Bred SPD,
// via Cholesky reduction and Jacobi sweeps. Near-dependent basis vectors are
// dropped by the caller through the pivot guard.
bool small_pencil_max(const std::vector<std::vector<double>>& Ared,
                      const std::vector<std::vector<double>>& Bred, std::vector<double>& coeff,
                      double& value) {
    const std::size_t m = Ared.size();
    // Cholesky of Bred
    std::vector<std::vector<double>> L(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = Bred[i][j];
            for (std::size_t k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
            if (i == j) {
                if (sum <= 1e-14 * (1.0 + std::abs(Bred[i][i]))) return false;
                L[i][i] = std::sqrt(sum);
            } else {
                L[i][j] = sum / L[j][j];
            }
        }
    }
    // C = L^{-1} Ared L^{-T}
    std::vector<std::vector<double>> C = Ared;
    for (std::size_t col = 0; col < m; ++col) { // forward solve on columns
        for (std::size_t i = 0; i < m; ++i) {
            double sum = C[i][col];
            for (std::size_t k = 0; k < i; ++k) sum -= L[i][k] * C[k][col];
            C[i][col] = sum / L[i][i];
        }
    }
    for (std::size_t row = 0; row < m; ++row) { // and on rows
        for (std::size_t j = 0; j < m; ++j) {
            double sum = C[row][j];
            for (std::size_t k = 0; k < j; ++k) sum -= L[j][k] * C[row][k];
            C[row][j] = sum / L[j][j];
        }
    }
    // Jacobi sweeps
    std::vector<std::vector<double>> V(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) V[i][i] = 1.0;
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) off += C[i][j] * C[i][j];
        if (off < 1e-30) break;
        for (std::size_t pq = 0; pq < m; ++pq) {
            for (std::size_t q = pq + 1; q < m; ++q) {
                const std::size_t p = pq;
                if (std::abs(C[p][q]) < 1e-300) continue;
                const double theta = 0.5 * std::atan2(2.0 * C[p][q], C[q][q] - C[p][p]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < m; ++k) {
                    const double cpk = C[p][k], cqk = C[q][k];
                    C[p][k] = c * cpk - s * cqk;
                    C[q][k] = s * cpk + c * cqk;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double ckp = C[k][p], ckq = C[k][q];
                    C[k][p] = c * ckp - s * ckq;
                    C[k][q] = s * ckp + c * ckq;
                    const double vkp = V[k][p], vkq = V[k][q];
                    V[k][p] = c * vkp - s * vkq;
                    V[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (C[i][i] > C[best][best]) best = i;
    value = C[best][best];
    // back-substitute z = L^{-T} y
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = V[i][best];
    coeff.assign(m, 0.0);
    for (std::size_t ii = m; ii-- > 0;) {
        double sum = y[ii];
        for (std::size_t k = ii + 1; k < m; ++k) sum -= L[k][ii] * coeff[k];
        coeff[ii] = sum / L[ii][ii];
    }
    return true;
}

// Jacobi-preconditioned CG on the pinned subspace, fixed step count.
void cg_solve(const RegimeForms& forms, const std::vector<double>& diag,
              const std::vector<double>& b, std::vector<double>& x, int steps) {
    const std::size_t n = b.size();
    std::vector<double> r(n), z(n), p(n), bp(n);
    forms.matvec(x, bp);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - bp[i];
    auto precond = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = diag[i] > 0 ? v[i] / diag[i] : 0.0;
    };
    precond(r, z);
    p = z;
    double rz = dot(r, z);
    for (int it = 0; it < steps; ++it) {
        if (rz == 0.0) break;
        forms.matvec(p, bp);
        const double pbp = dot(p, bp);
        if (pbp <= 0.0) break;
        const double alpha = rz / pbp;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * bp[i];
        }
        precond(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
}

std::vector<double> seed_vector(const RegimeForms& forms, std::uint64_t seed) {
    const Domain& dom = forms.domain();
    std::vector<double> u(dom.size());
    SplitMix64 rng(mix_seed(seed, 0xb5297a4d));
    std::vector<Coord> x(static_cast<std::size_t>(dom.dim()));
    for (std::size_t i = 0; i < u.size(); ++i) {
        dom.decode(i, x);
        const double r = static_cast<double>(norm_inf(std::span<const Coord>(x)));
        u[i] = (0.5 + 0.5 * rng.uniform()) / (1.0 + r);
    }
    forms.pin(u);
    return u;
}

OptimizeResult finish(const HardyParams& params, const RegimeForms& forms,
                      std::vector<double> u, int iterations, bool converged,
                      std::vector<std::pair<int, double>> history) {
    normalize_max(u);
    LatticeFunction witness(forms.domain(), u);
    OptimizeResult res{0.0, iterations, converged, params.p < 1.0, std::move(witness),
                       std::move(history)};
    res.estimate = regime_ratio(params, res.witness, forms.margin());
    return res;
}

} // namespace

double regime_ratio(const HardyParams& params, const LatticeFunction& u, Coord margin) {
    const ResolvedParams rp = resolve_params(params);
    LatticeFunction v = u;
    if (rp.origin_must_vanish) v[v.domain().origin_index()] = 0.0;
    const double lhs = weighted_lhs(v, params.p, rp.t);
    const double rhs = rp.rhs_variant.is_fractional()
                           ? fractional_energy(v, params.s, params.p, rp.rhs_variant, margin)
                           : local_energy(v, params.p, rp.rhs_variant);
    if (lhs == 0.0 && rhs == 0.0) return 0.0;
    return lhs / rhs;
}

OptimizeResult best_constant_p2(const HardyParams& params, Coord N, const OptimizeOptions& opts) {
    if (params.p != 2.0) throw ValidationError("best_constant_p2 needs p = 2");
    const Coord margin = opts.margin > 0 ? opts.margin : N;
    RegimeForms forms(params, N, margin);
    const std::size_t n = forms.domain().size();

    std::vector<double> u;
    if (opts.init) {
        if (opts.init->domain() != forms.domain())
            throw ValidationError("init witness lives on a different box");
        u.assign(opts.init->values().begin(), opts.init->values().end());
    } else {
        u = seed_vector(forms, opts.seed);
    }
    forms.pin(u);

    const std::vector<double> diag = forms.energy_diagonal();

    // Locally optimal preconditioned iteration: Rayleigh-Ritz over
    // span{u, B^{-1}(Au - rho Bu), previous step}. The accepted ratio is
    // monotone by construction, and the small pencil keeps the clustered
    // top of this spectrum reachable (plain power iteration stalls on it).
    std::vector<double> Bu(n), Au(n), r(n), w(n), pdir;

    auto apply_A = [&](const std::vector<double>& v, std::vector<double>& out) {
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = forms.lhs_diag(i) * v[i];
    };

    auto rayleigh = [&](const std::vector<double>& v) -> double {
        forms.matvec(v, Bu);
        const double vbv = dot(v, Bu);
        if (vbv <= 0.0) return -1.0; // degenerate direction
        double vav = 0.0;
        for (std::size_t i = 0; i < n; ++i) vav += forms.lhs_diag(i) * v[i] * v[i];
        return vav / vbv;
    };

    double rho = rayleigh(u);
    if (rho < 0.0) {
        // constant-like direction with no energy: project it out and retry
        const double mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(n);
        for (double& v : u) v -= mean;
        forms.pin(u);
        rho = rayleigh(u);
        if (rho < 0.0) throw ValidationError("energy form degenerate on the admissible subspace");
    }

    std::vector<std::pair<int, double>> history{{0, rho}};
    bool converged = false;
    int it = 1;
    for (; it <= opts.max_iter; ++it) {
        forms.matvec(u, Bu);
        apply_A(u, Au);
        for (std::size_t i = 0; i < n; ++i) r[i] = Au[i] - rho * Bu[i];
        forms.pin(r);

        // preconditioned residual: a fixed number of CG steps on B w = r
        std::fill(w.begin(), w.end(), 0.0);
        cg_solve(forms, diag, r, w, opts.cg_steps);
        forms.pin(w);

        std::vector<const std::vector<double>*> basis{&u, &w};
        if (!pdir.empty()) basis.push_back(&pdir);

        // reduced pencils over the basis
        const std::size_t m = basis.size();
        std::vector<std::vector<double>> Ared(m, std::vector<double>(m, 0.0));
        std::vector<std::vector<double>> Bred(m, std::vector<double>(m, 0.0));
        std::vector<std::vector<double>> Abas(m), Bbas(m);
        for (std::size_t i = 0; i < m; ++i) {
            apply_A(*basis[i], Abas[i]);
            Bbas[i].resize(n);
            forms.matvec(*basis[i], Bbas[i]);
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                Ared[i][j] = Ared[j][i] = dot(*basis[i], Abas[j]);
                Bred[i][j] = Bred[j][i] = dot(*basis[i], Bbas[j]);
            }
        // normalize the Gram scale so the pivot guard is dimensionless
        for (std::size_t i = 0; i < m; ++i) {
            const double scale = std::sqrt(std::max(Bred[i][i], 1e-300));
            for (std::size_t j = 0; j < m; ++j) {
                Ared[i][j] /= scale;
                Ared[j][i] /= scale;
                Bred[i][j] /= scale;
                Bred[j][i] /= scale;
            }
        }

        std::vector<double> coeff;
        double rho_new = rho;
        bool solved = small_pencil_max(Ared, Bred, coeff, rho_new);
        if (!solved && m == 3) { // drop the history direction and retry
            Ared.resize(2);
            Bred.resize(2);
            for (auto& row : Ared) row.resize(2);
            for (auto& row : Bred) row.resize(2);
            basis.resize(2);
            solved = small_pencil_max(Ared, Bred, coeff, rho_new);
        }
        if (!solved || !(rho_new > rho)) {
            converged = true; // stagnated at the solver's resolution
            break;
        }

        // rescale coefficients back (Gram rows were divided by sqrt(B_ii))
        std::vector<double> next(n, 0.0), step(n, 0.0);
        for (std::size_t bi = 0; bi < basis.size(); ++bi) {
            const double scale =
                1.0 / std::sqrt(std::max(dot(*basis[bi], Bbas[bi]), 1e-300));
            const double c = coeff[bi] * scale;
            for (std::size_t i = 0; i < n; ++i) {
                next[i] += c * (*basis[bi])[i];
                if (bi > 0) step[i] += c * (*basis[bi])[i];
            }
        }
        u = next;
        forms.pin(u);
        normalize_max(u);
        pdir = step;
        normalize_max(pdir);

        const double delta = rho_new - rho;
        rho = rho_new;
        history.emplace_back(it, rho);
        if (delta <= opts.tol * std::max(rho, 1e-300)) {
            converged = true;
            break;
        }
    }
    return finish(params, forms, std::move(u), std::min(it, opts.max_iter), converged,
                  std::move(history));
}

OptimizeResult best_constant_general(const HardyParams& params, Coord N,
                                     const OptimizeOptions& opts) {
    const Coord margin = opts.margin > 0 ? opts.margin : N;
    RegimeForms forms(params, N, margin);
    const std::size_t n = forms.domain().size();
    const double p = params.p;
    const bool analytic = p > 1.0;
    const int restarts = std::max(1, params.p < 1.0 ? opts.restarts : std::min(opts.restarts, 4));

    auto objective = [&](const std::vector<double>& v) -> std::pair<double, double> {
        const double L = forms.lhs_form(v, p);
        const double E = forms.energy(std::vector<double>(v), p);
        return {L, E};
    };

    auto fd_gradient = [&](const std::vector<double>& v, std::vector<double>& gL,
                           std::vector<double>& gE) {
        gL.assign(n, 0.0);
        gE.assign(n, 0.0);
        double scale = 0.0;
        for (double x : v) scale = std::max(scale, std::abs(x));
        const double h = 1e-6 * std::max(scale, 1e-12);
        std::vector<double> w = v;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == forms.domain().origin_index() && forms.resolved().origin_must_vanish) continue;
            w[i] = v[i] + h;
            const auto [Lp, Ep] = objective(w);
            w[i] = v[i] - h;
            const auto [Lm, Em] = objective(w);
            w[i] = v[i];
            gL[i] = (Lp - Lm) / (2.0 * h);
            gE[i] = (Ep - Em) / (2.0 * h);
        }
    };

    struct Candidate {
        double ratio = -1.0;
        std::vector<double> u;
        int iterations = 0;
        bool converged = false;
        std::vector<std::pair<int, double>> history;
    };
    std::vector<Candidate> winners(static_cast<std::size_t>(restarts));
    const std::vector<double> precond = forms.energy_diagonal();

    parallel_for(static_cast<std::size_t>(restarts), 1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            std::vector<double> u;
            if (r == 0 && opts.init) {
                u.assign(opts.init->values().begin(), opts.init->values().end());
            } else {
                SplitMix64 rng(mix_seed(opts.seed, 0x51ed2700 + r));
                u.resize(n);
                for (std::size_t i = 0; i < n; ++i) u[i] = rng.uniform(-1.0, 1.0);
            }
            forms.pin(u);
            auto [L, E] = objective(u);
            if (E <= 0.0) continue;
            double ratio = L / E;
            Candidate cand;
            cand.history.emplace_back(0, ratio);
            std::vector<double> gL, gE, g(n), pdir(n, 0.0), trial(n);
            int it = 1;
            for (; it <= opts.max_iter; ++it) {
                if (analytic) {
                    forms.lhs_gradient(u, p, gL);
                    forms.energy_gradient(u, p, gE);
                } else {
                    fd_gradient(u, gL, gE);
                }
                double gnorm = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    // ascent direction of the ratio, preconditioned by the
                    // quadratic-form diagonal (positive by construction)
                    g[i] = (gL[i] - ratio * gE[i]) / std::max(precond[i], 1e-12);
                    gnorm = std::max(gnorm, std::abs(g[i]));
                }
                if (forms.resolved().origin_must_vanish) g[forms.domain().origin_index()] = 0.0;
                if (gnorm == 0.0) {
                    cand.converged = true;
                    break;
                }
                for (double& x : g) x /= gnorm;

                // deterministic zoom over u + a g + b pdir
                double umax = 0.0;
                for (double x : u) umax = std::max(umax, std::abs(x));
                const double scale = std::max(umax, 1e-9);
                double best_ratio = ratio, best_a = 0.0, best_b = 0.0;
                double ca = 0.0, cb = 0.0, half = scale;
                const bool with_p = std::any_of(pdir.begin(), pdir.end(),
                                                [](double x) { return x != 0.0; });
                for (int level = 0; level < 6; ++level) {
                    for (int ia = -3; ia <= 3; ++ia) {
                        for (int ib = with_p ? -3 : 0; ib <= (with_p ? 3 : 0); ++ib) {
                            const double a = ca + half * ia / 3.0;
                            const double b = cb + half * ib / 3.0;
                            if (a == 0.0 && b == 0.0) continue;
                            for (std::size_t i = 0; i < n; ++i)
                                trial[i] = u[i] + a * g[i] + b * pdir[i];
                            forms.pin(trial);
                            const auto [Lt, Et] = objective(trial);
                            if (Et > 0.0 && Lt / Et > best_ratio) {
                                best_ratio = Lt / Et;
                                best_a = a;
                                best_b = b;
                            }
                        }
                    }
                    ca = best_a;
                    cb = best_b;
                    half *= 0.35;
                }

                if (!(best_ratio > ratio * (1.0 + 1e-15))) {
                    cand.converged = true; // no progress at the search resolution
                    break;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    pdir[i] = best_a * g[i] + best_b * pdir[i];
                    u[i] += pdir[i];
                }
                forms.pin(u);
                const double unorm = *std::max_element(u.begin(), u.end(),
                                                       [](double x, double y) {
                                                           return std::abs(x) < std::abs(y);
                                                       });
                const double rescale = std::abs(unorm) > 0 ? 1.0 / std::abs(unorm) : 1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    u[i] *= rescale;
                    pdir[i] *= rescale;
                }
                const double delta = best_ratio - ratio;
                ratio = best_ratio;
                cand.history.emplace_back(it, ratio);
                if (delta <= opts.tol * std::max(ratio, 1e-300)) {
                    cand.converged = true;
                    break;
                }
            }
            cand.ratio = ratio;
            cand.u = u;
            cand.iterations = std::min(it, opts.max_iter);
            winners[r] = std::move(cand);
        }
    });

    // deterministic winner: max ratio, ties by restart index
    std::size_t best = 0;
    for (std::size_t r = 1; r < winners.size(); ++r)
        if (winners[r].ratio > winners[best].ratio) best = r;
    Candidate& w = winners[best];
    if (w.ratio < 0.0) throw ValidationError("energy form degenerate on the admissible subspace");
    return finish(params, forms, std::move(w.u), w.iterations, w.converged, std::move(w.history));
}

} // namespace hardy
