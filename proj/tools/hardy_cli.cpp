// Command-line surface: constants tables, verification campaigns, optimality
// probes, best-constant estimation, parameter sweeps, path census and test
// function tables. Records go to JSONL, summaries to CSV; every output file
// starts with the fully resolved configuration so runs can be replayed.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "hardy/parallel.hpp"
#include "hardy/paths.hpp"
#include "hardy/serialize.hpp"
#include "hardy/version.hpp"

using namespace hardy;

namespace {

struct CliCommon {
    std::string out;
    std::string format = "jsonl";
    int threads = 0;
    std::uint64_t seed = 1;
};

std::ostream& open_output(const CliCommon& common, std::ofstream& file) {
    if (common.out.empty()) return std::cout;
    file.open(common.out);
    if (!file) throw ValidationError("cannot open output file: " + common.out);
    return file;
}

void apply_threads(const CliCommon& common) {
    if (common.threads > 0) {
        set_max_threads(common.threads);
    } else if (const char* env = std::getenv("HARDY_THREADS")) {
        set_max_threads(std::max(1, std::atoi(env)));
    }
}

Json config_json(const std::string& command, const HardyParams& params, const CliCommon& common) {
    Json j{{"command", command}};
    j.update(to_json(params));
    j["seed"] = common.seed;
    j["format"] = common.format;
    return j;
}

void add_param_flags(CLI::App* cmd, HardyParams& params, std::string& regime,
                     std::string& lattice) {
    cmd->add_option("--regime", regime, "inequality regime (T11_1..T11_5, T12_1..T12_3, LEM21_*)")
        ->required();
    cmd->add_option("--d", params.d, "lattice dimension");
    cmd->add_option("--p", params.p, "summability exponent p");
    cmd->add_option("--s", params.s, "fractional order s");
    cmd->add_option("--eps", params.eps, "epsilon of the borderline regimes");
    cmd->add_option("--delta", params.delta, "gap delta of the subcritical regimes");
    cmd->add_option("--K", params.K, "annulus gap K (0 = smallest admissible)");
    cmd->add_option("--lattice", lattice, "zplus (default) or z");
}

struct ParamFlagPack {
    HardyParams params;
    std::string regime;
    std::string lattice = "zplus";
    double t = 0.0; // probe override

    HardyParams resolve_input() const {
        HardyParams p = params;
        p.regime = regime_from_string(regime);
        p.lattice = lattice_kind_from_string(lattice);
        return p;
    }
};

int run_constants(const ParamFlagPack& pack, const CliCommon& common) {
    const HardyParams params = pack.resolve_input();
    const ConstantReport report = theorem_constant(params);
    std::ofstream file;
    std::ostream& os = open_output(common, file);
    Json j = to_json(report);
    j["config"] = config_json("constants", params, common);
    os << j.dump(2) << '\n';
    return 0;
}

int run_verify(const ParamFlagPack& pack, const CliCommon& common, Coord N, Coord margin,
               int trials) {
    const HardyParams params = pack.resolve_input();
    resolve_params(params);                       // config errors exit with 2
    Domain(params.lattice, params.d, N);          // capacity errors with 3
    CampaignConfig config;
    config.cells = {params};
    config.N = N;
    config.margin = margin;
    config.trials_per_cell = trials;
    config.seed = common.seed;
    const CampaignReport report = run_campaign(config);

    Json header = config_json("verify", params, common);
    header["N"] = N;
    header["margin"] = margin;
    header["trials"] = trials;

    std::ofstream file;
    std::ostream& os = open_output(common, file);
    if (common.format == "csv")
        write_campaign_csv(os, report, header);
    else
        write_campaign_jsonl(os, report, header);
    for (const auto& err : report.errors)
        std::cerr << "trial error (cell " << err.cell << ", trial " << err.trial
                  << "): " << err.message << '\n';
    if (!report.errors.empty()) return 3;
    return report.violations == 0 ? 0 : 1;
}

int run_probe(const ParamFlagPack& pack, const CliCommon& common, const std::string& family,
              std::vector<Coord> n_list, double radius_power) {
    ProbeConfig config;
    config.regime = regime_from_string(pack.regime);
    config.d = pack.params.d;
    config.p = pack.params.p;
    config.t = pack.t;
    config.family = test_family_from_string(family);
    config.n_list = std::move(n_list);
    config.complement_radius_power = radius_power;
    const ProbeResult res = optimality_probe(config);

    std::ofstream file;
    std::ostream& os = open_output(common, file);
    if (common.format == "csv") {
        os << "# " << config_json("probe", pack.resolve_input(), common).dump() << '\n';
        os << "n,lhs,rhs,ratio\n";
        for (std::size_t i = 0; i < res.ns.size(); ++i)
            os << res.ns[i] << ',' << res.lhs[i] << ',' << res.rhs[i] << ',' << res.ratios[i]
               << '\n';
        os << "# fitted_slope=" << res.fit.slope << " expected=" << res.expected_slope
           << " verdict=" << to_string(res.verdict) << '\n';
    } else {
        Json j = to_json(res);
        j["config"] = config_json("probe", pack.resolve_input(), common);
        os << j.dump(2) << '\n';
    }
    return 0;
}

int run_optimize(const ParamFlagPack& pack, const CliCommon& common, Coord N, Coord margin,
                 const std::string& method, int restarts, double tol, int max_iter,
                 const std::string& witness_out) {
    HardyParams params = pack.resolve_input();
    OptimizeOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.restarts = restarts;
    opts.margin = margin;
    opts.seed = common.seed;
    const OptimizeResult res = method == "general" ? best_constant_general(params, N, opts)
                                                   : best_constant_p2(params, N, opts);
    std::ofstream file;
    std::ostream& os = open_output(common, file);
    Json j = to_json(res);
    j["config"] = config_json("optimize", params, common);
    j["N"] = N;
    j["method"] = method;
    os << j.dump(2) << '\n';
    if (!witness_out.empty()) {
        std::ofstream wf(witness_out);
        if (!wf) throw ValidationError("cannot open witness file: " + witness_out);
        write_witness_csv(wf, res.witness);
    }
    return 0;
}

int run_sweep(const ParamFlagPack& pack, const CliCommon& common, std::vector<int> ds,
              std::vector<double> ps, std::vector<double> ss, std::vector<Coord> Ns, Coord margin,
              int trials, const std::string& mode) {
    const Regime regime = regime_from_string(pack.regime);
    const LatticeKind lattice = lattice_kind_from_string(pack.lattice);
    if (ds.empty()) ds = {pack.params.d};
    if (ps.empty()) ps = {pack.params.p};
    if (ss.empty()) ss = {pack.params.s};
    if (Ns.empty()) Ns = {16};

    std::ofstream file;
    std::ostream& os = open_output(common, file);
    Json header = config_json("sweep", pack.resolve_input(), common);
    header["mode"] = mode;
    header["type"] = "header";
    header["version"] = kVersion;
    os << header.dump() << '\n';

    int violations = 0, errors = 0;
    for (int d : ds)
        for (double p : ps)
            for (double s : ss)
                for (Coord N : Ns) {
                    HardyParams params = pack.params;
                    params.regime = regime;
                    params.lattice = lattice;
                    params.d = d;
                    params.p = p;
                    params.s = s;
                    Json row{{"d", d}, {"p", p}, {"s", s}, {"N", N}};
                    try {
                        resolve_params(params); // reject invalid grid points up front
                        if (mode == "optimize") {
                            OptimizeOptions opts;
                            opts.margin = margin;
                            opts.seed = common.seed;
                            const OptimizeResult res =
                                params.p == 2.0 ? best_constant_p2(params, N, opts)
                                                : best_constant_general(params, N, opts);
                            row["estimate"] = res.estimate;
                            row["converged"] = res.converged;
                            row["constant"] = theorem_constant(params).value;
                        } else {
                            CampaignConfig config;
                            config.cells = {params};
                            config.N = N;
                            config.margin = margin;
                            config.trials_per_cell = trials;
                            config.seed = common.seed;
                            const CampaignReport report = run_campaign(config);
                            row["max_ratio"] =
                                report.cells.empty() ? 0.0 : report.cells.front().max_ratio;
                            row["constant"] =
                                report.cells.empty() ? 0.0 : report.cells.front().constant;
                            row["violations"] = report.violations;
                            violations += report.violations;
                            errors += static_cast<int>(report.errors.size());
                        }
                    } catch (const ValidationError& e) {
                        row["skipped"] = e.what(); // grid point outside the regime
                    }
                    os << row.dump() << '\n';
                }
    if (errors > 0) return 3;
    return violations == 0 ? 0 : 1;
}

int run_census(const CliCommon& common, int n, int k, int d, const std::string& beta) {
    const int b = beta == "all" ? kCensusAllShifts : std::stoi(beta);
    const CensusResult res = edge_usage_census(n, k, d, b);
    std::ofstream file;
    std::ostream& os = open_output(common, file);
    if (common.format == "csv") {
        os << "# census n=" << n << " k=" << k << " d=" << d << " beta=" << beta
           << " version=" << kVersion << '\n';
        res.write_csv(os);
        os << "# max_count=" << res.max_count << " bound=" << res.bound << '\n';
    } else {
        Json j{{"n", n},
               {"k", k},
               {"d", d},
               {"beta", beta},
               {"pair_count", res.pair_count},
               {"max_count", res.max_count},
               {"bound", res.bound},
               {"per_beta_max", res.per_beta_max},
               {"within_bound", static_cast<double>(res.max_count) <= res.bound}};
        os << j.dump(2) << '\n';
    }
    return static_cast<double>(res.max_count) <= res.bound ? 0 : 1;
}

int run_testfn(const CliCommon& common, const std::string& family_name, int d, Coord n, double t,
               double p, Coord radius) {
    const TestFamilyKind kind = test_family_from_string(family_name);
    const Coord R = radius > 0 ? radius : (kind == TestFamilyKind::ComplementVn ? 4 * n : n + 1);
    const Domain dom(LatticeKind::NonNegative, d, R);
    const LatticeFunction u = materialize({kind, n}, dom);
    const double exact_lhs = weighted_lhs(u, p, t);

    double exact_energy, energy_bound;
    if (kind == TestFamilyKind::IndicatorUn) {
        exact_energy = local_energy(u, p, EnergyVariant::local_include_origin());
        energy_bound = un_rhs_bound(d, p, n);
    } else {
        // the complement has the same increments as the tent
        const Domain tent_dom(LatticeKind::NonNegative, d, n + 1);
        const LatticeFunction tent = materialize({TestFamilyKind::TentVn, n}, tent_dom);
        exact_energy = local_energy(tent, p, EnergyVariant::local_include_origin());
        energy_bound = vn_energy_bound(d, p, n);
    }
    double lhs_bound = 0.0;
    switch (kind) {
        case TestFamilyKind::IndicatorUn: lhs_bound = un_lhs_bound(d, t, n); break;
        case TestFamilyKind::TentVn: lhs_bound = vn_lhs_bound(d, t, p, n); break;
        case TestFamilyKind::ComplementVn: lhs_bound = one_minus_vn_lhs_bound(d, t, p, n); break;
    }

    std::ofstream file;
    std::ostream& os = open_output(common, file);
    Json j{{"family", to_string(kind)},
           {"d", d},
           {"n", n},
           {"t", t},
           {"p", p},
           {"radius", R},
           {"exact_lhs", exact_lhs},
           {"lhs_lower_bound", std::isinf(lhs_bound) ? Json("inf") : Json(lhs_bound)},
           {"lhs_ok", exact_lhs >= lhs_bound * (1.0 - 1e-9) || std::isinf(lhs_bound)},
           {"exact_energy", exact_energy},
           {"energy_upper_bound", energy_bound},
           {"energy_ok", exact_energy <= energy_bound * (1.0 + 1e-9)}};
    os << j.dump(2) << '\n';
    const bool ok = j["lhs_ok"].get<bool>() && j["energy_ok"].get<bool>();
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete Hardy inequality toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    CliCommon common;
    app.add_option("--threads", common.threads, "worker thread cap (env HARDY_THREADS)");
    app.add_option("--out", common.out, "output file (default stdout)");
    app.add_option("--format", common.format, "json, jsonl or csv")
        ->check(CLI::IsMember({"json", "jsonl", "csv"}));
    app.add_option("--seed", common.seed, "campaign seed");

    ParamFlagPack pack;

    auto* constants = app.add_subcommand("constants", "explicit constant with assembly trace");
    add_param_flags(constants, pack.params, pack.regime, pack.lattice);

    Coord N = 16, margin = 16;
    int trials = 100;
    auto* verify = app.add_subcommand("verify", "random-function verification campaign");
    add_param_flags(verify, pack.params, pack.regime, pack.lattice);
    verify->add_option("--N", N, "support box radius");
    verify->add_option("--margin", margin, "fractional truncation margin");
    verify->add_option("--trials", trials, "trials per cell");

    std::string family = "un";
    std::vector<Coord> n_list;
    double radius_power = 1.5;
    auto* probe = app.add_subcommand("probe", "optimality probe for a weight exponent");
    add_param_flags(probe, pack.params, pack.regime, pack.lattice);
    probe->add_option("--t", pack.t, "trial weight exponent")->required();
    probe->add_option("--family", family, "un, vn or one_minus_vn");
    probe->add_option("--n-list", n_list, "scales n")->required()->delimiter(',');
    probe->add_option("--radius-power", radius_power, "complement truncation n^power");

    std::string method = "p2", witness_out;
    int restarts = 8, max_iter = 200;
    double tol = 1e-10;
    auto* optimize = app.add_subcommand("optimize", "best-constant estimation");
    add_param_flags(optimize, pack.params, pack.regime, pack.lattice);
    optimize->add_option("--N", N, "support box radius");
    optimize->add_option("--margin", margin, "fractional truncation margin");
    optimize->add_option("--method", method, "p2 or general")
        ->check(CLI::IsMember({"p2", "general"}));
    optimize->add_option("--restarts", restarts, "random restarts (general)");
    optimize->add_option("--tol", tol, "relative stopping tolerance");
    optimize->add_option("--max-iter", max_iter, "iteration cap");
    optimize->add_option("--witness-out", witness_out, "dump the witness as CSV");

    std::vector<int> ds;
    std::vector<double> ps, ss;
    std::vector<Coord> Ns;
    std::string mode = "verify";
    auto* sweep = app.add_subcommand("sweep", "cross (d,p,s,N) grids");
    add_param_flags(sweep, pack.params, pack.regime, pack.lattice);
    sweep->add_option("--d-list", ds, "dimensions")->delimiter(',');
    sweep->add_option("--p-list", ps, "p grid")->delimiter(',');
    sweep->add_option("--s-list", ss, "s grid")->delimiter(',');
    sweep->add_option("--N-list", Ns, "box radii")->delimiter(',');
    sweep->add_option("--margin", margin, "fractional truncation margin");
    sweep->add_option("--trials", trials, "trials per cell (verify mode)");
    sweep->add_option("--mode", mode, "verify or optimize")
        ->check(CLI::IsMember({"verify", "optimize"}));

    int cn = 1, ck = 1, cd = 1;
    std::string beta = "0";
    auto* census = app.add_subcommand("census", "edge-usage counts of the axis paths");
    census->add_option("--n", cn, "annulus level")->required();
    census->add_option("--k", ck, "annulus gap")->required();
    census->add_option("--d", cd, "dimension")->required();
    census->add_option("--beta", beta, "shift index or 'all'");

    double tf_t = 1.0, tf_p = 2.0;
    Coord tf_n = 4, tf_radius = 0;
    int tf_d = 1;
    auto* testfn = app.add_subcommand("testfn", "exact family values against the bounds");
    testfn->add_option("--family", family, "un, vn or one_minus_vn")->required();
    testfn->add_option("--d", tf_d, "dimension")->required();
    testfn->add_option("--n", tf_n, "scale")->required();
    testfn->add_option("--t", tf_t, "weight exponent")->required();
    testfn->add_option("--p", tf_p, "exponent p");
    testfn->add_option("--radius", tf_radius, "truncation radius (complement)");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_threads(common);
        if (constants->parsed()) return run_constants(pack, common);
        if (verify->parsed()) return run_verify(pack, common, N, margin, trials);
        if (probe->parsed()) return run_probe(pack, common, family, n_list, radius_power);
        if (optimize->parsed())
            return run_optimize(pack, common, N, margin, method, restarts, tol, max_iter,
                                witness_out);
        if (sweep->parsed()) return run_sweep(pack, common, ds, ps, ss, Ns, margin, trials, mode);
        if (census->parsed()) return run_census(common, cn, ck, cd, beta);
        if (testfn->parsed()) return run_testfn(common, family, tf_d, tf_n, tf_t, tf_p, tf_radius);
    } catch (const ValidationError& e) {
        std::cerr << Json{{"error", "validation"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << Json{{"error", "capacity"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << Json{{"error", "numeric"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    }
    return 2;
}
