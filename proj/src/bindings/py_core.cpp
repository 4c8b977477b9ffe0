#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hardy/optimizer.hpp"
#include "hardy/parallel.hpp"
#include "hardy/paths.hpp"
#include "hardy/serialize.hpp"
#include "hardy/version.hpp"

namespace py = pybind11;
using namespace hardy;

namespace {

py::object json_to_py(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null: return py::none();
        case Json::value_t::boolean: return py::bool_(j.get<bool>());
        case Json::value_t::number_integer: return py::int_(j.get<long long>());
        case Json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case Json::value_t::number_float: return py::float_(j.get<double>());
        case Json::value_t::string: return py::str(j.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case Json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default: return py::none();
    }
}

HardyParams make_params(const std::string& regime, int d, double p, double s, double eps,
                        double delta, int K, const std::string& lattice) {
    HardyParams params;
    params.regime = regime_from_string(regime);
    params.d = d;
    params.p = p;
    params.s = s;
    params.eps = eps;
    params.delta = delta;
    params.K = K;
    params.lattice = lattice_kind_from_string(lattice);
    return params;
}

EnergyVariant variant_from(const std::string& name, double eps) {
    if (name == "local_exclude_origin") return EnergyVariant::local_exclude_origin();
    if (name == "local_include_origin") return EnergyVariant::local_include_origin();
    if (name == "local_weighted") return EnergyVariant::local_weighted(eps);
    if (name == "local_weighted_max") return EnergyVariant::local_weighted_max(eps);
    if (name == "frac_exclude_origin") return EnergyVariant::frac_exclude_origin();
    if (name == "frac_full") return EnergyVariant::frac_full();
    if (name == "frac_weighted") return EnergyVariant::frac_weighted(eps);
    throw ValidationError("unknown energy variant: " + name);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact functionals, explicit constants and verification tools for "
              "discrete Hardy inequalities on lattices";
    m.attr("__version__") = kVersion;

    py::register_exception<CapacityError>(m, "CapacityError");
    py::register_exception<NumericError>(m, "NumericError");
    py::register_exception<ValidationError>(m, "ValidationError");

    py::class_<Domain>(m, "Domain")
        .def(py::init([](const std::string& lattice, int d, Coord radius) {
                 return Domain(lattice_kind_from_string(lattice), d, radius);
             }),
             py::arg("lattice"), py::arg("d"), py::arg("radius"))
        .def_property_readonly("dim", &Domain::dim)
        .def_property_readonly("radius", &Domain::radius)
        .def_property_readonly("size", &Domain::size)
        .def("point_at",
             [](const Domain& dom, std::size_t i) { return dom.point_at(i).coords; })
        .def("index_of", [](const Domain& dom, const std::vector<Coord>& x) {
            return dom.index_of(x);
        });

    py::class_<LatticeFunction>(m, "LatticeFunction")
        .def(py::init<Domain>(), py::arg("domain"))
        .def_property_readonly("domain", &LatticeFunction::domain)
        .def("values",
             [](const LatticeFunction& u) {
                 return std::vector<double>(u.values().begin(), u.values().end());
             })
        .def("set_values",
             [](LatticeFunction& u, const std::vector<double>& v) {
                 if (v.size() != u.size()) throw ValidationError("value table size mismatch");
                 std::copy(v.begin(), v.end(), u.values().begin());
             })
        .def("set", [](LatticeFunction& u, const std::vector<Coord>& x, double v) { u.set(x, v); })
        .def("at", [](const LatticeFunction& u, const std::vector<Coord>& x) {
            return u.at_point(x);
        });

    m.def("annulus_points", [](int n, int d) {
        std::vector<std::vector<Coord>> out;
        for (auto& p : annulus_points(n, d)) out.push_back(std::move(p.coords));
        return out;
    });
    m.def("annulus_cardinality", &annulus_cardinality);
    m.def("sphere_decomposition", [](Coord k, int d) {
        auto dec = sphere_decomposition(k, d);
        std::vector<std::vector<Coord>> faces, corners;
        for (auto& p : dec.faces) faces.push_back(std::move(p.coords));
        for (auto& p : dec.corners) corners.push_back(std::move(p.coords));
        return py::make_tuple(faces, corners);
    });
    m.def("neighbors", [](const std::vector<Coord>& x, const std::string& lattice,
                          bool exclude_origin) {
        std::vector<std::vector<Coord>> out;
        for (auto& p : neighbors(LatticePoint(x), lattice_kind_from_string(lattice),
                                 exclude_origin ? NeighborVariant::ExcludeOrigin
                                                : NeighborVariant::AllLattice))
            out.push_back(std::move(p.coords));
        return out;
    });

    m.def("weighted_lhs", &weighted_lhs, py::arg("u"), py::arg("p"), py::arg("t"));
    m.def(
        "local_energy",
        [](const LatticeFunction& u, double p, const std::string& variant, double eps) {
            return local_energy(u, p, variant_from(variant, eps));
        },
        py::arg("u"), py::arg("p"), py::arg("variant") = "local_include_origin",
        py::arg("eps") = 0.0);
    m.def(
        "fractional_energy",
        [](const LatticeFunction& u, double s, double p, const std::string& variant, Coord margin,
           double eps) { return fractional_energy(u, s, p, variant_from(variant, eps), margin); },
        py::arg("u"), py::arg("s"), py::arg("p"), py::arg("variant") = "frac_full",
        py::arg("margin") = 0, py::arg("eps") = 0.0);
    m.def("annuli_energy", &annuli_energy, py::arg("u"), py::arg("s"), py::arg("p"), py::arg("K"));

    m.def("minimal_K", &minimal_K);
    m.def("lemma_constant", &lemma_constant);
    m.def("path_constant", &path_constant);
    m.def("trivial_lemma_constant", &trivial_lemma_constant);
    m.def(
        "theorem_constant",
        [](const std::string& regime, int d, double p, double s, double eps, double delta, int K,
           const std::string& lattice) {
            return json_to_py(to_json(theorem_constant(
                make_params(regime, d, p, s, eps, delta, K, lattice))));
        },
        py::arg("regime"), py::arg("d"), py::arg("p"), py::arg("s") = 0.0, py::arg("eps") = 0.0,
        py::arg("delta") = 0.0, py::arg("K") = 0, py::arg("lattice") = "zplus");

    m.def("build_path", [](const std::vector<Coord>& j, const std::vector<Coord>& m) {
        std::vector<std::vector<Coord>> out;
        for (auto& x : build_path(LatticePoint(j), LatticePoint(m)).points)
            out.push_back(std::move(x.coords));
        return out;
    });
    m.def("build_shifted_path",
          [](const std::vector<Coord>& j, const std::vector<Coord>& m, int beta) {
              std::vector<std::vector<Coord>> out;
              for (auto& x : build_shifted_path(LatticePoint(j), LatticePoint(m), beta).points)
                  out.push_back(std::move(x.coords));
              return out;
          });
    m.def(
        "edge_usage_census",
        [](int n, int k, int d, int beta) {
            const CensusResult res = edge_usage_census(n, k, d, beta);
            py::dict out;
            out["pair_count"] = res.pair_count;
            out["max_count"] = res.max_count;
            out["bound"] = res.bound;
            out["per_beta_max"] = res.per_beta_max;
            return out;
        },
        py::arg("n"), py::arg("k"), py::arg("d"), py::arg("beta") = 0);

    m.def(
        "materialize",
        [](const std::string& family, Coord n, const Domain& dom) {
            return materialize({test_family_from_string(family), n}, dom);
        },
        py::arg("family"), py::arg("n"), py::arg("dom"));
    m.def("un_lhs_bound", &un_lhs_bound);
    m.def("un_rhs_bound", &un_rhs_bound);
    m.def("vn_lhs_bound", &vn_lhs_bound);
    m.def("one_minus_vn_lhs_bound", &one_minus_vn_lhs_bound);
    m.def("vn_energy_bound", &vn_energy_bound);
    m.def("beta_function", &beta_function);
    m.def("fit_exponent", [](const std::vector<double>& ns, const std::vector<double>& vs) {
        const ExponentFit f = fit_exponent(ns, vs);
        return py::make_tuple(f.slope, f.residual);
    });

    m.def(
        "random_test_function",
        [](const Domain& dom, const std::string& profile, std::uint64_t seed) {
            return random_test_function(dom, GeneratorProfile::from_string(profile), seed);
        },
        py::arg("dom"), py::arg("profile"), py::arg("seed"));
    m.def(
        "verify_inequality",
        [](const std::string& regime, int d, double p, double s, double eps, double delta, int K,
           const std::string& lattice, const LatticeFunction& u, Coord margin) {
            return json_to_py(to_json(verify_inequality(
                make_params(regime, d, p, s, eps, delta, K, lattice), u, margin)));
        },
        py::arg("regime"), py::arg("d"), py::arg("p"), py::arg("s"), py::arg("eps"),
        py::arg("delta"), py::arg("K"), py::arg("lattice"), py::arg("u"), py::arg("margin"));
    m.def(
        "run_campaign",
        [](const std::string& regime, int d, double p, double s, double eps, double delta,
           const std::string& lattice, Coord N, Coord margin, int trials, std::uint64_t seed) {
            CampaignConfig config;
            config.cells = {make_params(regime, d, p, s, eps, delta, kAutoK, lattice)};
            config.N = N;
            config.margin = margin;
            config.trials_per_cell = trials;
            config.seed = seed;
            const CampaignReport report = run_campaign(config);
            std::ostringstream os;
            write_campaign_jsonl(os, report, Json{{"command", "python"}});
            py::dict out;
            out["violations"] = report.violations;
            out["max_ratio"] = report.cells.empty() ? 0.0 : report.cells.front().max_ratio;
            out["jsonl"] = os.str();
            return out;
        },
        py::arg("regime"), py::arg("d"), py::arg("p"), py::arg("s") = 0.0, py::arg("eps") = 0.0,
        py::arg("delta") = 0.0, py::arg("lattice") = "zplus", py::arg("N") = 16,
        py::arg("margin") = 16, py::arg("trials") = 50, py::arg("seed") = 1);

    m.def(
        "best_constant_p2",
        [](const std::string& regime, int d, double s, double eps, double delta,
           const std::string& lattice, Coord N, double tol, int max_iter) {
            OptimizeOptions opts;
            opts.tol = tol;
            opts.max_iter = max_iter;
            const OptimizeResult res =
                best_constant_p2(make_params(regime, d, 2.0, s, eps, delta, kAutoK, lattice), N, opts);
            return json_to_py(to_json(res));
        },
        py::arg("regime"), py::arg("d"), py::arg("s") = 0.0, py::arg("eps") = 0.0,
        py::arg("delta") = 0.0, py::arg("lattice") = "zplus", py::arg("N") = 64,
        py::arg("tol") = 1e-10, py::arg("max_iter") = 200);
    m.def(
        "best_constant_general",
        [](const std::string& regime, int d, double p, double s, double eps, double delta,
           const std::string& lattice, Coord N, int restarts, double tol, int max_iter) {
            OptimizeOptions opts;
            opts.tol = tol;
            opts.max_iter = max_iter;
            opts.restarts = restarts;
            const OptimizeResult res = best_constant_general(
                make_params(regime, d, p, s, eps, delta, kAutoK, lattice), N, opts);
            return json_to_py(to_json(res));
        },
        py::arg("regime"), py::arg("d"), py::arg("p"), py::arg("s") = 0.0, py::arg("eps") = 0.0,
        py::arg("delta") = 0.0, py::arg("lattice") = "zplus", py::arg("N") = 16,
        py::arg("restarts") = 8, py::arg("tol") = 1e-9, py::arg("max_iter") = 200);

    m.def("set_max_threads", &set_max_threads);
}
