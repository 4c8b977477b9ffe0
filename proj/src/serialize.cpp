#include "hardy/serialize.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "hardy/version.hpp"

namespace hardy {

namespace {

// JSON has no infinity; the small-box recursion can overflow to it.
Json num(double v) {
    if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
    if (std::isnan(v)) return Json("nan");
    return Json(v);
}

} // namespace

Json to_json(const HardyParams& p) {
    return Json{{"regime", to_string(p.regime)},
                {"lattice", to_string(p.lattice)},
                {"d", p.d},
                {"p", p.p},
                {"s", p.s},
                {"eps", p.eps},
                {"delta", p.delta},
                {"K", p.K}};
}

Json to_json(const ResolvedParams& p) {
    Json j = to_json(p.input);
    j["s_used"] = p.s_used;
    j["sp"] = p.sp;
    j["t"] = p.t;
    j["K"] = p.K;
    j["rhs_variant"] = to_string(p.rhs_variant.kind);
    j["origin_must_vanish"] = p.origin_must_vanish;
    return j;
}

Json to_json(const ConstantReport& r) {
    Json terms = Json::array();
    for (const auto& term : r.assembly) {
        Json factors = Json::array();
        for (const auto& f : term.factors)
            factors.push_back(Json{{"factor", f.name}, {"value", num(f.value)}, {"source", f.source}});
        terms.push_back(Json{{"term", term.label}, {"value", num(term.value())}, {"factors", factors}});
    }
    return Json{{"regime", to_string(r.regime)},
                {"lattice", to_string(r.lattice)},
                {"d", r.d},
                {"p", r.p},
                {"s_used", r.s_used},
                {"t", r.t},
                {"K", r.K},
                {"value", num(r.value)},
                {"assembly", terms}};
}

Json to_json(const VerificationRecord& r) {
    return Json{{"regime", to_string(r.params.input.regime)},
                {"lattice", to_string(r.params.input.lattice)},
                {"d", r.params.input.d},
                {"p", r.params.input.p},
                {"s", r.params.input.s},
                {"t", r.params.t},
                {"eps", r.params.input.eps},
                {"delta", r.params.input.delta},
                {"K", r.params.K},
                {"N", r.box_radius},
                {"seed", r.seed},
                {"profile", r.profile},
                {"margin", r.margin_used},
                {"lhs", num(r.lhs)},
                {"rhs", num(r.rhs)},
                {"constant", num(r.constant)},
                {"ratio", num(r.ratio)},
                {"pass", r.pass}};
}

VerificationRecord verification_record_from_json(const Json& j) {
    VerificationRecord r;
    HardyParams p;
    p.regime = regime_from_string(j.at("regime").get<std::string>());
    p.lattice = lattice_kind_from_string(j.at("lattice").get<std::string>());
    p.d = j.at("d").get<int>();
    p.p = j.at("p").get<double>();
    p.s = j.at("s").get<double>();
    p.eps = j.at("eps").get<double>();
    p.delta = j.at("delta").get<double>();
    r.params = resolve_params(p);
    r.box_radius = j.at("N").get<Coord>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.profile = j.at("profile").get<std::string>();
    r.margin_used = j.at("margin").get<Coord>();
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.constant = j.at("constant").is_string() ? std::numeric_limits<double>::infinity()
                                              : j.at("constant").get<double>();
    r.ratio = j.at("ratio").get<double>();
    r.pass = j.at("pass").get<bool>();
    return r;
}

Json to_json(const CellSummary& s) {
    Json j = to_json(s.params);
    j["constant"] = num(s.constant);
    j["max_ratio"] = num(s.max_ratio);
    j["trials"] = s.trials;
    j["violations"] = s.violations;
    return j;
}

Json to_json(const ProbeResult& r) {
    Json series = Json::array();
    for (std::size_t i = 0; i < r.ns.size(); ++i)
        series.push_back(Json{{"n", r.ns[i]},
                              {"lhs", num(r.lhs[i])},
                              {"rhs", num(r.rhs[i])},
                              {"ratio", num(r.ratios[i])}});
    return Json{{"regime", to_string(r.config.regime)},
                {"family", to_string(r.config.family)},
                {"d", r.config.d},
                {"p", r.config.p},
                {"t", r.config.t},
                {"claimed_exponent", r.claimed_exponent},
                {"expected_slope", r.expected_slope},
                {"fitted_slope", num(r.fit.slope)},
                {"fit_residual", num(r.fit.residual)},
                {"verdict", to_string(r.verdict)},
                {"series", series}};
}

Json to_json(const OptimizeResult& r, bool include_witness) {
    Json history = Json::array();
    for (const auto& [it, ratio] : r.history) history.push_back(Json{{"iter", it}, {"ratio", num(ratio)}});
    Json j{{"estimate", num(r.estimate)},
           {"iterations", r.iterations},
           {"converged", r.converged},
           {"lower_bound_only", r.lower_bound_only},
           {"history", history}};
    if (include_witness) {
        Json w = Json::array();
        const Domain& dom = r.witness.domain();
        for (std::size_t i = 0; i < r.witness.size(); ++i)
            if (r.witness[i] != 0.0)
                w.push_back(Json{{"point", to_string(dom.point_at(i))}, {"value", r.witness[i]}});
        j["witness"] = w;
    }
    return j;
}

void write_campaign_jsonl(std::ostream& os, const CampaignReport& report, const Json& header) {
    Json h = header;
    h["type"] = "header";
    h["version"] = kVersion;
    os << h.dump() << '\n';
    for (const auto& rec : report.records) os << to_json(rec).dump() << '\n';
    Json tail{{"type", "summary"}, {"violations", report.violations}, {"errors", report.errors.size()}};
    Json cells = Json::array();
    for (const auto& c : report.cells) cells.push_back(to_json(c));
    tail["cells"] = cells;
    os << tail.dump() << '\n';
}

void write_campaign_csv(std::ostream& os, const CampaignReport& report, const Json& header) {
    os << "# " << header.dump() << " version=" << kVersion << '\n';
    os << "regime,lattice,d,p,s,t,max_ratio,constant,violations\n";
    for (const auto& c : report.cells) {
        const ResolvedParams rp = resolve_params(c.params);
        os << to_string(c.params.regime) << ',' << to_string(c.params.lattice) << ',' << c.params.d
           << ',' << c.params.p << ',' << c.params.s << ',' << rp.t << ',' << c.max_ratio << ','
           << c.constant << ',' << c.violations << '\n';
    }
}

void write_witness_csv(std::ostream& os, const LatticeFunction& u) {
    os << "point,value\n";
    const Domain& dom = u.domain();
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0.0) os << '"' << to_string(dom.point_at(i)) << "\"," << u[i] << '\n';
}

} // namespace hardy
