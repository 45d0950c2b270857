#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pql/catalog.hpp"
#include "pql/numeric/monodromy.hpp"
#include "pql/pipeline.hpp"
#include "pql/specfile.hpp"
#include "pql/table2.hpp"

namespace pql::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
    Ok = 0,
    Failure = 1,
    ParseFailure = 2,
    ShapeFailure = 3,
    NumericFailure = 4,
    InconclusiveMonodromy = 5,
};

inline std::string fnv1a_digest(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Json report_shell(const std::string& command, const std::string& input) {
    Json r;
    r["schema"] = "pql-report/1";
    r["command"] = command;
    r["input_digest"] = "fnv1a:" + fnv1a_digest(input);
    r["warnings"] = Json::array();
    return r;
}

inline Json json_index(const OrbitIndex& i) {
    switch (i.tag) {
        case OrbitIndex::Finite: return Json(i.k);
        case OrbitIndex::Infinite: return Json("inf");
        case OrbitIndex::Undefined: return Json("---");
        case OrbitIndex::NonInteger: return Json("non-integer");
    }
    return Json();
}

inline Json json_profile(const IndexProfile& p) {
    Json r;
    r["dicritical"] = p.dicritical;
    Json orbits = Json::array();
    for (auto& o : p.orbits) {
        Json jo;
        jo["direction"] = o.direction ? Json(o.direction->str()) : Json(nullptr);
        jo["multiplicity"] = o.multiplicity;
        jo["index"] = json_index(o.index);
        orbits.push_back(jo);
    }
    r["orbits"] = orbits;
    return r;
}

inline Json json_map(const QMat& m) {
    Json rows = Json::array();
    rows.push_back(Json::array({m.m[0].str(), m.m[1].str()}));
    rows.push_back(Json::array({m.m[2].str(), m.m[3].str()}));
    return rows;
}

// ---------------------------------------------------------------------------

inline int cmd_classify(const std::string& input, Json& out) {
    out = report_shell("classify", input);
    SystemSpec spec = parse_system_spec(input);
    System sys = spec.resolved_system();
    QuadPair q = quadratic_part(sys);
    out["quadratic_part"] = {{"P", {q.P[0].str(), q.P[1].str(), q.P[2].str()}},
                             {"Q", {q.Q[0].str(), q.Q[1].str(), q.Q[2].str()}}};
    MatchResult m = match_table2(q);
    Json res;
    res["label"] = BureauType::label_name(m.type.label);
    res["n"] = m.type.n ? Json(*m.type.n) : Json(nullptr);
    if (!is_dicritical(q)) {
        IndexProfile prof = orbit_indices(q);
        res["indices"] = Json::array();
        for (auto& i : prof.summary()) res["indices"].push_back(json_index(i));
        res["profile"] = json_profile(prof);
    } else {
        res["indices"] = Json::array();
        res["profile"] = json_profile(orbit_indices(q));
    }
    if (m.type.label != BureauType::NotUnivalent && m.type.label != BureauType::Unknown)
        res["normalizing_map"] = json_map(m.map);
    if (!m.failure.empty()) res["failure"] = m.failure;
    for (auto& w : m.warnings) out["warnings"].push_back(w);
    out["result"] = res;
    return Ok;
}

inline int cmd_conditions(const std::string& input, const std::string& family,
                          std::optional<int> n, Json& out) {
    out = report_shell("conditions", input);
    SystemSpec spec = parse_system_spec(input);
    System sys = spec.resolved_system();
    std::string fam = family.empty() ? spec.family_hint : family;
    if (fam.empty()) throw std::domain_error("no family given (flag --family or [family] section)");
    if (!n && spec.family_n) n = spec.family_n;
    if (!n && spec.decls.count("n")) n = static_cast<int>(spec.decls.at("n").ivalue);
    ConditionReport rep = derive_family_conditions(fam, sys, n);
    Json res;
    res["family"] = rep.family;
    res["conditions"] = Json::array();
    for (auto& c : rep.final_conditions) res["conditions"].push_back(c.str());
    res["steps"] = Json::array();
    for (auto& s : rep.steps)
        res["steps"].push_back({{"note", s.note}, {"condition", s.condition.str()}});
    res["evaluated"] = Json::array();
    for (auto& v : rep.evaluated_conditions) res["evaluated"].push_back(v.str());
    if (!rep.glossary.empty()) {
        Json g;
        for (auto& [k, v] : rep.glossary) g[k] = v;
        res["glossary"] = g;
    }
    res["sufficiency"] = rep.sufficiency;
    res["verdict"] = rep.verdict;
    out["result"] = res;
    return Ok;
}

inline int cmd_catalog(int table, Json& out) {
    out = report_shell("catalog", "table " + std::to_string(table));
    Json res = Json::array();
    if (table == 1) {
        for (auto& e : table1_catalog(1, 4)) {
            Json je;
            je["id"] = e.id;
            je["d" + e.sys.vars[0]] = e.sys.rhs[0].str();
            je["d" + e.sys.vars[1]] = e.sys.rhs[1].str();
            Json conds = Json::array();
            for (auto& c : e.side_conditions) conds.push_back(c.str());
            je["side_conditions"] = conds;
            if (!e.integration.empty()) je["integration"] = e.integration;
            res.push_back(je);
        }
    } else {
        auto row = [&](const std::string& name, BureauType::Label l, long long n = 0) {
            QuadPair q = table2_representative(l, n);
            Json je;
            je["id"] = name;
            je["P"] = {q.P[0].str(), q.P[1].str(), q.P[2].str()};
            je["Q"] = {q.Q[0].str(), q.Q[1].str(), q.Q[2].str()};
            Json idx = Json::array();
            IndexProfile prof = orbit_indices(q);
            if (!prof.dicritical)
                for (auto& i : prof.summary()) idx.push_back(json_index(i));
            je["indices"] = idx;
            res.push_back(je);
        };
        row("I", BureauType::I);
        row("V", BureauType::V);
        row("III (n=-1) / IV (n=1) / IX(n)", BureauType::IX, 2);
        row("VII", BureauType::VII);
        row("II (n=0) / VIII(n)", BureauType::VIII, 1);
        row("VI", BureauType::VI);
        row("XI", BureauType::XI);
        row("XII", BureauType::XII);
        row("XIII", BureauType::XIII);
        row("XIV", BureauType::XIV);
    }
    out["result"] = res;
    return Ok;
}

inline int cmd_integral_check(const std::string& input, const std::string& Hexpr,
                              const std::vector<std::string>& assumes, Json& out) {
    out = report_shell("integral-check", input + "\nH=" + Hexpr);
    SystemSpec spec = parse_system_spec(input);
    System sys = spec.resolved_system();
    std::set<std::string> consts;
    for (auto& [n, d] : spec.decls)
        if (d.kind == SymbolDecl::Const) consts.insert(n);
    Poly H = parse_poly_expr(Hexpr, {sys.vars[0], sys.vars[1]}, consts);
    FirstIntegral fi;
    fi.H = Frac(H);
    for (auto& a : assumes) {
        std::string text = a;
        auto eq = text.find('=');
        Poly lhs, rhs;
        if (eq != std::string::npos) {
            lhs = parse_poly_expr(text.substr(0, eq), {}, consts);
            rhs = parse_poly_expr(text.substr(eq + 1), {}, consts);
        } else {
            lhs = parse_poly_expr(text, {}, consts);
        }
        auto rule = orient_rule(lhs - rhs);
        if (!rule) throw std::domain_error("assumption not orientable: " + a);
        fi.assumptions.add(*rule);
    }
    bool holds = verify_first_integral(sys, fi);
    Json res;
    res["H"] = H.str();
    res["holds"] = holds;
    Json as = Json::array();
    for (auto& a : assumes) as.push_back(a);
    res["assumptions"] = as;
    out["result"] = res;
    return Ok;
}

struct NumericArgs {
    std::complex<double> center, base;
    double radius = 0.5;
    std::array<std::complex<double>, 2> init{};
    double tol = 1e-10;
    std::string trace_file;
    bool extended = false;
};

inline int cmd_monodromy(const std::string& input, const NumericArgs& args, Json& out) {
    out = report_shell("monodromy", input);
    SystemSpec spec = parse_system_spec(input);
    NumericInstance inst = spec.numeric_instance();
    std::ofstream trace;
    IntegrateOptions opt;
    if (!args.trace_file.empty()) {
        trace.open(args.trace_file);
        opt.trace = &trace;
    }
    MonodromyReport rep;
    try {
        if (args.extended)
            rep = monodromy_test<long double>(inst, args.base, args.init, args.center,
                                              args.radius, args.tol, opt);
        else
            rep = monodromy_test<double>(inst, args.base, args.init, args.center, args.radius,
                                         args.tol, opt);
    } catch (const StepCollapse& sc) {
        out["result"] = {{"error", "step collapse (suspected non-pole singularity)"},
                         {"t", {sc.where.real(), sc.where.imag()}}};
        return NumericFailure;
    } catch (const NonFiniteState&) {
        out["result"] = {{"error", "state became non-finite"}};
        return NumericFailure;
    }
    Json res;
    auto cpx = [](std::complex<double> v) { return Json::array({v.real(), v.imag()}); };
    res["start_state"] = {cpx(rep.start_state[0]), cpx(rep.start_state[1])};
    res["end_state"] = {cpx(rep.end_state[0]), cpx(rep.end_state[1])};
    res["jump"] = {cpx(rep.jump[0]), cpx(rep.jump[1])};
    res["discrepancy"] = {rep.discrepancy[0], rep.discrepancy[1]};
    res["verdict"] = rep.verdict == MonodromyReport::SingleValued ? "single-valued"
                     : rep.verdict == MonodromyReport::Branching  ? "branching"
                                                                  : "inconclusive";
    res["steps"] = rep.stats.accepted;
    res["chart_switches"] = rep.stats.chart_switches;
    Json sing = Json::array();
    for (auto& s : rep.stats.singularities)
        sing.push_back({{"t", {s.t.real(), s.t.imag()}},
                        {"kind", s.kind == SingularityNote::Pole ? "pole" : "suspected-branch"}});
    res["singularities_detected"] = sing;
    out["result"] = res;
    return rep.verdict == MonodromyReport::Inconclusive ? InconclusiveMonodromy : Ok;
}

inline int cmd_equivalence(const std::string& input, const std::string& family,
                           const NumericArgs& args, bool has_init, Json& out) {
    out = report_shell("equivalence", input);
    SystemSpec spec = parse_system_spec(input);
    std::string fam = family.empty() ? spec.family_hint : family;
    if (fam.empty()) throw std::domain_error("no family given");
    EquivalenceMap m = equivalence_map(fam);
    Json res;
    res["family"] = fam;
    res["target"] = m.target_name;
    res["forward"] = {m.forward[0].str(), m.forward[1].str()};
    res["backward"] = {m.backward[0].str(), m.backward[1].str()};
    bool rt = equivalence_round_trips(m);
    bool tr = equivalence_transport_matches(m);
    res["round_trip"] = rt ? "exact" : "failed";
    res["field_transport"] = tr ? "exact" : "failed";
    if (spec.has_instance() && has_init) {
        NumericInstance inst(m.source, [&] {
            Bindings b = spec.instance;
            for (auto& [name, d] : spec.decls)
                if (d.kind == SymbolDecl::PolyBinding) b[name] = d.poly;
            return b;
        }());
        auto rr = equivalence_residual(inst, m, args.init,
                                       ComplexPath::line(args.base, args.center), args.tol);
        res["numeric"] = {{"max_residual", rr.max_residual},
                          {"samples", rr.samples},
                          {"skipped_singular", rr.skipped_singular}};
    }
    out["result"] = res;
    return rt && tr ? Ok : Failure;
}

}  // namespace pql::cli
