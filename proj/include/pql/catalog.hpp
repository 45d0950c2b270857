#pragma once

#include <string>
#include <vector>

#include "pql/system.hpp"

namespace pql {

/// One normal form of the classification: reduced system, side conditions
/// on its coefficient functions (as differential polynomials that must
/// vanish), and how it is integrated.
struct CatalogEntry {
    std::string id;  // e.g. "VIII(3)", "IX.B(2)"
    System sys;
    std::vector<Poly> side_conditions;
    std::vector<std::string> constants;  // symbols that must be constants
    std::string integration;             // "" when elementary
};

namespace detail {

inline Frac fr(const Poly& p) { return Frac(p); }
inline Poly st(const std::string& v) { return Poly(state(v)); }
inline Poly sy(const std::string& n, int k = 0) { return Poly(jet(n, k)); }
inline Poly cs(const std::string& n) { return Poly(cst(n)); }

}  // namespace detail

/// Reduced normal forms free of movable critical points. Parametric
/// families (VIII, IX.A0, IX.B0) are instantiated at a concrete n.
inline std::vector<CatalogEntry> table1_catalog(int nmin = 1, int nmax = 4) {
    using namespace detail;
    std::vector<CatalogEntry> out;
    Poly y = st("y"), z = st("z");

    auto add = [&](std::string id, Poly py, Poly pz, std::vector<Poly> conds = {},
                   std::vector<std::string> consts = {}, std::string integ = "") {
        System s;
        s.vars = {"y", "z"};
        s.rhs = {fr(py), fr(pz)};
        s.label = id;
        out.push_back({std::move(id), std::move(s), std::move(conds), std::move(consts),
                       std::move(integ)});
    };

    add("I", -y * y + sy("a") * z, -y * z);
    add("II", y * (y - Rat(2) * z) + sy("a"), -z * z);
    add("III", y * y, Rat(2) * y * z + sy("a") * y);
    add("IV", -y * y + sy("a") * z, Poly());
    add("V0", Poly(), Rat(6) * y * y);
    add("V", z, Rat(6) * y * y + sy("f"), {sy("f", 2)}, {}, "Painleve I");
    add("VI", sy("a"), z * (z + y) + sy("b"));
    add("VII0", Poly(), y * z + sy("a"));
    add("VII", z, y * z + sy("a"));
    for (int n = nmin; n <= nmax; ++n) {
        // the order-(n-1) condition in b is produced by the charts module
        add("VIII(" + std::to_string(n) + ")", y * (y - Rat(n + 2) * z) + sy("a"),
            -z * (Rat(n) * y + z) + sy("b"));
    }
    for (int n = std::max(2, nmin); n <= nmax; ++n) {
        add("IX.A0(" + std::to_string(n) + ")", -y * y, -Rat(n + 1) * y * z + sy("a") * y);
        add("IX.B0(" + std::to_string(n) + ")", -y * y, Rat(n - 1) * y * z + sy("p") * y,
            {sy("p", n - 1)});
    }
    add("IX.A(3)", -y * y + z, -Rat(4) * y * z + sy("a"));
    add("IX.B(2)", -y * y + z + Rat(12) * sy("q"), y * z,
        {(sy("q", 2) - Rat(6) * sy("q") * sy("q")).derive(2)}, {}, "Painleve I");
    add("IX.B(3)", -y * y + z - Rat(1, 2) * sy("f"), Rat(2) * y * z + cs("H"), {sy("f", 2)},
        {"H"}, "Painleve II");
    add("IX.B(5)", -y * y + z + Rat(3) * sy("q"), Rat(4) * y * z - Rat(9) * sy("q", 1),
        {(sy("q", 2) - Rat(6) * sy("q") * sy("q")).derive(2)}, {}, "Painleve I");
    add("XI", y * (y - z) + sy("a") * y, z * (z - y) - sy("a") * z);
    add("XII", y * (Rat(2) * z + y) + Rat(2) * sy("f") * y - cs("H"),
        -z * (Rat(2) * y + z) - Rat(2) * sy("f") * z + cs("K"), {sy("f", 2)}, {"H", "K"},
        "Painleve IV");
    add("XIII", Rat(1, 2) * y * (Rat(2) * z - y) + Rat(2) * sy("p") * y,
        Rat(1, 2) * z * (Rat(3) * y - Rat(2) * z) - Rat(4) * sy("p") * z +
            Rat(2) * sy("p") * sy("p") - Rat(2) * sy("p", 1) + sy("f"),
        {sy("f", 2), (sy("p", 2) - Rat(2) * sy("p").pow(3) - sy("f") * sy("p")).derive()},
        {}, "Painleve II");
    {
        Poly q = Rat(1, 12) * (sy("p", 1) + sy("p") * sy("p") - sy("r"));
        add("XIV", y * (Rat(2) * z - y) + Rat(3) * sy("p") * y + sy("r"),
            z * (y - z) - Rat(2) * sy("p") * z,
            {sy("r", 1) - sy("p") * sy("r"), (q.derive(2) - Rat(6) * q * q).derive(2)}, {},
            "Painleve I");
    }
    return out;
}

inline const CatalogEntry& find_catalog_entry(const std::vector<CatalogEntry>& cat,
                                              const std::string& id) {
    for (auto& e : cat)
        if (e.id == id) return e;
    throw std::domain_error("catalog: unknown entry " + id);
}

}  // namespace pql
