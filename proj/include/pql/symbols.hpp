#pragma once

#include <compare>
#include <string>

namespace pql {

/// How a named symbol behaves under the derivation d/dt.
enum class SymKind : unsigned char {
    Jet,    ///< formal function of t; (name, k) |-> (name, k+1)
    Time,   ///< the independent variable t itself; t' = 1
    Const,  ///< constant; derivative 0
    State,  ///< dependent (phase-space) variable; opaque to d/dt
};

/// A jet variable: symbol name plus derivative order ("number of primes").
/// Ordering is by (name, order); the kind is a per-name property and does
/// not participate in comparisons.
struct Sym {
    std::string name;
    int order = 0;
    SymKind kind = SymKind::Jet;

    friend bool operator==(const Sym& a, const Sym& b) {
        return a.name == b.name && a.order == b.order;
    }
    friend bool operator!=(const Sym& a, const Sym& b) { return !(a == b); }
    friend bool operator<(const Sym& a, const Sym& b) {
        if (int c = a.name.compare(b.name); c != 0) return c < 0;
        return a.order < b.order;
    }

    std::string str() const {
        std::string s = name;
        for (int i = 0; i < order; ++i) s += '\'';
        return s;
    }
};

inline Sym jet(std::string name, int order = 0) { return {std::move(name), order, SymKind::Jet}; }
inline Sym tvar() { return {"t", 0, SymKind::Time}; }
inline Sym cst(std::string name) { return {std::move(name), 0, SymKind::Const}; }
inline Sym state(std::string name) { return {std::move(name), 0, SymKind::State}; }

}  // namespace pql
