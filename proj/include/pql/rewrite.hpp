#pragma once

#include <map>
#include <optional>
#include <string>

#include "pql/fraction.hpp"

namespace pql {

/// Oriented rewrite rule: the jet (name, order) and everything above it is
/// eliminated in favor of `image` (and its derivatives). Images must not
/// contain the eliminated jet or higher jets of the same name.
struct Rule {
    Sym base;    // Jet symbol being eliminated
    Poly image;  // replacement for `base`
};

/// Triangular rewrite system, at most one rule per symbol name.
class RuleSet {
public:
    RuleSet() = default;

    void add(Rule r) { rules_[r.base.name] = std::move(r); }

    bool empty() const { return rules_.empty(); }
    const std::map<std::string, Rule>& rules() const { return rules_; }

    /// Normal form of a polynomial under the rules.
    Poly reduce(const Poly& p) const {
        Poly cur = p;
        for (int guard = 0; guard < 64; ++guard) {
            std::map<Sym, Poly> images;
            for (const Sym& s : cur.symbols()) {
                if (s.kind != SymKind::Jet) continue;
                auto it = rules_.find(s.name);
                if (it == rules_.end()) continue;
                if (s.order < it->second.base.order) continue;
                images[s] = it->second.image.derive(s.order - it->second.base.order);
            }
            if (images.empty()) return cur;
            cur = cur.subst(images);
        }
        throw std::logic_error("RuleSet: rewriting did not terminate");
    }

    Frac reduce(const Frac& f) const {
        if (empty()) return f;
        return Frac(reduce(f.num()), reduce(f.den()));
    }

private:
    std::map<std::string, Rule> rules_;
};

/// Orient a condition polynomial as a rewrite rule by eliminating its
/// highest jet. Succeeds only for the triangular shape c*J + rest with c a
/// nonzero rational and rest free of J and of higher jets of the same name.
inline std::optional<Rule> orient_rule(const Poly& cond) {
    if (cond.is_zero() || cond.is_constant()) return std::nullopt;
    // highest jet: maximal derivative order, ties by symbol order
    std::optional<Sym> top;
    for (const Sym& s : cond.symbols()) {
        if (s.kind != SymKind::Jet) continue;
        if (!top || s.order > top->order || (s.order == top->order && *top < s)) top = s;
    }
    if (!top) return std::nullopt;
    if (cond.degree_in(*top) != 1) return std::nullopt;
    auto parts = cond.collect(*top);
    Poly c = parts[1];
    if (!c.is_constant()) return std::nullopt;
    Poly rest = parts.count(0) ? parts[0] : Poly();
    Poly image = rest * Rat(-1);
    image *= Rat(1) / c.constant_value();
    // image must not feed back into jets of the same name at or above base order
    for (const Sym& s : image.symbols())
        if (s.name == top->name && s.order >= top->order) return std::nullopt;
    return Rule{*top, image};
}

}  // namespace pql
