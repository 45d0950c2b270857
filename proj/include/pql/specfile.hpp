#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pql/numeric/instance.hpp"
#include "pql/system.hpp"

namespace pql {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string& msg, int l, int c)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) +
                             ": " + msg),
          line(l),
          col(c) {}
};
struct UndeclaredSymbol : std::runtime_error {
    explicit UndeclaredSymbol(const std::string& n)
        : std::runtime_error("undeclared symbol: " + n) {}
};
struct NonIntegerFamilyParameter : std::runtime_error {
    NonIntegerFamilyParameter()
        : std::runtime_error("the family parameter n must be bound to a concrete integer") {}
};

/// Declared role of an identifier in a system spec.
struct SymbolDecl {
    enum Kind { Symbol, Const, PolyBinding, Integer } kind = Symbol;
    UPoly<GaussRat> poly;  // PolyBinding
    long long ivalue = 0;  // Integer
};

/// Parsed system-spec file: the system, declarations, optional instance
/// bindings and a family hint.
struct SystemSpec {
    System sys;  // symbolic (poly-declared names kept as jets)
    std::map<std::string, SymbolDecl> decls;
    Bindings instance;  // [instance] section values
    std::string family_hint;
    std::optional<int> family_n;

    bool has_instance() const { return !instance.empty() || all_coeffs_poly(); }

    bool all_coeffs_poly() const {
        for (int i = 0; i < 2; ++i)
            for (const Sym& s : sys.rhs[i].symbols()) {
                if (s.kind == SymKind::State || s.kind == SymKind::Time) continue;
                auto it = decls.find(s.name);
                if (it == decls.end() || it->second.kind != SymbolDecl::PolyBinding) return false;
            }
        return true;
    }

    /// System with explicit polynomial coefficients substituted (used by the
    /// symbolic commands).
    System resolved_system() const {
        std::map<std::string, Frac> vals;
        for (auto& [name, d] : decls)
            if (d.kind == SymbolDecl::PolyBinding) {
                Poly p;
                for (int k = 0; k <= d.poly.degree(); ++k) {
                    const GaussRat& c = d.poly.coeff(k);
                    p.add_term(Mono::var(tvar(), k), c.re);
                }
                vals[name] = Frac(p);
            }
        if (vals.empty()) return sys;
        System out = sys;
        std::map<Sym, Frac> images;
        for (int i = 0; i < 2; ++i)
            for (const Sym& s : sys.rhs[i].symbols())
                if (s.kind == SymKind::Jet && vals.count(s.name)) {
                    Frac img = vals[s.name];
                    for (int k = 0; k < s.order; ++k) img = img.derive();
                    images[s] = img;
                }
        for (int i = 0; i < 2; ++i) out.rhs[i] = subst_frac(out.rhs[i], images);
        return out;
    }

    /// Numeric instance: every coefficient symbol must be bound by a poly
    /// declaration or an [instance] entry.
    NumericInstance numeric_instance() const {
        Bindings b = instance;
        for (auto& [name, d] : decls)
            if (d.kind == SymbolDecl::PolyBinding) b[name] = d.poly;
        return NumericInstance(sys, std::move(b));
    }
};

namespace specdetail {

struct Token {
    enum Kind { Int, Ident, Op, End } kind = End;
    std::string text;
    BigInt value;
    int line = 1, col = 1;
};

class Lexer {
public:
    Lexer(std::string s, int line) : s_(std::move(s)), line_(line) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = static_cast<int>(pos_) + 1;
        if (pos_ >= s_.size()) return t;
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            t.kind = Token::Int;
            t.text = s_.substr(start, pos_ - start);
            t.value = BigInt(t.text);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            t.kind = Token::Ident;
            t.text = s_.substr(start, pos_ - start);
            while (pos_ < s_.size() && s_[pos_] == '\'') {
                t.text += '\'';
                ++pos_;
            }
            return t;
        }
        if (std::string("+-*/^()=,").find(c) != std::string::npos) {
            t.kind = Token::Op;
            t.text = std::string(1, c);
            ++pos_;
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, t.col);
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    std::string s_;
    size_t pos_ = 0;
    int line_;
};

/// Context deciding what identifiers mean inside an expression.
struct ExprContext {
    const std::map<std::string, SymbolDecl>* decls = nullptr;
    std::vector<std::string> state_vars;
    bool allow_imaginary = false;   // instance values only
    bool instance_value = false;    // identifiers restricted to t
    bool declare_on_use = false;    // standalone expressions (tests, --H)
};

/// Value in the small expression evaluator: polynomial with a separate
/// imaginary polynomial part (only used when imaginary literals are
/// allowed), plus constant-ness tracking for literal division.
struct ExprVal {
    Poly re, im;
    bool is_literal = false;  // pure rational literal
    Rat lit;
};

class ExprParser {
public:
    ExprParser(const std::string& text, int line, const ExprContext& ctx)
        : lex_(text, line), ctx_(ctx), line_(line) {
        cur_ = lex_.next();
    }

    ExprVal parse() {
        ExprVal v = sum();
        if (cur_.kind != Token::End)
            throw ParseError("trailing input '" + cur_.text + "'", line_, cur_.col);
        return v;
    }

private:
    ExprVal sum() {
        ExprVal acc = unary();
        while (is_op("+") || is_op("-")) {
            bool minus = cur_.text == "-";
            advance();
            ExprVal rhs = unary();
            if (minus) {
                acc.re -= rhs.re;
                acc.im -= rhs.im;
                if (acc.is_literal && rhs.is_literal)
                    acc.lit -= rhs.lit;
                else
                    acc.is_literal = false;
            } else {
                acc.re += rhs.re;
                acc.im += rhs.im;
                if (acc.is_literal && rhs.is_literal)
                    acc.lit += rhs.lit;
                else
                    acc.is_literal = false;
            }
        }
        return acc;
    }

    ExprVal unary() {
        if (is_op("-")) {
            advance();
            ExprVal v = unary();
            v.re = -v.re;
            v.im = -v.im;
            v.lit = -v.lit;
            return v;
        }
        if (is_op("+")) {
            advance();
            return unary();
        }
        return product();
    }

    ExprVal product() {
        ExprVal acc = power();
        while (is_op("*") || is_op("/")) {
            bool div = cur_.text == "/";
            int col = cur_.col;
            advance();
            ExprVal rhs = power();
            if (div) {
                if (!acc.is_literal || !rhs.is_literal)
                    throw ParseError("division is only allowed between integer literals", line_,
                                     col);
                if (rhs.lit.is_zero()) throw ParseError("division by zero", line_, col);
                acc.lit /= rhs.lit;
                acc.re = Poly(acc.lit);
                acc.im = Poly();
            } else {
                // (a + bi)(c + di)
                Poly re = acc.re * rhs.re - acc.im * rhs.im;
                Poly im = acc.re * rhs.im + acc.im * rhs.re;
                acc.re = re;
                acc.im = im;
                if (acc.is_literal && rhs.is_literal)
                    acc.lit *= rhs.lit;
                else
                    acc.is_literal = false;
            }
        }
        return acc;
    }

    ExprVal power() {
        ExprVal base = atom();
        if (is_op("^")) {
            int col = cur_.col;
            advance();
            if (cur_.kind != Token::Int) throw ParseError("exponent must be an integer", line_, col);
            long long e = cur_.value.convert_to<long long>();
            advance();
            if (e < 0) throw ParseError("negative exponents are not allowed", line_, col);
            ExprVal r;
            r.re = Poly(Rat(1));
            r.is_literal = base.is_literal;
            r.lit = Rat(1);
            for (long long i = 0; i < e; ++i) {
                Poly re = r.re * base.re - r.im * base.im;
                Poly im = r.re * base.im + r.im * base.re;
                r.re = re;
                r.im = im;
                r.lit *= base.lit;
            }
            return r;
        }
        return base;
    }

    ExprVal atom() {
        if (cur_.kind == Token::Int) {
            ExprVal v;
            v.re = Poly(Rat(cur_.value));
            v.is_literal = true;
            v.lit = Rat(cur_.value);
            advance();
            return v;
        }
        if (is_op("(")) {
            advance();
            ExprVal v = sum();
            if (!is_op(")")) throw ParseError("expected ')'", line_, cur_.col);
            advance();
            return v;
        }
        if (cur_.kind == Token::Ident) {
            std::string name = cur_.text;
            int col = cur_.col;
            advance();
            int order = 0;
            while (!name.empty() && name.back() == '\'') {
                ++order;
                name.pop_back();
            }
            ExprVal v;
            if (name == "i" && order == 0) {
                if (!ctx_.allow_imaginary)
                    throw ParseError("imaginary unit not allowed here", line_, col);
                v.im = Poly(Rat(1));
                return v;
            }
            if (name == "t") {
                if (order > 0) throw ParseError("t cannot carry primes", line_, col);
                v.re = Poly(tvar());
                return v;
            }
            if (ctx_.instance_value)
                throw ParseError("instance values may only use t and i", line_, col);
            if (std::find(ctx_.state_vars.begin(), ctx_.state_vars.end(), name) !=
                ctx_.state_vars.end()) {
                if (order > 0)
                    throw ParseError("state variables cannot carry primes", line_, col);
                v.re = Poly(state(name));
                return v;
            }
            if (ctx_.decls) {
                auto it = ctx_.decls->find(name);
                if (it == ctx_.decls->end()) {
                    if (!ctx_.declare_on_use) throw UndeclaredSymbol(name);
                    v.re = Poly(jet(name, order));
                    return v;
                }
                switch (it->second.kind) {
                    case SymbolDecl::Integer:
                        if (order > 0)
                            throw ParseError("integer parameters cannot carry primes", line_, col);
                        v.re = Poly(Rat(it->second.ivalue));
                        v.is_literal = true;
                        v.lit = Rat(it->second.ivalue);
                        return v;
                    case SymbolDecl::Const:
                        if (order > 0) {
                            v.re = Poly();  // derivative of a constant
                            return v;
                        }
                        v.re = Poly(cst(name));
                        return v;
                    default:
                        v.re = Poly(jet(name, order));
                        return v;
                }
            }
            if (!ctx_.declare_on_use) throw UndeclaredSymbol(name);
            v.re = Poly(jet(name, order));
            return v;
        }
        throw ParseError("expected a term", line_, cur_.col);
    }

    bool is_op(const char* o) const { return cur_.kind == Token::Op && cur_.text == o; }
    void advance() { cur_ = lex_.next(); }

    Lexer lex_;
    ExprContext ctx_;
    Token cur_;
    int line_;
};

inline UPoly<GaussRat> to_gauss_poly(const ExprVal& v, int line) {
    auto split = [&](const Poly& p, bool real, std::vector<GaussRat>& out) {
        for (auto& [m, c] : p.terms()) {
            int deg = 0;
            for (auto& [s, e] : m.factors) {
                if (s.kind != SymKind::Time)
                    throw ParseError("instance values must be polynomials in t", line, 1);
                deg = e;
            }
            if ((int)out.size() <= deg) out.resize(deg + 1);
            if (real)
                out[deg].re += c;
            else
                out[deg].im += c;
        }
    };
    std::vector<GaussRat> coeffs;
    split(v.re, true, coeffs);
    split(v.im, false, coeffs);
    return UPoly<GaussRat>(coeffs);
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace specdetail

/// Parse a differential-polynomial expression in isolation (used by tests
/// and the first-integral checker); identifiers become jet symbols, state
/// variables must be listed.
inline Poly parse_poly_expr(const std::string& text,
                            const std::vector<std::string>& state_vars = {},
                            const std::set<std::string>& constants = {}) {
    specdetail::ExprContext ctx;
    ctx.state_vars = state_vars;
    ctx.declare_on_use = true;
    std::map<std::string, SymbolDecl> decls;
    for (auto& c : constants) decls[c] = SymbolDecl{SymbolDecl::Const, {}, 0};
    ctx.decls = &decls;
    specdetail::ExprParser p(text, 1, ctx);
    auto v = p.parse();
    if (!v.im.is_zero()) throw ParseError("complex values not allowed here", 1, 1);
    return v.re;
}

/// Parse a full system-spec file.
inline SystemSpec parse_system_spec(const std::string& text) {
    using namespace specdetail;
    SystemSpec spec;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::vector<std::pair<int, std::string>> eq_lines[2];
    std::vector<std::string> vars;
    std::vector<std::tuple<int, std::string, std::string>> coeff_lines;   // line, name, rhs
    std::vector<std::tuple<int, std::string, std::string>> inst_lines;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        if (section == "system") {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("expected '='", lineno, 1);
            std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
            if (key == "vars") {
                std::istringstream vs(val);
                std::string v;
                while (vs >> v) vars.push_back(v);
                if (vars.size() != 2) throw ParseError("exactly two state variables required", lineno, 1);
            } else if (key.size() >= 2 && key[0] == 'd') {
                std::string var = key.substr(1);
                auto it = std::find(vars.begin(), vars.end(), var);
                if (it == vars.end())
                    throw ParseError("equation for undeclared variable '" + var + "'", lineno, 1);
                eq_lines[it - vars.begin()].push_back({lineno, val});
            } else {
                throw ParseError("unknown key '" + key + "' in [system]", lineno, 1);
            }
        } else if (section == "coefficients") {
            auto colon = line.find(':');
            if (colon == std::string::npos) throw ParseError("expected ':'", lineno, 1);
            coeff_lines.push_back({lineno, trim(line.substr(0, colon)), trim(line.substr(colon + 1))});
        } else if (section == "instance") {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("expected '='", lineno, 1);
            inst_lines.push_back({lineno, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
        } else if (section == "family") {
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("expected '='", lineno, 1);
            std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
            if (key == "family")
                spec.family_hint = val;
            else if (key == "n")
                spec.family_n = std::stoi(val);
            else
                throw ParseError("unknown key in [family]", lineno, 1);
        } else {
            throw ParseError("content outside a known section", lineno, 1);
        }
    }
    if (vars.size() != 2) throw ParseError("missing [system] vars", lineno, 1);
    for (int i = 0; i < 2; ++i)
        if (eq_lines[i].empty())
            throw ParseError("missing equation for " + vars[i], lineno, 1);

    // declarations
    for (auto& [ln, name, rhs] : coeff_lines) {
        SymbolDecl d;
        if (rhs == "symbol")
            d.kind = SymbolDecl::Symbol;
        else if (rhs == "const")
            d.kind = SymbolDecl::Const;
        else if (rhs.rfind("poly", 0) == 0) {
            d.kind = SymbolDecl::PolyBinding;
            ExprContext ctx;
            ctx.instance_value = true;
            ExprParser p(trim(rhs.substr(4)), ln, ctx);
            auto v = p.parse();
            if (!v.im.is_zero())
                throw ParseError("poly declarations must have rational coefficients", ln, 1);
            d.poly = to_gauss_poly(v, ln);
        } else if (rhs.rfind("int", 0) == 0) {
            d.kind = SymbolDecl::Integer;
            d.ivalue = std::stoll(trim(rhs.substr(3)));
        } else {
            throw ParseError("unknown declaration '" + rhs + "'", ln, 1);
        }
        spec.decls[name] = d;
    }
    if (spec.decls.count("n") && spec.decls["n"].kind != SymbolDecl::Integer)
        throw NonIntegerFamilyParameter();

    // equations
    spec.sys.vars = {vars[0], vars[1]};
    ExprContext ctx;
    ctx.decls = &spec.decls;
    ctx.state_vars = vars;
    for (int i = 0; i < 2; ++i) {
        Poly acc;
        for (auto& [ln, text2] : eq_lines[i]) {
            ExprParser p(text2, ln, ctx);
            auto v = p.parse();
            if (!v.im.is_zero()) throw ParseError("complex values not allowed here", ln, 1);
            acc += v.re;
        }
        spec.sys.rhs[i] = Frac(acc);
    }

    // instance values
    for (auto& [ln, name, rhs] : inst_lines) {
        auto it = spec.decls.find(name);
        if (it == spec.decls.end()) throw UndeclaredSymbol(name);
        if (it->second.kind == SymbolDecl::PolyBinding)
            throw ParseError("'" + name + "' is already bound by a poly declaration", ln, 1);
        ExprContext vctx;
        vctx.instance_value = true;
        vctx.allow_imaginary = true;
        ExprParser p(rhs, ln, vctx);
        spec.instance[name] = to_gauss_poly(p.parse(), ln);
    }
    return spec;
}

/// Print a parsed spec back in file form (round-trip stable).
inline std::string print_system_spec(const SystemSpec& spec) {
    std::string out = "[system]\nvars = " + spec.sys.vars[0] + " " + spec.sys.vars[1] + "\n";
    for (int i = 0; i < 2; ++i) {
        if (!spec.sys.rhs[i].is_polynomial())
            throw std::domain_error("print_system_spec: rhs not polynomial");
        out += "d" + spec.sys.vars[i] + " = " + spec.sys.rhs[i].num().str() + "\n";
    }
    if (!spec.decls.empty()) {
        out += "\n[coefficients]\n";
        for (auto& [name, d] : spec.decls) {
            out += name + ": ";
            switch (d.kind) {
                case SymbolDecl::Symbol: out += "symbol"; break;
                case SymbolDecl::Const: out += "const"; break;
                case SymbolDecl::Integer: out += "int " + std::to_string(d.ivalue); break;
                case SymbolDecl::PolyBinding: {
                    out += "poly ";
                    std::string s;
                    for (int k = d.poly.degree(); k >= 0; --k) {
                        const GaussRat& c = d.poly.coeff(k);
                        if (c.is_zero()) continue;
                        if (!s.empty()) s += "+";
                        s += "(" + c.re.str() + ")";
                        if (k >= 1) s += "*t";
                        if (k >= 2) s += "^" + std::to_string(k);
                    }
                    out += s.empty() ? "0" : s;
                    break;
                }
            }
            out += "\n";
        }
    }
    if (!spec.instance.empty()) {
        out += "\n[instance]\n";
        for (auto& [name, p] : spec.instance) {
            std::string s;
            for (int k = p.degree(); k >= 0; --k) {
                const GaussRat& c = p.coeff(k);
                if (c.is_zero()) continue;
                if (!s.empty()) s += "+";
                s += "(" + c.re.str() + "+" + c.im.str() + "*i)";
                if (k >= 1) s += "*t";
                if (k >= 2) s += "^" + std::to_string(k);
            }
            out += name + " = " + (s.empty() ? "0" : s) + "\n";
        }
    }
    if (!spec.family_hint.empty()) {
        out += "\n[family]\nfamily = " + spec.family_hint + "\n";
        if (spec.family_n) out += "n = " + std::to_string(*spec.family_n) + "\n";
    }
    return out;
}

}  // namespace pql
