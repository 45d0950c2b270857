#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pql/ratfun.hpp"

namespace pql {

/// Pair of quadratic binary forms (P, Q): coefficients of y^2, yz, z^2.
struct QuadPair {
    std::array<Rat, 3> P{Rat(0), Rat(0), Rat(0)};
    std::array<Rat, 3> Q{Rat(0), Rat(0), Rat(0)};

    bool is_zero() const {
        for (auto& c : P)
            if (!c.is_zero()) return false;
        for (auto& c : Q)
            if (!c.is_zero()) return false;
        return true;
    }
    friend bool operator==(const QuadPair& a, const QuadPair& b) {
        return a.P == b.P && a.Q == b.Q;
    }
};

/// Binary cubic c0*y^3 + c1*y^2 z + c2*y z^2 + c3*z^3.
using BinaryCubic = std::array<Rat, 4>;

/// y*Q(y,z) - z*P(y,z): vanishes exactly on the radial directions;
/// identically zero iff every line through the origin is invariant.
inline BinaryCubic tangent_cubic(const QuadPair& q) {
    return {q.Q[0], q.Q[1] - q.P[0], q.Q[2] - q.P[1], -q.P[2]};
}

inline bool is_dicritical(const QuadPair& q) {
    for (auto& c : tangent_cubic(q))
        if (!c.is_zero()) return false;
    return true;
}

enum class Chart { S, Sigma };  // s = y/z, sigma = z/y

struct DicriticalInput : std::domain_error {
    DicriticalInput() : std::domain_error("dicritical pair has no ratio equation") {}
};

/// The equation -s''/(s')^2 = F(s) satisfied by the component ratio, plus
/// the unreduced pole data A (denominator before cancellation) and B.
struct RatioEq {
    RatFun1 F;
    UPolyQ A, B;  // F = (-A' - B)/A before reduction
    /// roots of A with multiplicity > 1 (before cancellation)
    std::vector<std::pair<Rat, int>> multiple_roots() const {
        std::vector<std::pair<Rat, int>> r;
        for (auto& [x, m] : rational_roots(A))
            if (m > 1) r.push_back({x, m});
        return r;
    }
};

inline RatioEq ratio_equation(const QuadPair& q, Chart chart) {
    if (is_dicritical(q)) throw DicriticalInput();
    UPolyQ A, B;
    if (chart == Chart::S) {
        // A(s) = P(s,1) - s Q(s,1), B(s) = Q(s,1)
        UPolyQ Ps(std::vector<Rat>{q.P[2], q.P[1], q.P[0]});
        UPolyQ Qs(std::vector<Rat>{q.Q[2], q.Q[1], q.Q[0]});
        A = Ps - UPolyQ::x() * Qs;
        B = Qs;
    } else {
        // A(sigma) = Q(1,sigma) - sigma P(1,sigma), B(sigma) = P(1,sigma)
        UPolyQ Pw(std::vector<Rat>{q.P[0], q.P[1], q.P[2]});
        UPolyQ Qw(std::vector<Rat>{q.Q[0], q.Q[1], q.Q[2]});
        A = Qw - UPolyQ::x() * Pw;
        B = Pw;
    }
    std::string var = chart == Chart::S ? "s" : "sigma";
    RatioEq r;
    r.A = A;
    r.B = B;
    if (A.is_zero()) throw DicriticalInput();
    r.F = RatFun1(var, -A.derivative() - B, A);
    return r;
}

/// Index of a radial orbit / pole of the ratio equation.
struct OrbitIndex {
    enum Tag { Finite, Infinite, Undefined, NonInteger } tag = Undefined;
    long long k = 0;  // valid when Finite

    static OrbitIndex finite(long long v) { return {Finite, v}; }
    static OrbitIndex inf() { return {Infinite, 0}; }
    static OrbitIndex undefined() { return {Undefined, 0}; }
    static OrbitIndex non_integer() { return {NonInteger, 0}; }

    friend bool operator==(const OrbitIndex& a, const OrbitIndex& b) {
        return a.tag == b.tag && (a.tag != Finite || a.k == b.k);
    }
    friend bool operator<(const OrbitIndex& a, const OrbitIndex& b) {
        if (a.tag != b.tag) return a.tag < b.tag;
        return a.k < b.k;
    }
    std::string str() const {
        switch (tag) {
            case Finite: return std::to_string(k);
            case Infinite: return "inf";
            case Undefined: return "---";
            case NonInteger: return "non-integer";
        }
        return "?";
    }
};

/// Projective direction (y0 : z0); coordinates rational or quadratic-irrational.
struct Direction {
    QuadExt y0, z0;
    std::string str() const { return "(" + y0.str() + ":" + z0.str() + ")"; }
};

struct RadialOrbit {
    std::optional<Direction> direction;  // absent for conjugate cubic triples
    int multiplicity = 1;
    OrbitIndex index = OrbitIndex::undefined();
};

struct IndexProfile {
    bool dicritical = false;
    std::vector<RadialOrbit> orbits;

    /// sorted multiset of the defined (simple-orbit) indices
    std::vector<OrbitIndex> summary() const {
        std::vector<OrbitIndex> v;
        for (auto& o : orbits)
            if (o.multiplicity == 1) v.push_back(o.index);
        std::sort(v.begin(), v.end());
        return v;
    }
};

namespace detail {

/// index k = -A'(s0)/B(s0); infinity when B(s0) = 0.
inline OrbitIndex index_from(const Rat& Aprime, const Rat& Bval) {
    if (Bval.is_zero()) return OrbitIndex::inf();
    Rat k = -Aprime / Bval;
    if (!k.is_integer()) return OrbitIndex::non_integer();
    return OrbitIndex::finite(k.to_int());
}

inline OrbitIndex index_from(const QuadExt& Aprime, const QuadExt& Bval) {
    if (Bval.is_zero()) return OrbitIndex::inf();
    QuadExt k = -Aprime / Bval;
    if (!k.is_rational() || !k.a.is_integer()) return OrbitIndex::non_integer();
    return OrbitIndex::finite(k.a.to_int());
}

}  // namespace detail

/// Radial orbits with multiplicities and Briot-Bouquet indices.
inline IndexProfile orbit_indices(const QuadPair& q) {
    IndexProfile prof;
    if (is_dicritical(q)) {
        prof.dicritical = true;
        return prof;
    }
    BinaryCubic C = tangent_cubic(q);
    // affine part c(s) = C(s, 1); direction (1:0) has multiplicity 3 - deg c
    UPolyQ c(std::vector<Rat>{C[3], C[2], C[1], C[0]});
    int mult_inf = 3 - std::max(c.degree(), 0);
    if (c.is_zero()) throw std::logic_error("orbit_indices: degenerate cubic");

    UPolyQ A(std::vector<Rat>{q.P[2], q.P[1], q.P[0]});
    A = A - UPolyQ::x() * UPolyQ(std::vector<Rat>{q.Q[2], q.Q[1], q.Q[0]});  // = -c
    UPolyQ Aprime = A.derivative();
    UPolyQ B(std::vector<Rat>{q.Q[2], q.Q[1], q.Q[0]});

    UPolyQ rem = c;
    for (auto& [s0, m] : rational_roots(c)) {
        RadialOrbit o;
        o.direction = Direction{QuadExt(s0), QuadExt(Rat(1))};
        o.multiplicity = m;
        if (m == 1) o.index = detail::index_from(Aprime.eval(s0), B.eval(s0));
        prof.orbits.push_back(o);
        for (int i = 0; i < m; ++i) rem = rem.divrem(UPolyQ(std::vector<Rat>{-s0, Rat(1)})).first;
    }
    if (rem.degree() == 2) {
        Rat p = rem.coeff(1) / rem.coeff(2), q0 = rem.coeff(0) / rem.coeff(2);
        Rat disc = p * p - Rat(4) * q0;
        for (int sgn : {1, -1}) {
            QuadExt root{-p / Rat(2), Rat(sgn, 2), disc};
            RadialOrbit o;
            o.direction = Direction{root, QuadExt(Rat(1))};
            o.multiplicity = 1;
            o.index = detail::index_from(Aprime.eval(root), B.eval(root));
            prof.orbits.push_back(o);
        }
    } else if (rem.degree() == 3) {
        // Irreducible cubic: indices via a resultant, without splitting the
        // field. R(k) = Res_s(rem, k B + A') vanishes exactly at
        // k = -A'(s_i)/B(s_i); conjugate roots are integers only if all
        // equal, i.e. R(k) = const * (k - k0)^3.
        Sym s = jet("s"), kk = jet("k");
        Poly cs = from_upoly(rem, s);
        Poly X = Poly(kk) * from_upoly(B, s) + from_upoly(Aprime, s);
        Poly R = resultant(cs, X, s);
        UPolyQ Rk = to_upoly(R, kk);
        auto roots = rational_roots(Rk);
        OrbitIndex idx = OrbitIndex::non_integer();
        if (roots.size() == 1 && roots[0].second == 3 && roots[0].first.is_integer() &&
            !roots[0].first.is_zero())
            idx = OrbitIndex::finite(roots[0].first.to_int());
        for (int i = 0; i < 3; ++i) {
            RadialOrbit o;
            o.multiplicity = 1;
            o.index = idx;
            prof.orbits.push_back(o);
        }
    }
    if (mult_inf > 0) {
        RadialOrbit o;
        o.direction = Direction{QuadExt(Rat(1)), QuadExt(Rat(0))};
        o.multiplicity = mult_inf;
        if (mult_inf == 1) {
            // sigma chart
            UPolyQ At(std::vector<Rat>{q.Q[0], q.Q[1], q.Q[2]});
            At = At - UPolyQ::x() * UPolyQ(std::vector<Rat>{q.P[0], q.P[1], q.P[2]});
            UPolyQ Bt(std::vector<Rat>{q.P[0], q.P[1], q.P[2]});
            o.index = detail::index_from(At.derivative().eval(Rat(0)), Bt.eval(Rat(0)));
        }
        prof.orbits.push_back(o);
    }
    return prof;
}

/// Briot-Bouquet admissibility of a ratio equation: every pole of the
/// reduced F (in both charts) is simple with residue -1 or 1/k - 1, k a
/// nonzero integer.
struct BBVerdict {
    bool univalent = true;
    std::string reason;  // first failure, with location
};

namespace detail {

inline bool residue_admissible(const Rat& r) {
    if (r == Rat(-1)) return true;
    Rat kinv = r + Rat(1);  // 1/k
    if (kinv.is_zero()) return false;
    Rat k = Rat(1) / kinv;
    return k.is_integer() && !k.is_zero();
}

inline void check_one(const RatFun1& F, const std::string& where, BBVerdict& v) {
    if (!v.univalent) return;
    if (F.den.degree() <= 0) return;  // no finite poles
    UPolyQ g = upoly_gcd(F.den, F.den.derivative());
    if (g.degree() > 0) {
        v.univalent = false;
        v.reason = "NonSimplePole in chart " + where;
        return;
    }
    for (auto& p : poles(F)) {
        if (p.rational) {
            Rat r = F.residue_at(*p.rational);
            if (!residue_admissible(r)) {
                v.univalent = false;
                v.reason = "residue " + r.str() + " at " + F.var + "=" + p.rational->str() +
                           " (chart " + where + ") not of the form 1/k-1";
                return;
            }
        } else if (p.quadratic) {
            QuadExt r = F.residue_at(*p.quadratic);
            if (!r.is_rational() || !residue_admissible(r.a)) {
                v.univalent = false;
                v.reason = "irrational or non-quantized residue at quadratic pole (chart " +
                           where + ")";
                return;
            }
        } else if (p.irreducible) {
            // roots of R(r) = Res_s(D, r D' - N) are the residues
            Sym s = jet("s"), rr = jet("r");
            Poly D = from_upoly(*p.irreducible, s);
            Poly X = Poly(rr) * from_upoly(F.den.derivative(), s) - from_upoly(F.num, s);
            Poly R = resultant(D, X, s);
            UPolyQ Rr = to_upoly(R, rr);
            auto roots = rational_roots(Rr);
            int total = 0;
            for (auto& [r0, m] : roots) {
                if (!residue_admissible(r0)) {
                    v.univalent = false;
                    v.reason = "residue " + r0.str() + " at irreducible-cubic pole (chart " +
                               where + ") not of the form 1/k-1";
                    return;
                }
                total += m;
            }
            if (total < p.irreducible->degree()) {
                v.univalent = false;
                v.reason = "irrational residues at irreducible-cubic pole (chart " + where + ")";
                return;
            }
        }
    }
}

}  // namespace detail

inline BBVerdict briot_bouquet_check(const RatFun1& F, const RatFun1& dualF) {
    BBVerdict v;
    detail::check_one(F, F.var, v);
    detail::check_one(dualF, dualF.var, v);
    return v;
}

inline BBVerdict briot_bouquet_check(const QuadPair& q) {
    RatioEq s = ratio_equation(q, Chart::S);
    RatioEq sig = ratio_equation(q, Chart::Sigma);
    return briot_bouquet_check(s.F, sig.F);
}

/// Briot-Bouquet equation of the weight-(1,2) quasihomogeneous pair
/// y' = -y^2 + z, z' = (n-1) y z, in the invariant v = z/y^2:
/// F(v) = -(A'(v) + B(v))/A(v) for A(v) = Q(1,v) - 2v P(1,v), B(v) = P(1,v).
inline RatFun1 weighted_ratio_equation(int n) {
    if (n == -1) throw std::domain_error("weighted_ratio_equation: pole at v=0 not simple for n=-1");
    // P(1,v) = v - 1, Q(1,v) = (n-1) v
    UPolyQ Pv(std::vector<Rat>{Rat(-1), Rat(1)});
    UPolyQ Qv(std::vector<Rat>{Rat(0), Rat(n - 1)});
    UPolyQ A = Qv - (UPolyQ::x() * Rat(2)) * Pv;
    UPolyQ B = Pv;
    return RatFun1("v", -A.derivative() - B, A);
}

/// Admissibility of the weight-(1,2) family analysis at parameter n: the
/// invariant's equation must keep simple poles at v = 0, v = (n+1)/2 and
/// infinity (no cancellation, which would signal a degenerate normalization
/// handled by a separate chart), all with integer indices.
inline bool weighted_admissible(int n) {
    if (n == -1 || n == 0 || n == 1) return false;
    RatFun1 f = weighted_ratio_equation(n);
    Rat v1(n + 1, 2);
    if (f.den.eval(Rat(0)).is_zero() == false) return false;
    if (f.den.eval(v1).is_zero() == false) return false;
    RatFun1 g = f.reciprocal_transform();
    return briot_bouquet_check(f, g).univalent;
}

/// One entry of the index-triple census.
struct IndexTriple {
    bool parametric = false;             // the {1, m, -m} family
    std::array<OrbitIndex, 3> indices;   // filled for concrete triples
    std::string str() const {
        if (parametric) return "{1, m, -m}";
        return "{" + indices[0].str() + ", " + indices[1].str() + ", " + indices[2].str() + "}";
    }
};

/// All solutions of 1/n1 + 1/n2 + 1/n3 = 1 with n_i nonzero integers or
/// infinity, up to permutation. Case analysis:
///  - some n_i = 1: the rest satisfy 1/b + 1/c = 0, giving the parametric
///    family {1, m, -m} (finite m) and {1, inf, inf};
///  - |n_i| >= 2 for all i: -1 is excluded outright, a negative entry would
///    force 1/b + 1/c > 1 which is impossible at |n| >= 2, so all entries
///    are positive or infinite and the smallest is 2 or 3; those cases are
///    enumerated directly.
inline std::vector<IndexTriple> solve_index_diophantine() {
    std::vector<IndexTriple> out;
    out.push_back({true, {}});
    out.push_back({false, {OrbitIndex::finite(1), OrbitIndex::inf(), OrbitIndex::inf()}});
    // n1 = 2: 1/n2 + 1/n3 = 1/2 with 2 <= n2 <= n3 (n3 possibly infinite)
    for (long long n2 = 2; n2 <= 4; ++n2) {
        if (n2 == 2) {
            out.push_back({false, {OrbitIndex::finite(2), OrbitIndex::finite(2), OrbitIndex::inf()}});
            continue;
        }
        Rat rest = Rat(1, 2) - Rat(1, n2);
        Rat n3 = Rat(1) / rest;
        if (n3.is_integer() && n3 >= Rat(n2))
            out.push_back({false,
                           {OrbitIndex::finite(2), OrbitIndex::finite(n2),
                            OrbitIndex::finite(n3.to_int())}});
    }
    // n1 = 3 forces n2 = n3 = 3
    out.push_back({false, {OrbitIndex::finite(3), OrbitIndex::finite(3), OrbitIndex::finite(3)}});
    return out;
}

}  // namespace pql
