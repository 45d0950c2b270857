#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pql/quadpair.hpp"

namespace pql {

/// Linear-equivalence class label of a quadratic homogeneous pair.
struct BureauType {
    enum Label {
        I, II, III, IV, V, VI, VII, VIII, IX, XI, XII, XIII, XIV,
        NotUnivalent, Unknown
    } label = Unknown;
    std::optional<long long> n;  // present iff label is VIII or IX

    static const char* label_name(Label l) {
        switch (l) {
            case I: return "I";
            case II: return "II";
            case III: return "III";
            case IV: return "IV";
            case V: return "V";
            case VI: return "VI";
            case VII: return "VII";
            case VIII: return "VIII";
            case IX: return "IX";
            case XI: return "XI";
            case XII: return "XII";
            case XIII: return "XIII";
            case XIV: return "XIV";
            case NotUnivalent: return "NotUnivalent";
            case Unknown: return "Unknown";
        }
        return "?";
    }
    std::string str() const {
        std::string s = label_name(label);
        if (n) s += "(" + std::to_string(*n) + ")";
        return s;
    }
    friend bool operator==(const BureauType& a, const BureauType& b) {
        return a.label == b.label && a.n == b.n;
    }
};

/// Representative quadratic pairs of the univalent classes, Bureau's
/// normalization. For the shared families: III = (n=-1), IV = (n=1),
/// IX = other n; II = (n=0) of the VIII family.
inline QuadPair table2_representative(BureauType::Label label, long long n = 0) {
    auto pair = [](Rat p0, Rat p1, Rat p2, Rat q0, Rat q1, Rat q2) {
        QuadPair q;
        q.P = {p0, p1, p2};
        q.Q = {q0, q1, q2};
        return q;
    };
    switch (label) {
        case BureauType::I:
            return pair(-1, 0, 0, 0, -1, 0);  // y' = -y^2, z' = -yz
        case BureauType::V:
            return pair(0, 0, 0, 6, 0, 0);  // y' = 0, z' = 6y^2
        case BureauType::III:
            n = -1;
            [[fallthrough]];
        case BureauType::IX:
            return pair(-1, 0, 0, 0, Rat(n - 1), 0);  // y' = -y^2, z' = (n-1)yz
        case BureauType::IV:
            return pair(-1, 0, 0, 0, 0, 0);  // n = 1
        case BureauType::VII:
            return pair(0, 0, 0, 0, 1, 0);  // y' = 0, z' = yz
        case BureauType::II:
            n = 0;
            [[fallthrough]];
        case BureauType::VIII:
            // y' = y[y-(n+2)z], z' = -z(ny+z)
            return pair(1, Rat(-(n + 2)), 0, 0, Rat(-n), -1);
        case BureauType::VI:
            return pair(0, 0, 0, 0, 1, 1);  // y' = 0, z' = z(y+z)
        case BureauType::XI:
            return pair(1, -1, 0, 0, -1, 1);  // y' = y(y-z), z' = z(z-y)
        case BureauType::XII:
            return pair(1, 2, 0, 0, -2, -1);  // y' = y(2z+y), z' = -z(2y+z)
        case BureauType::XIII:
            return pair(Rat(-1, 2), 1, 0, 0, Rat(3, 2), -1);
        case BureauType::XIV:
            return pair(-1, 2, 0, 0, 1, -1);  // y' = y(2z-y), z' = z(y-z)
        default:
            throw std::domain_error("table2_representative: no representative");
    }
}

/// 2x2 matrix over a quadratic extension; the normalizing map.
struct QMat {
    std::array<QuadExt, 4> m;  // row-major [a b; c d]
    QuadExt det() const { return m[0] * m[3] - m[1] * m[2]; }
    QMat inverse() const {
        QuadExt d = det();
        return {{m[3] / d, -m[1] / d, -m[2] / d, m[0] / d}};
    }
    static QMat identity() {
        return {{QuadExt(Rat(1)), QuadExt(Rat(0)), QuadExt(Rat(0)), QuadExt(Rat(1))}};
    }
    friend QMat operator*(const QMat& A, const QMat& B) {
        return {{A.m[0] * B.m[0] + A.m[1] * B.m[2], A.m[0] * B.m[1] + A.m[1] * B.m[3],
                 A.m[2] * B.m[0] + A.m[3] * B.m[2], A.m[2] * B.m[1] + A.m[3] * B.m[3]}};
    }
    friend QMat operator*(const QuadExt& s, const QMat& B) {
        return {{s * B.m[0], s * B.m[1], s * B.m[2], s * B.m[3]}};
    }
};

/// Quadratic pair with QuadExt coefficients (intermediate transport values).
struct QuadPairX {
    std::array<QuadExt, 3> P, Q;
    std::optional<QuadPair> rational() const {
        QuadPair r;
        for (int i = 0; i < 3; ++i) {
            if (!P[i].is_rational() || !Q[i].is_rational()) return std::nullopt;
            r.P[i] = P[i].a;
            r.Q[i] = Q[i].a;
        }
        return r;
    }
};

/// Transport of a quadratic pair by an invertible linear map: the field
/// solved by xi = L zeta, i.e. G(xi) = L F(L^{-1} xi).
inline QuadPairX transport(const QuadPair& q, const QMat& L) {
    QMat Minv = L.inverse();
    auto& w = Minv.m;  // L^{-1} = [w0 w1; w2 w3]
    // evaluate P, Q at (y, z) = (w0 Y + w1 Z, w2 Y + w3 Z)
    auto form_at = [&](const std::array<Rat, 3>& f) {
        // f0 y^2 + f1 yz + f2 z^2 in (Y, Z)
        std::array<QuadExt, 3> r;
        QuadExt f0{f[0]}, f1{f[1]}, f2{f[2]};
        r[0] = f0 * w[0] * w[0] + f1 * w[0] * w[2] + f2 * w[2] * w[2];
        r[1] = QuadExt(Rat(2)) * f0 * w[0] * w[1] + f1 * (w[0] * w[3] + w[1] * w[2]) +
               QuadExt(Rat(2)) * f2 * w[2] * w[3];
        r[2] = f0 * w[1] * w[1] + f1 * w[1] * w[3] + f2 * w[3] * w[3];
        return r;
    };
    auto Pn = form_at(q.P), Qn = form_at(q.Q);
    QuadPairX out;
    for (int i = 0; i < 3; ++i) {
        out.P[i] = L.m[0] * Pn[i] + L.m[1] * Qn[i];
        out.Q[i] = L.m[2] * Pn[i] + L.m[3] * Qn[i];
    }
    return out;
}

struct MatchResult {
    BureauType type;
    QMat map = QMat::identity();
    std::vector<std::string> warnings;
    std::string failure;  // briot-bouquet failure detail for NotUnivalent
};

namespace detail {

/// directions of the representative with their indices, as QuadExt points
inline std::vector<std::pair<Direction, OrbitIndex>> rep_directions(BureauType::Label l,
                                                                    long long n) {
    QuadPair rep = table2_representative(l, n);
    IndexProfile prof = orbit_indices(rep);
    std::vector<std::pair<Direction, OrbitIndex>> out;
    for (auto& o : prof.orbits) out.push_back({*o.direction, o.index});
    return out;
}

inline bool same_multiset(std::vector<OrbitIndex> a, std::vector<OrbitIndex> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

}  // namespace detail

/// Classify a quadratic homogeneous pair against the representatives:
/// returns the label (with n where applicable) and an invertible map L with
/// transport(q, L) equal to the representative exactly.
inline MatchResult match_table2(const QuadPair& q) {
    MatchResult res;
    if (q.is_zero()) {
        res.type.label = BureauType::Unknown;
        res.warnings.push_back("zero quadratic part");
        return res;
    }

    // dicritical: P = y*l, Q = z*l for a common linear form l != 0
    if (is_dicritical(q)) {
        // P = y(a y + b z) => P = (a, b, 0); Q = z(a y + b z) => (0, a, b)
        Rat a = q.P[0], b = q.P[1];
        if (!q.P[2].is_zero() || q.Q[0] != Rat(0) || q.Q[1] != a || q.Q[2] != b) {
            res.type.label = BureauType::Unknown;
            res.warnings.push_back("dicritical pair not of radial form");
            return res;
        }
        // choose L^{-1} = M with l(M e1) = -1, l(M e2) = 0
        QMat Minv;
        if (!a.is_zero())
            Minv = {{QuadExt(Rat(-1) / a), QuadExt(-b / a), QuadExt(Rat(0)), QuadExt(Rat(1))}};
        else
            Minv = {{QuadExt(Rat(0)), QuadExt(Rat(1)), QuadExt(Rat(-1) / b), QuadExt(Rat(0))}};
        res.type.label = BureauType::I;
        res.map = Minv.inverse();
        return res;
    }

    BBVerdict bb = briot_bouquet_check(q);
    if (!bb.univalent) {
        res.type.label = BureauType::NotUnivalent;
        res.failure = bb.reason;
        return res;
    }

    IndexProfile prof = orbit_indices(q);

    // multiplicity census
    int nmult3 = 0, nmult2 = 0, nsimple = 0;
    for (auto& o : prof.orbits) {
        if (o.multiplicity == 3) ++nmult3;
        if (o.multiplicity == 2) ++nmult2;
        if (o.multiplicity == 1) ++nsimple;
    }

    auto direction_matrix = [](const Direction& d1, const Direction& d2) {
        return QMat{{d1.y0, d2.y0, d1.z0, d2.z0}};
    };

    if (nmult3 == 1) {
        // triple orbit: move it to (0:1); univalence already forces P = 0
        const Direction& d = *prof.orbits[0].direction;
        QMat L0;
        if (!d.z0.is_zero())
            L0 = QMat{{d.z0, -d.y0, QuadExt(Rat(0)), QuadExt(Rat(1))}};
        else
            L0 = QMat{{QuadExt(Rat(0)), QuadExt(Rat(1)), QuadExt(Rat(1)), QuadExt(Rat(0))}};
        QuadPairX t = transport(q, L0);
        for (auto& c : t.P)
            if (!c.is_zero()) {
                res.type.label = BureauType::Unknown;
                res.warnings.push_back("triple-orbit pair not reducible to the V form");
                return res;
            }
        QuadExt c = t.Q[0];  // z' = c Y^2
        // under L = diag(1, delta) the coefficient becomes delta * c
        QMat S{{QuadExt(Rat(1)), QuadExt(Rat(0)), QuadExt(Rat(0)), QuadExt(Rat(6)) / c}};
        res.type.label = BureauType::V;
        res.map = S * L0;
        return res;
    }

    if (nmult2 == 1 && nsimple == 1) {
        // double + simple: double to (0:1), simple to (1:0)
        const RadialOrbit *dbl = nullptr, *smp = nullptr;
        for (auto& o : prof.orbits) (o.multiplicity == 2 ? dbl : smp) = &o;
        QMat M = direction_matrix(*smp->direction, *dbl->direction);
        QMat L0 = M.inverse();
        QuadPairX t = transport(q, L0);
        // shape: P = p0 Y^2 + p1 YZ, Q = q1 YZ + p1 Z^2, with p1 = 0 by
        // univalence
        QuadExt p0 = t.P[0], q1 = t.Q[1];
        if (!t.P[1].is_zero() || !t.P[2].is_zero() || !t.Q[0].is_zero() || !t.Q[2].is_zero()) {
            res.type.label = BureauType::Unknown;
            res.warnings.push_back("unexpected shape after direction normalization");
            return res;
        }
        if (p0.is_zero()) {
            // VII: under L = diag(alpha, 1) the yz-coefficient becomes
            // q1/alpha, so alpha = q1
            QMat S{{q1, QuadExt(Rat(0)), QuadExt(Rat(0)), QuadExt(Rat(1))}};
            res.type.label = BureauType::VII;
            res.map = S * L0;
            return res;
        }
        // p0/alpha = -1 fixes alpha = -p0; then q1/alpha = n - 1
        QuadExt alpha = -p0;
        QuadExt q1n = q1 / alpha;
        if (!q1n.is_rational() || !q1n.a.is_integer()) {
            res.type.label = BureauType::NotUnivalent;
            res.failure = "simple-orbit index not an integer";
            return res;
        }
        long long n = (q1n.a + Rat(1)).to_int();
        QMat S{{alpha, QuadExt(Rat(0)), QuadExt(Rat(0)), QuadExt(Rat(1))}};
        res.map = S * L0;
        if (n == -1)
            res.type.label = BureauType::III;
        else if (n == 1)
            res.type.label = BureauType::IV;
        else {
            res.type.label = BureauType::IX;
            res.type.n = n;
        }
        return res;
    }

    if (nsimple == 3) {
        auto idx = prof.summary();
        // determine (label, n) from the index multiset
        BureauType target;
        if (detail::same_multiset(idx, {OrbitIndex::finite(1), OrbitIndex::inf(), OrbitIndex::inf()}))
            target.label = BureauType::VI;
        else if (detail::same_multiset(idx, {OrbitIndex::finite(2), OrbitIndex::finite(2), OrbitIndex::inf()}))
            target.label = BureauType::XI;
        else if (detail::same_multiset(idx, {OrbitIndex::finite(3), OrbitIndex::finite(3), OrbitIndex::finite(3)}))
            target.label = BureauType::XII;
        else if (detail::same_multiset(idx, {OrbitIndex::finite(2), OrbitIndex::finite(4), OrbitIndex::finite(4)}))
            target.label = BureauType::XIII;
        else if (detail::same_multiset(idx, {OrbitIndex::finite(2), OrbitIndex::finite(3), OrbitIndex::finite(6)}))
            target.label = BureauType::XIV;
        else {
            // {1, m, -m}
            bool ok = idx.size() == 3;
            long long m = 0;
            if (ok) {
                std::vector<long long> v;
                for (auto& i : idx) {
                    if (i.tag != OrbitIndex::Finite) ok = false;
                    else v.push_back(i.k);
                }
                if (ok) {
                    std::sort(v.begin(), v.end());
                    // v = {-m, 1, m}
                    ok = v.size() == 3 && v[1] == 1 && v[2] == -v[0] && v[2] >= 1;
                    m = ok ? v[2] : 0;
                }
            }
            if (!ok) {
                res.type.label = BureauType::Unknown;
                res.warnings.push_back("index multiset outside the census");
                return res;
            }
            if (m == 1)
                target.label = BureauType::II;
            else {
                target.label = BureauType::VIII;
                target.n = m - 1;
            }
        }

        // directions may live in a cubic field: then only the map is out of
        // reach (indices already settled the class up to that field)
        for (auto& o : prof.orbits)
            if (!o.direction) {
                res.type = target;
                res.warnings.push_back(
                    "directions require a cubic extension; normalizing map not computed");
                return res;
            }

        long long narg = target.n ? *target.n : (target.label == BureauType::II ? 0 : 0);
        auto reps = detail::rep_directions(
            target.label == BureauType::II ? BureauType::VIII : target.label, narg);
        // try index-consistent assignments
        std::array<int, 3> perm{0, 1, 2};
        std::sort(perm.begin(), perm.end());
        do {
            bool consistent = true;
            for (int i = 0; i < 3; ++i)
                if (!(prof.orbits[i].index == reps[perm[i]].second)) consistent = false;
            if (!consistent) continue;

            // L1 maps orbit directions d_i to rep directions e_{perm(i)}
            auto d1 = *prof.orbits[0].direction, d2 = *prof.orbits[1].direction,
                 d3 = *prof.orbits[2].direction;
            auto e1 = reps[perm[0]].first, e2 = reps[perm[1]].first, e3 = reps[perm[2]].first;
            QMat D{{d1.y0, d2.y0, d1.z0, d2.z0}};
            QMat E{{e1.y0, e2.y0, e1.z0, e2.z0}};
            // d3 = a d1 + b d2;  e3 = a' e1 + b' e2
            QMat Dinv = D.inverse(), Einv = E.inverse();
            QuadExt a = Dinv.m[0] * d3.y0 + Dinv.m[1] * d3.z0;
            QuadExt b = Dinv.m[2] * d3.y0 + Dinv.m[3] * d3.z0;
            QuadExt ap = Einv.m[0] * e3.y0 + Einv.m[1] * e3.z0;
            QuadExt bp = Einv.m[2] * e3.y0 + Einv.m[3] * e3.z0;
            if (a.is_zero() || b.is_zero()) continue;
            QMat C{{ap / a, QuadExt(Rat(0)), QuadExt(Rat(0)), bp / b}};
            QMat L1 = E * C * Dinv;
            if (L1.det().is_zero()) continue;
            QuadPairX t = transport(q, L1);
            // find scalar rho with t = rho * rep
            QuadPair rep = table2_representative(
                target.label == BureauType::II ? BureauType::VIII : target.label, narg);
            QuadExt rho;
            bool found = false, good = true;
            for (int i = 0; i < 3 && !found; ++i) {
                if (!rep.P[i].is_zero()) { rho = t.P[i] / QuadExt(rep.P[i]); found = true; }
                else if (!rep.Q[i].is_zero()) { rho = t.Q[i] / QuadExt(rep.Q[i]); found = true; }
            }
            if (!found || rho.is_zero()) continue;
            for (int i = 0; i < 3; ++i) {
                if (!(t.P[i] == rho * QuadExt(rep.P[i]))) good = false;
                if (!(t.Q[i] == rho * QuadExt(rep.Q[i]))) good = false;
            }
            if (!good) continue;
            res.type = target;
            res.map = rho * L1;
            return res;
        } while (std::next_permutation(perm.begin(), perm.end()));

        res.type.label = BureauType::Unknown;
        res.warnings.push_back("no direction assignment produced the representative");
        return res;
    }

    res.type.label = BureauType::Unknown;
    res.warnings.push_back("unrecognized orbit multiplicity pattern");
    return res;
}

}  // namespace pql
