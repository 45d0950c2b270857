#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "pql/quadpair.hpp"
#include "pql/table2.hpp"

using namespace pql;

namespace {

QuadPair qp(Rat p0, Rat p1, Rat p2, Rat q0, Rat q1, Rat q2) {
    QuadPair q;
    q.P = {p0, p1, p2};
    q.Q = {q0, q1, q2};
    return q;
}

std::vector<OrbitIndex> fin(std::vector<long long> v, int infs = 0) {
    std::vector<OrbitIndex> out;
    for (auto k : v) out.push_back(OrbitIndex::finite(k));
    for (int i = 0; i < infs; ++i) out.push_back(OrbitIndex::inf());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("tangent cubic") {
    // family pair y' = y^2 - (n+2) yz, z' = -n yz - z^2 gives (n+1) yz(z-y)
    for (long long n : {1, 2, 5}) {
        QuadPair q = table2_representative(BureauType::VIII, n);
        BinaryCubic c = tangent_cubic(q);
        CHECK(c[0] == Rat(0));
        CHECK(c[1] == Rat(-(n + 1)));
        CHECK(c[2] == Rat(n + 1));
        CHECK(c[3] == Rat(0));
    }
    // radial pair: identically zero
    CHECK(is_dicritical(qp(-1, 0, 0, 0, -1, 0)));
    // y' = 0, z' = 6y^2: cubic 6y^3
    BinaryCubic c = tangent_cubic(qp(0, 0, 0, 6, 0, 0));
    CHECK(c == BinaryCubic{Rat(6), Rat(0), Rat(0), Rat(0)});
}

TEST_CASE("ratio equation") {
    // XIV pair: F(s) = (3s-2)/(s(3-2s))
    QuadPair xiv = table2_representative(BureauType::XIV);
    RatioEq r = ratio_equation(xiv, Chart::S);
    RatFun1 expect("s", UPolyQ(std::vector<Rat>{Rat(-2), Rat(3)}),
                   UPolyQ(std::vector<Rat>{Rat(0), Rat(3), Rat(-2)}));
    CHECK(r.F == expect);

    // double-root denominator before cancellation for the shared family
    QuadPair ix = table2_representative(BureauType::IX, 4);
    RatioEq ri = ratio_equation(ix, Chart::S);
    CHECK(ri.A == UPolyQ(std::vector<Rat>{Rat(0), Rat(0), Rat(-4)}));  // -n s^2
    auto mr = ri.multiple_roots();
    REQUIRE(mr.size() == 1);
    CHECK(mr[0].first == Rat(0));
    CHECK(mr[0].second == 2);
    // in the sigma chart the root is simple: A~(sigma) = n sigma
    RatioEq rs = ratio_equation(ix, Chart::Sigma);
    CHECK(rs.A == UPolyQ(std::vector<Rat>{Rat(0), Rat(4)}));

    // finite at non-radial directions
    for (Rat s0 : {Rat(1, 3), Rat(5), Rat(-2, 7)}) {
        Rat denv = r.F.den.eval(s0);
        CHECK(!denv.is_zero());
    }

    CHECK_THROWS_AS(ratio_equation(qp(-1, 0, 0, 0, -1, 0), Chart::S), DicriticalInput);
}

TEST_CASE("ratio equation charts are consistent") {
    // G(w) = -(F(1/w) + 2w)/w^2 must hold between the two charts
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> d(-3, 3);
    int done = 0;
    while (done < 40) {
        QuadPair q = qp(d(rng), d(rng), d(rng), d(rng), d(rng), d(rng));
        if (q.is_zero() || is_dicritical(q)) continue;
        RatioEq s = ratio_equation(q, Chart::S);
        RatioEq g = ratio_equation(q, Chart::Sigma);
        RatFun1 dual = s.F.reciprocal_transform();
        dual.var = g.F.var;
        CHECK(dual == g.F);
        ++done;
    }
}

TEST_CASE("orbit indices reproduce the classification table") {
    auto summary = [](const QuadPair& q) { return orbit_indices(q).summary(); };

    // dicritical family
    CHECK(orbit_indices(table2_representative(BureauType::I)).dicritical);

    // triple orbit
    {
        IndexProfile p = orbit_indices(table2_representative(BureauType::V));
        REQUIRE(p.orbits.size() == 1);
        CHECK(p.orbits[0].multiplicity == 3);
        CHECK(p.orbits[0].index == OrbitIndex::undefined());
    }

    // double + simple with index n
    for (long long n : {-6, -3, -2, -1, 1, 2, 3, 6}) {
        IndexProfile p = orbit_indices(table2_representative(BureauType::IX, n));
        int mult2 = 0;
        OrbitIndex simple;
        for (auto& o : p.orbits) {
            if (o.multiplicity == 2) ++mult2;
            if (o.multiplicity == 1) simple = o.index;
        }
        CHECK(mult2 == 1);
        CHECK(simple == OrbitIndex::finite(n));
    }

    // double + simple with infinite index
    {
        IndexProfile p = orbit_indices(table2_representative(BureauType::VII));
        OrbitIndex simple;
        for (auto& o : p.orbits)
            if (o.multiplicity == 1) simple = o.index;
        CHECK(simple == OrbitIndex::inf());
    }

    // three simple orbits
    for (long long n = 0; n <= 6; ++n)
        CHECK(summary(table2_representative(BureauType::VIII, n)) == fin({1, n + 1, -n - 1}));
    CHECK(summary(table2_representative(BureauType::VI)) == fin({1}, 2));
    CHECK(summary(table2_representative(BureauType::XI)) == fin({2, 2}, 1));
    CHECK(summary(table2_representative(BureauType::XII)) == fin({3, 3, 3}));
    CHECK(summary(table2_representative(BureauType::XIII)) == fin({2, 4, 4}));
    CHECK(summary(table2_representative(BureauType::XIV)) == fin({2, 3, 6}));
}

TEST_CASE("index sum identity and linear invariance") {
    // for three simple orbits with defined indices, sum of reciprocals is 1
    auto check_sum = [](const QuadPair& q) {
        IndexProfile p = orbit_indices(q);
        int simple = 0;
        Rat sum(0);
        bool alldef = true;
        for (auto& o : p.orbits) {
            if (o.multiplicity != 1) return;
            ++simple;
            if (o.index.tag == OrbitIndex::Finite)
                sum += Rat(1, o.index.k);
            else if (o.index.tag != OrbitIndex::Infinite)
                alldef = false;
        }
        if (simple == 3 && alldef) CHECK(sum == Rat(1));
    };
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int i = 0; i < 300; ++i) {
        QuadPair q = qp(d(rng), d(rng), d(rng), d(rng), d(rng), d(rng));
        if (q.is_zero() || is_dicritical(q)) continue;
        check_sum(q);
    }

    // indices are linear invariants: transport by random invertible maps
    std::uniform_int_distribution<int> e(-2, 2);
    for (auto label : {BureauType::XIV, BureauType::XI, BureauType::VI}) {
        QuadPair q = table2_representative(label);
        for (int i = 0; i < 20; ++i) {
            QMat L{{QuadExt(Rat(e(rng))), QuadExt(Rat(e(rng))), QuadExt(Rat(e(rng))),
                    QuadExt(Rat(e(rng)))}};
            if (L.det().is_zero()) continue;
            auto t = transport(q, L).rational();
            REQUIRE(t.has_value());
            auto a = orbit_indices(*t).summary();
            auto b = orbit_indices(q).summary();
            CHECK(a == b);
        }
    }
}

TEST_CASE("briot-bouquet verdicts") {
    // all table rows with valid parameters are admissible
    for (auto label : {BureauType::I, BureauType::V, BureauType::VII, BureauType::VI,
                       BureauType::XI, BureauType::XII, BureauType::XIII, BureauType::XIV}) {
        QuadPair q = table2_representative(label);
        if (is_dicritical(q)) continue;
        CHECK(briot_bouquet_check(q).univalent);
    }
    for (long long n : {1, 2, 3, 4, 5, 6}) {
        CHECK(briot_bouquet_check(table2_representative(BureauType::VIII, n)).univalent);
        if (n != 1) CHECK(briot_bouquet_check(table2_representative(BureauType::IX, n)).univalent);
    }
    CHECK(briot_bouquet_check(table2_representative(BureauType::II)).univalent);

    // constructed double pole
    RatFun1 dbl("s", UPolyQ(Rat(1)), UPolyQ(std::vector<Rat>{Rat(0), Rat(0), Rat(1)}));
    RatFun1 triv("s", UPolyQ(Rat(0)), UPolyQ(Rat(1)));
    BBVerdict v = briot_bouquet_check(dbl, triv);
    CHECK(!v.univalent);
    CHECK(v.reason.find("NonSimplePole") != std::string::npos);

    // the example pair with no univalent structure
    BBVerdict w = briot_bouquet_check(qp(1, 0, 1, 0, 1, 0));
    CHECK(!w.univalent);
}

TEST_CASE("weighted briot-bouquet equation") {
    // n = 2: -(3v-2)/(v(2v-3))
    RatFun1 f2 = weighted_ratio_equation(2);
    CHECK(f2 == RatFun1("v", UPolyQ(std::vector<Rat>{Rat(-2), Rat(3)}),
                        UPolyQ(std::vector<Rat>{Rat(0), Rat(3), Rat(-2)})));
    // n = 5: -(3v-5)/(v(2v-6))
    RatFun1 f5 = weighted_ratio_equation(5);
    CHECK(f5 == RatFun1("v", UPolyQ(std::vector<Rat>{Rat(-5), Rat(3)}),
                        UPolyQ(std::vector<Rat>{Rat(0), Rat(6), Rat(-2)})));
    CHECK_THROWS(weighted_ratio_equation(-1));

    for (int n = -10; n <= 10; ++n) {
        if (n == -1 || n == 0 || n == 1) continue;
        RatFun1 f = weighted_ratio_equation(n);
        // residue at v1 = (n+1)/2 equals (n-1)/(2(n+1)) - 1; for n = -3 the
        // pole cancels and the residue is the (zero) limit value
        Rat v1 = Rat(n + 1, 2);
        Rat expect = Rat(n - 1, 2 * (n + 1)) - Rat(1);
        if (n == -3)
            CHECK(expect == Rat(0));
        else
            CHECK(f.residue_at(v1) == expect);
        // residue at v = 0 has index n+1
        Rat r0 = f.residue_at(Rat(0));
        CHECK(Rat(1) / (r0 + Rat(1)) == Rat(n + 1));
        // index 2 at infinity
        RatFun1 g = f.reciprocal_transform();
        CHECK(g.residue_at(Rat(0)) == Rat(-1, 2));
    }

    // admissible parameters: exactly n in {2, 3, 5}
    std::vector<int> admissible;
    for (int n = -10; n <= 10; ++n)
        if (weighted_admissible(n)) admissible.push_back(n);
    CHECK(admissible == std::vector<int>{2, 3, 5});

    // index rows: (0, v1, inf) -> n=2: 3,6,2; n=3: 4,4,2; n=5: 6,3,2
    auto idx = [](const Rat& r) { return Rat(1) / (r + Rat(1)); };
    CHECK(idx(weighted_ratio_equation(2).residue_at(Rat(0))) == Rat(3));
    CHECK(idx(weighted_ratio_equation(2).residue_at(Rat(3, 2))) == Rat(6));
    CHECK(idx(weighted_ratio_equation(3).residue_at(Rat(0))) == Rat(4));
    CHECK(idx(weighted_ratio_equation(3).residue_at(Rat(2))) == Rat(4));
    CHECK(idx(weighted_ratio_equation(5).residue_at(Rat(0))) == Rat(6));
    CHECK(idx(weighted_ratio_equation(5).residue_at(Rat(3))) == Rat(3));
}

TEST_CASE("index diophantine census") {
    auto sols = solve_index_diophantine();
    REQUIRE(sols.size() == 6);
    int parametric = 0;
    std::vector<std::vector<OrbitIndex>> concrete;
    for (auto& s : sols) {
        if (s.parametric) {
            ++parametric;
            continue;
        }
        std::vector<OrbitIndex> v(s.indices.begin(), s.indices.end());
        std::sort(v.begin(), v.end());
        concrete.push_back(v);
    }
    CHECK(parametric == 1);
    CHECK(std::find(concrete.begin(), concrete.end(), fin({2, 3, 6})) != concrete.end());
    CHECK(std::find(concrete.begin(), concrete.end(), fin({2, 2}, 1)) != concrete.end());
    CHECK(std::find(concrete.begin(), concrete.end(), fin({3, 3, 3})) != concrete.end());
    CHECK(std::find(concrete.begin(), concrete.end(), fin({2, 4, 4})) != concrete.end());
    CHECK(std::find(concrete.begin(), concrete.end(), fin({1}, 2)) != concrete.end());

    // brute-force oracle over |n| <= 100 (infinity as 0 contribution):
    // every solution is {1, m, -m} or one of the five concrete ones
    auto ok = [&](long long a, long long b, long long c) {
        std::vector<long long> v{a, b, c};
        std::sort(v.begin(), v.end());
        // parametric family {1, m, -m}, m finite
        if (v[1] == 1 && v[0] == -v[2] && v[0] != 0) return true;
        // concrete: encode inf as 1000000
        std::vector<std::vector<long long>> expect = {
            {1, 1000000, 1000000}, {2, 2, 1000000}, {3, 3, 3}, {2, 4, 4}, {2, 3, 6}};
        for (auto& e : expect) {
            auto w = e;
            std::sort(w.begin(), w.end());
            if (v == w) return true;
        }
        return false;
    };
    long long bad = 0;
    for (long long a = -100; a <= 100; ++a) {
        if (a == 0) continue;
        for (long long b = a; b <= 100; ++b) {
            if (b == 0) continue;
            for (long long c = b; c <= 100; ++c) {
                if (c == 0) continue;
                // 1/a + 1/b + 1/c = 1 over exact integers
                if (b * c + a * c + a * b != a * b * c) continue;
                if (!ok(a, b, c)) ++bad;
            }
            // c = infinity
            if (a * 1 + b * 1 != a * b) continue;  // 1/a + 1/b = 1
            if (!ok(a, b, 1000000)) ++bad;
        }
        // b = c = infinity: 1/a = 1
        if (a == 1 && !ok(1, 1000000, 1000000)) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("match against the representatives") {
    // radial pair is type I with the identity
    MatchResult m = match_table2(qp(-1, 0, 0, 0, -1, 0));
    CHECK(m.type.label == BureauType::I);

    // example: indices {1, 2, -2}
    MatchResult m8 = match_table2(qp(1, -3, 0, 0, -1, -1));
    CHECK(m8.type.label == BureauType::VIII);
    REQUIRE(m8.type.n.has_value());
    CHECK(*m8.type.n == 1);
    {
        auto t = transport(qp(1, -3, 0, 0, -1, -1), m8.map).rational();
        REQUIRE(t.has_value());
        CHECK(*t == table2_representative(BureauType::VIII, 1));
    }

    // not univalent
    MatchResult bad = match_table2(qp(1, 0, 1, 0, 1, 0));
    CHECK(bad.type.label == BureauType::NotUnivalent);
    CHECK(!bad.failure.empty());

    // every representative matches itself with an exact transport
    std::vector<std::pair<BureauType::Label, long long>> cases = {
        {BureauType::I, 0},   {BureauType::II, 0},  {BureauType::III, 0}, {BureauType::IV, 0},
        {BureauType::V, 0},   {BureauType::VI, 0},  {BureauType::VII, 0}, {BureauType::VIII, 1},
        {BureauType::VIII, 3}, {BureauType::IX, 2}, {BureauType::IX, -4}, {BureauType::XI, 0},
        {BureauType::XII, 0}, {BureauType::XIII, 0}, {BureauType::XIV, 0}};
    for (auto& [label, n] : cases) {
        QuadPair q = table2_representative(label, n);
        MatchResult r = match_table2(q);
        CHECK(r.type.label == label);
        if (label == BureauType::VIII || label == BureauType::IX) {
            REQUIRE(r.type.n.has_value());
            CHECK(*r.type.n == n);
        }
        auto t = transport(q, r.map).rational();
        REQUIRE(t.has_value());
        CHECK(*t == table2_representative(label, n));
    }

    // random linear transports classify back to the original label
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> e(-2, 2);
    for (auto& [label, n] : cases) {
        QuadPair q = table2_representative(label, n);
        int done = 0;
        while (done < 5) {
            QMat L{{QuadExt(Rat(e(rng))), QuadExt(Rat(e(rng))), QuadExt(Rat(e(rng))),
                    QuadExt(Rat(e(rng)))}};
            if (L.det().is_zero()) continue;
            auto t = transport(q, L).rational();
            REQUIRE(t.has_value());
            MatchResult r = match_table2(*t);
            CHECK(r.type.label == label);
            auto back = transport(*t, r.map).rational();
            REQUIRE(back.has_value());
            CHECK(*back == table2_representative(label, n));
            ++done;
        }
    }
}
