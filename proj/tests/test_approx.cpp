#include <doctest.h>

#include "ultraberk/checks.hpp"

using namespace ultraberk;

namespace {

TowerPtr qp(long p) { return Tower::base(BaseFieldCfg::p_adic(Int(p))); }

TowerPtr qp_sqrt(long p) {
    TowerPtr base = qp(p);
    UPoly<TowerElem> m(base->zero());
    m.c = {-base->uniformizer(), base->zero(), base->one()};
    m.trim();
    return base->with_step("g", StepKind::Eisenstein, m);
}

Magnitude mag(long num, long den = 1) { return Magnitude::from_exp(make_rat(num, den)); }

TPoly t_minus(const TowerPtr& k, const TowerElem& a) {
    TPoly p(1, k->zero());
    p.add_term({1}, k->one());
    if (!a.is_zero()) p.add_term({0}, -a);
    return p;
}

} // namespace

TEST_CASE("best_monic on a rational point") {
    TowerPtr k = qp(3);
    Point x = gen::rational_point(k, make_rat(7, 2));
    BestMonic bm = best_monic_1d(x, 1);
    CHECK(bm.algebraic_hit);
    CHECK(bm.r.is_zero());
    CHECK(bm.r0 == t_minus(k, k->from_rat(make_rat(7, 2))));
}

TEST_CASE("best_monic on the gauss point") {
    TowerPtr k = qp(3);
    Point x = gen::gauss_point(k);
    for (long d = 1; d <= 3; ++d) {
        BestMonic bm = best_monic_1d(x, d);
        CHECK(bm.r == Magnitude::one());
        TPoly td(1, k->zero());
        td.add_term({d}, k->one());
        CHECK(bm.r0 == td);
    }
}

TEST_CASE("best_monic on the sqrt(p) disc point") {
    TowerPtr k = qp_sqrt(3);
    Point x = gen::disc_point(k, k->gen(1), mag(2));
    BestMonic b1 = best_monic_1d(x, 1);
    CHECK(b1.r == mag(1, 2));
    TPoly t(1, k->zero());
    t.add_term({1}, k->one());
    CHECK(b1.r0 == t);

    BestMonic b2 = best_monic_1d(x, 2);
    CHECK(b2.r == mag(5, 2));
    TPoly m(1, k->zero());
    m.add_term({2}, k->one());
    m.add_term({0}, -k->uniformizer());
    CHECK(b2.r0 == m);
}

TEST_CASE("approximate_1d chains") {
    TowerPtr k = qp(3);
    // rational point: the hit repeats from degree 1 on
    Point a = gen::rational_point(k, make_rat(2, 1));
    Approx1D chain = approximate_1d(a, 3);
    for (const auto& e : chain.entries) {
        CHECK(e.r.is_zero());
        CHECK(e.r0 == t_minus(k, k->from_int(2)));
    }
    CHECK(chain.entries[1].stabilized);

    // sqrt(p) disc: (T, b^-1/2), (T^2 - p, b^-5/2), then the carryover pattern
    TowerPtr ks = qp_sqrt(3);
    Point x = gen::disc_point(ks, ks->gen(1), mag(2));
    Approx1D cx = approximate_1d(x, 3);
    CHECK(cx.entries[0].r == mag(1, 2));
    CHECK(cx.entries[1].r == mag(5, 2));
    CHECK_FALSE(cx.entries[1].stabilized);
    CHECK(cx.entries[2].r == mag(3));
    CHECK(cx.entries[2].stabilized);

    // disc with base center within its own radius: minimal degree-j value is
    // rho^j and the carryover pattern stabilizes from degree 2
    Point y = gen::disc_point(k, k->uniformizer(), Magnitude::one());
    Approx1D cy = approximate_1d(y, 3);
    CHECK(cy.entries[0].r == Magnitude::one());
    CHECK(cy.entries[1].stabilized);
    CHECK(cy.entries[2].stabilized);

    // prefix stability under budget extension, and r nonincreasing
    Approx1D cx5 = approximate_1d(x, 5);
    for (size_t j = 0; j < cx.entries.size(); ++j) {
        CHECK(cx5.entries[j].r0 == cx.entries[j].r0);
        CHECK(cx5.entries[j].r == cx.entries[j].r);
    }
    for (size_t j = 1; j < cx5.entries.size(); ++j)
        CHECK(cx5.entries[j].r <= cx5.entries[j - 1].r);
}

TEST_CASE("proof identity on sampled monic polynomials") {
    TowerPtr ks = qp_sqrt(3);
    Point x = gen::disc_point(ks, ks->gen(1), mag(2));
    Approx1D chain = approximate_1d(x, 3);
    Rng rng(42);
    for (const auto& entry : chain.entries) {
        for (int i = 0; i < 40; ++i) {
            TPoly r = sample_monic(ks, MultiDeg({entry.degree}), rng, -3, 3);
            Magnitude lhs = eval(r, x);
            Magnitude rhs = Magnitude::max(entry.r, eval(r - entry.r0, x));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("approximate_nd on a rational point of the plane") {
    TowerPtr k = qp(3);
    TPoly c1 = TPoly::constant(2, k->from_int(2));
    TPoly c2 = TPoly::constant(2, k->from_rat(make_rat(1, 2)));
    Point x(k, {Layer{FiberElem::make_exact(c1), Magnitude::zero()},
                Layer{FiberElem::make_exact(c2), Magnitude::zero()}});
    auto pts = std::span<const Point>(&x, 1);
    SdkSet s = approximate_nd_total(pts, 1, 2);
    REQUIRE(s.entries.size() == 2);
    // entries ascending: (0,1) then (1,0)
    CHECK(s.entries[0].e == MultiDeg({0, 1}));
    CHECK(s.entries[0].r.is_zero());
    TPoly want0(2, k->zero());
    want0.add_term({0, 1}, k->one());
    want0.add_term({0, 0}, -k->from_rat(make_rat(1, 2)));
    CHECK(s.entries[0].r0 == want0);
    CHECK(s.entries[1].e == MultiDeg({1, 0}));
    TPoly want1(2, k->zero());
    want1.add_term({1, 0}, k->one());
    want1.add_term({0, 0}, -k->from_int(2));
    CHECK(s.entries[1].r0 == want1);
}

TEST_CASE("approximate_nd finds the curve relations") {
    TowerPtr k = qp(3);
    Point x = gen::curve_graph_point(k);
    auto pts = std::span<const Point>(&x, 1);
    SdkSet s = approximate_nd_total(pts, 3, 3);

    auto entry_at = [&](std::vector<long> e) -> const SdkEntry& {
        for (const auto& en : s.entries)
            if (en.e.e == e) return en;
        FAIL("missing entry");
        return s.entries[0];
    };
    // unit balls
    for (auto e : {std::vector<long>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
        const SdkEntry& en = entry_at(e);
        CHECK(en.r == Magnitude::one());
        CHECK(en.r0 == TPoly::monomial(3, MultiDeg(e), k->one()));
    }
    // the three vanishing relations
    TPoly rel1(3, k->zero());
    rel1.add_term({2, 1, 0}, k->one());
    rel1.add_term({0, 0, 1}, -k->one());
    CHECK(entry_at({2, 1, 0}).r.is_zero());
    CHECK(entry_at({2, 1, 0}).r0 == rel1);

    TPoly rel2(3, k->zero());
    rel2.add_term({2, 0, 1}, k->one());
    rel2.add_term({0, 2, 0}, -k->one());
    CHECK(entry_at({2, 0, 1}).r.is_zero());
    CHECK(entry_at({2, 0, 1}).r0 == rel2);

    TPoly rel3(3, k->zero());
    rel3.add_term({0, 3, 0}, k->one());
    rel3.add_term({0, 0, 2}, -k->one());
    CHECK(entry_at({0, 3, 0}).r.is_zero());
    CHECK(entry_at({0, 3, 0}).r0 == rel3);
}

TEST_CASE("approximate_nd on the sqrt series point") {
    TowerPtr k = qp(3);
    Point x = gen::sqrt_series_point(k, mag(1), mag(4)); // r = b^-1, s = b^-4 < r^3
    auto pts = std::span<const Point>(&x, 1);
    SdkSet s = approximate_nd_total(pts, 2, 2);
    auto entry_at = [&](std::vector<long> e) -> const SdkEntry& {
        for (const auto& en : s.entries)
            if (en.e.e == e) return en;
        FAIL("missing entry");
        return s.entries[0];
    };
    // sup norm of T1 itself is r, so {|T1| <= r} holds on the envelope; the
    // (1,0) minimizer is the strictly better T1 - 2*T2 + 2 = (T2-part)^2 with
    // value r^2
    TPoly t1 = TPoly::monomial(2, MultiDeg({1, 0}), k->one());
    CHECK(eval(t1, x) == mag(1));
    CHECK(entry_at({1, 0}).r == mag(2));
    {
        auto rep = lemma_check(pts, MultiDeg({1, 0}), entry_at({1, 0}).r0, entry_at({1, 0}).r, 40, 5);
        CHECK(rep.pass());
    }
    // T2^2 - (1 + T1) with value s
    const SdkEntry& e22 = entry_at({0, 2});
    TPoly want(2, k->zero());
    want.add_term({0, 2}, k->one());
    want.add_term({0, 0}, -k->one());
    want.add_term({1, 0}, -k->one());
    CHECK(e22.r0 == want);
    CHECK(e22.r == mag(4));
    // the degree-(0,1) entry: T2 - 1 at the honestly computed radius r, not s
    const SdkEntry& e01 = entry_at({0, 1});
    TPoly want01(2, k->zero());
    want01.add_term({0, 1}, k->one());
    want01.add_term({0, 0}, -k->one());
    CHECK(e01.r0 == want01);
    CHECK(e01.r == mag(1));
}

TEST_CASE("lemma_check") {
    TowerPtr k = qp(3);
    Point x = gen::curve_graph_point(k);
    auto pts = std::span<const Point>(&x, 1);
    MultiDeg e({2, 1, 0});
    BestMonic bm = best_monic(pts, e);
    LemmaReport rep = lemma_check(pts, e, bm.r0, bm.r, 60, 7);
    CHECK(rep.pass());
}

TEST_CASE("brute force oracle") {
    TowerPtr ks = qp_sqrt(3);
    Point x = gen::disc_point(ks, ks->gen(1), mag(2));
    auto pts = std::span<const Point>(&x, 1);
    LatticeWindow w;
    w.lo = Rat(-3);
    w.hi = Rat(3);
    w.den = 2;
    w.depth = 6;
    BruteForceResult bf = brute_force_min(pts, MultiDeg({2}), w);
    CHECK(bf.min == mag(5, 2));
    BestMonic bm = best_monic_1d(x, 2);
    CHECK(window_contains(bm.r0, MultiDeg({2}), w));
    CHECK(bf.min == bm.r);

    // rational point: any window containing the center hits zero
    TowerPtr k = qp(3);
    Point a = gen::rational_point(k, make_rat(2, 1));
    auto apts = std::span<const Point>(&a, 1);
    BruteForceResult bfa = brute_force_min(apts, MultiDeg({1}), w);
    CHECK(bfa.min.is_zero());

    // gauss point: minimum 1 at any window
    Point g = gen::gauss_point(k);
    auto gpts = std::span<const Point>(&g, 1);
    CHECK(brute_force_min(gpts, MultiDeg({1}), w).min == Magnitude::one());

    LatticeWindow tiny;
    tiny.max_nodes = 3;
    CHECK_THROWS_AS(brute_force_min(pts, MultiDeg({2}), tiny), UbError);
}

TEST_CASE("minimization over t-adic and trivially valued bases") {
    // Laurent series base F_2((t))
    TowerPtr kt = Tower::base(BaseFieldCfg::t_adic(Int(2), 1, false));
    TowerElem t = kt->uniformizer();
    Point x = gen::disc_point(kt, t, mag(2));
    BestMonic bm = best_monic_1d(x, 1);
    CHECK(bm.r == mag(2));
    TPoly want(1, kt->zero());
    want.add_term({1}, kt->one());
    want.add_term({0}, -t);
    CHECK(bm.r0 == want);
    Approx1D chain = approximate_1d(x, 2);
    CHECK(chain.entries[1].r == mag(4)); // (T - t)^2 scale

    // trivially valued base F_5: only b^0 radii and rigid points exist in |k|
    TowerPtr triv = Tower::base(BaseFieldCfg::t_adic(Int(5), 1, true));
    Point g = gen::disc_point(triv, triv->from_int(2), mag(1));
    BestMonic bt = best_monic_1d(g, 1);
    CHECK(bt.r == mag(1));
    Point rigid = gen::disc_point(triv, triv->from_int(3), Magnitude::zero());
    BestMonic br = best_monic_1d(rigid, 1);
    CHECK(br.r.is_zero());
    TPoly w2(1, triv->zero());
    w2.add_term({1}, triv->one());
    w2.add_term({0}, -triv->from_int(3));
    CHECK(br.r0 == w2);
    // identity at the trivially valued Gauss-like point
    Point gauss = gen::disc_point(triv, triv->zero(), Magnitude::one());
    BestMonic bg = best_monic_1d(gauss, 2);
    CHECK(bg.r == Magnitude::one());
    Rng rng(11);
    auto gp = std::span<const Point>(&gauss, 1);
    CHECK(lemma_check(gp, MultiDeg({2}), bg.r0, bg.r, 30, rng.next()).pass());
}

TEST_CASE("two-point envelopes stay nested with membership") {
    TowerPtr k = qp(3);
    std::vector<Point> pts;
    pts.push_back(gen::rational_point(k, make_rat(1, 1)));
    pts.push_back(gen::disc_point(k, k->from_int(4), mag(2)));
    auto span2 = std::span<const Point>(pts.data(), pts.size());
    SdkSet s1 = approximate_nd_total(span2, 1, 1);
    SdkSet s2 = approximate_nd_total(span2, 2, 1);
    REQUIRE(s2.entries.size() >= s1.entries.size());
    for (size_t i = 0; i < s1.entries.size(); ++i) {
        CHECK(s2.entries[i].r0 == s1.entries[i].r0);
        CHECK(s2.entries[i].r == s1.entries[i].r);
    }
    for (const auto& en : s2.entries)
        for (const auto& x : pts) CHECK(eval(en.r0, x) <= en.r);
    // sup norms coincide on the generating set per entry degree
    // |T - 1| on K: max(0, |4-1| = b^-1 ... eval at disc: max(|4-1|, b^-2) = b^-1)
    CHECK(s1.entries[0].r == mag(1));
}
