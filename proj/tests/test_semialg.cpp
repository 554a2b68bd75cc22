#include <doctest.h>

#include "ultraberk/checks.hpp"

using namespace ultraberk;

namespace {

TowerPtr qp(long p) { return Tower::base(BaseFieldCfg::p_adic(Int(p))); }

Magnitude mag(long num, long den = 1) { return Magnitude::from_exp(make_rat(num, den)); }

} // namespace

TEST_CASE("formula parsing") {
    TowerPtr k = qp(3);
    PolyContext ctx{k, {"T1", "T2"}};
    Formula f = parse_formula("|T1| <= 1 && |T2^2 - (1+T1)| <= b^(-3)", ctx);
    CHECK(f.kind == Formula::Kind::And);
    CHECK(is_strict(f, k)); // b^-3 folds into a field element

    Formula g = parse_formula("!(|T1| <= 0)", ctx);
    CHECK(g.kind == Formula::Kind::Not);
    CHECK(g.kids[0].atom->lambda.is_zero());
    CHECK(is_strict(g, k));

    Formula h = parse_formula("|T1 - 1| <= b^(-1/2)*|T2|", ctx);
    CHECK(h.kind == Formula::Kind::Atom);
    CHECK(h.atom->lambda == mag(1, 2));
    CHECK_FALSE(is_strict(h, k)); // b^-1/2 is not a field magnitude

    for (const char* text :
         {"|T1| <= 1", "(|T1| <= 1 || |T2| <= b^(-2)) && !(|T1*T2| <= 0)",
          "|T1 - 1| <= b^(-1/2)*|T2|"}) {
        Formula a = parse_formula(text, ctx);
        Formula b = parse_formula(formula_str(a, ctx), ctx);
        CHECK(formula_str(a, ctx) == formula_str(b, ctx));
    }
    CHECK_THROWS_AS(parse_formula("|T1| < 1", ctx), UbError);
}

TEST_CASE("formula evaluation") {
    TowerPtr k = qp(3);
    Point gauss = gen::gauss_point(k);
    PolyContext ctx1{k, {"T1"}};
    CHECK(eval_formula(parse_formula("|T1| <= 1", ctx1), gauss));
    CHECK_FALSE(eval_formula(parse_formula("|T1| <= b^(-1)", ctx1), gauss));

    Point elkies = gen::curve_graph_point(k);
    PolyContext ctx3{k, {"T1", "T2", "T3"}};
    CHECK(eval_formula(parse_formula("|T1^2*T2 - T3| <= 0", ctx3), elkies));

    // the naive series truncation fails at the sqrt series point
    Point x = gen::sqrt_series_point(k, mag(1), mag(4));
    PolyContext ctx2{k, {"T1", "T2"}};
    Formula naive = parse_formula("|T2 - (1 + 1/2*T1 - 1/8*T1^2)| <= b^(-4)", ctx2);
    CHECK_FALSE(eval_formula(naive, x));
    Formula good = parse_formula("|T2^2 - (1 + T1)| <= b^(-4)", ctx2);
    CHECK(eval_formula(good, x));
}

TEST_CASE("fiber membership") {
    TowerPtr k = qp(3);
    Point x = gen::disc_point(k, k->zero(), mag(1)); // eta_{0, b^-1}
    PolyContext ctx{k, {"T1", "U1"}};
    Formula phi = parse_formula("|T1 - U1| <= b^(-1)", ctx);
    std::vector<BaseElem> y0{BaseElem::from_int(k->cfg(), 0)};
    std::vector<BaseElem> y1{BaseElem::from_int(k->cfg(), 1)};
    FiberResult r0 = fiber_membership(x, phi, y0);
    CHECK(r0.member);
    CHECK(r0.hypothesis_ok);
    FiberResult r1 = fiber_membership(x, phi, y1);
    CHECK_FALSE(r1.member);

    // m = 0 coincides with plain evaluation
    PolyContext ctx1{k, {"T1"}};
    Formula psi = parse_formula("|T1| <= b^(-1)", ctx1);
    CHECK(fiber_membership(x, psi, {}).member == eval_formula(psi, x));

    // substituted relation at the curve point
    Point elkies = gen::curve_graph_point(k);
    PolyContext ctx4{k, {"T1", "T2", "T3", "U1"}};
    Formula rel = parse_formula("|T1^2*T2 - U1*T3| <= 0", ctx4);
    FiberResult re = fiber_membership(elkies, rel, y1);
    CHECK(re.member);

    // hypothesis flag degrades on a fractional-radius presentation
    Point bad = gen::disc_point(k, k->zero(), mag(1, 2));
    Formula triv = parse_formula("|T1| <= 1", ctx1);
    FiberResult rb = fiber_membership(bad, triv, {});
    CHECK_FALSE(rb.hypothesis_ok);
    CHECK(rb.member);
}

TEST_CASE("canonical extension evaluation") {
    TowerPtr base = qp(3);
    UPoly<TowerElem> m(base->zero());
    m.c = {-base->uniformizer(), base->zero(), base->one()};
    m.trim();
    TowerPtr k1 = base->with_step("g", StepKind::Eisenstein, m);

    Point gauss = gen::gauss_point(base);
    // restriction property on base-coefficient polynomials
    TPoly p(1, base->zero());
    p.add_term({2}, base->from_int(2));
    p.add_term({0}, base->uniformizer());
    TPoly lifted(1, k1->zero());
    for (const auto& [e, v] : p.t) lifted.add_term(e, v.lift_to(k1));
    CHECK(canonical_extension_eval(lifted, k1, gauss) == eval(p, gauss));

    // |T - g| at eta_{c, rho} with c in k: max(|c - g|, rho)
    Point x = gen::disc_point(base, base->from_int(1), mag(2));
    TPoly tg(1, k1->zero());
    tg.add_term({1}, k1->one());
    tg.add_term({0}, -k1->gen(1));
    // |1 - g| = 1
    CHECK(canonical_extension_eval(tg, k1, x) == Magnitude::one());
    Point x0 = gen::disc_point(base, base->zero(), mag(2));
    // |0 - g| = b^-1/2 > b^-2
    CHECK(canonical_extension_eval(tg, k1, x0) == mag(1, 2));

    // towers of extensions agree on base-coefficient polynomials
    TowerPtr k2 = k1->with_step("w", StepKind::Unramified, gen::unramified_poly(k1, 2));
    TPoly lifted2(1, k2->zero());
    for (const auto& [e, v] : p.t) lifted2.add_term(e, v.lift_to(k2));
    CHECK(canonical_extension_eval(lifted2, k2, gauss) == eval(p, gauss));

    // uncertified extension rejected: a tower over a different base
    TowerPtr other = qp(5);
    TPoly q(1, other->zero());
    q.add_term({1}, other->one());
    CHECK_THROWS_AS(canonical_extension_eval(q, other, gauss), UbError);
}

TEST_CASE("sdk sup-norm sampling") {
    TowerPtr k = qp(3);
    std::vector<Point> pts;
    pts.push_back(gen::rational_point(k, make_rat(0, 1)));
    pts.push_back(gen::rational_point(k, make_rat(1, 1)));
    auto span2 = std::span<const Point>(pts.data(), pts.size());
    SdkSet s = approximate_nd_total(span2, 2, 1);

    TPoly q(1, k->zero());
    q.add_term({2}, k->one());
    q.add_term({0}, k->from_int(2));
    SupnormSample res = sdk_supnorm_sample(s, q, span2);
    CHECK(res.value == sup_norm(q, span2));
    CHECK(res.equals_source_norm);

    // witnesses outside S rejected
    std::vector<Point> bad;
    bad.push_back(gen::rational_point(k, make_rat(1, 3)));
    CHECK_THROWS_AS(sdk_supnorm_sample(s, q, std::span<const Point>(bad.data(), bad.size())),
                    UbError);
}
