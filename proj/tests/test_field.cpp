#include <doctest.h>

#include "ultraberk/checks.hpp"
#include "ultraberk/tower.hpp"

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

} // namespace

TEST_CASE("base field valuations") {
    auto cfg = BaseFieldCfg::p_adic(Int(3));
    CHECK(BaseElem::from_int(cfg, 12).val() == Magnitude::from_exp(Rat(1))); // v_3(12) = 1
    CHECK(BaseElem::from_rat(cfg, make_rat(1, 9)).val() == Magnitude::from_exp(Rat(-2)));
    CHECK(BaseElem::from_int(cfg, 0).val().is_zero());

    auto t2 = BaseFieldCfg::t_adic(Int(2), 1, false);
    BaseElem t = BaseElem::uniformizer(t2);
    CHECK(t.val() == Magnitude::from_exp(Rat(1)));
    CHECK((t * t + t).val() == Magnitude::from_exp(Rat(1)));
    CHECK(t.inverse().val() == Magnitude::from_exp(Rat(-1)));

    auto triv = BaseFieldCfg::t_adic(Int(5), 1, true);
    CHECK(BaseElem::from_int(triv, 3).val() == Magnitude::one());
    CHECK_THROWS_AS(BaseElem::uniformizer(triv), UbError);
}

TEST_CASE("residues") {
    auto cfg = BaseFieldCfg::p_adic(Int(5));
    const FField& rf = cfg->residue_field();
    CHECK(rf.eq(BaseElem::from_int(cfg, 7).residue_integral(), rf.from_int(Int(2), 0)));
    CHECK(rf.eq(BaseElem::from_int(cfg, 10).residue_integral(), rf.zero(0)));
    CHECK_THROWS_AS(BaseElem::from_rat(cfg, make_rat(1, 5)).residue_integral(), UbError);

    // x = 1 + sqrt(p): |x| = 1 (norm 1 - p is a unit) and residue 1
    TowerPtr k = qp_sqrt(5);
    TowerElem x = k->one() + k->gen(1);
    CHECK(x.val() == Magnitude::one());
    FFElem r = x.residue();
    CHECK(r == FFElem{&k->residue_field(), k->residue_field().one(0)});
    // |x| > 1 rejects
    CHECK_THROWS_AS((k->uniformizer().inverse()).residue(), UbError);
}

TEST_CASE("certify_step") {
    TowerPtr b3 = qp(3);
    UPoly<TowerElem> eis(b3->zero());
    eis.c = {-b3->uniformizer(), b3->zero(), b3->one()};
    eis.trim();
    CertifyResult c1 = certify_step(b3, eis);
    CHECK(c1.accepted);
    CHECK(c1.kind == StepKind::Eisenstein);

    TowerPtr b2 = qp(2);
    UPoly<TowerElem> unram(b2->zero());
    unram.c = {b2->one(), b2->one(), b2->one()}; // T^2 + T + 1 irreducible over F_2
    CertifyResult c2 = certify_step(b2, unram);
    CHECK(c2.accepted);
    CHECK(c2.kind == StepKind::Unramified);

    UPoly<TowerElem> red(b3->zero());
    red.c = {-b3->one(), b3->zero(), b3->one()}; // T^2 - 1 reducible mod 3
    CertifyResult c3 = certify_step(b3, red);
    CHECK_FALSE(c3.accepted);

    UPoly<TowerElem> nonmonic(b3->zero());
    nonmonic.c = {b3->one(), b3->zero(), b3->from_int(2)};
    CHECK_THROWS_AS(certify_step(b3, nonmonic), UbError);

    // generalized Eisenstein: slope 3/2 over the base, denominator 2 = deg
    UPoly<TowerElem> gen_eis(b3->zero());
    gen_eis.c = {-b3->uniformizer().pow(3), b3->zero(), b3->one()};
    gen_eis.trim();
    CertifyResult c4 = certify_step(b3, gen_eis);
    CHECK(c4.accepted);
    CHECK(c4.kind == StepKind::Eisenstein);
}

TEST_CASE("tower element arithmetic and valuation") {
    TowerPtr k = qp_sqrt(3);
    TowerElem g = k->gen(1);
    CHECK(g.val() == Magnitude::from_exp(make_rat(1, 2))); // Eisenstein slope
    CHECK((g * g) == k->uniformizer());                     // reduced mod T^2 - p
    CHECK((g.inverse() * g) == k->one());
    CHECK((g + g.inverse()).val() == Magnitude::from_exp(make_rat(-1, 2)));
    CHECK(k->ram_index() == 2);
    CHECK(k->res_degree() == 1);

    TowerPtr ku = k->with_step("w", StepKind::Unramified, gen::unramified_poly(k, 2));
    CHECK(ku->ram_index() == 2);
    CHECK(ku->res_degree() == 2);
    TowerElem w = ku->gen(2);
    CHECK(w.val() == Magnitude::one());
    CHECK((w * g.lift_to(ku)).val() == Magnitude::from_exp(make_rat(1, 2)));
}

TEST_CASE("norm_resultant") {
    TowerPtr b3 = qp(3);
    UPoly<TowerElem> m(b3->zero());
    m.c = {-b3->uniformizer(), b3->zero(), b3->one()}; // T^2 - p
    m.trim();
    UPoly<TowerElem> t(b3->zero());
    t.c = {b3->zero(), b3->one()};
    CHECK(norm_resultant(m, t) == Magnitude::from_exp(make_rat(1, 2)));

    UPoly<TowerElem> t_minus_1(b3->zero());
    t_minus_1.c = {-b3->one(), b3->one()};
    CHECK(norm_resultant(m, t_minus_1) == Magnitude::one()); // |1 - p| = 1

    // degree-1 modulus: plain evaluation
    UPoly<TowerElem> lin(b3->zero());
    lin.c = {-b3->from_int(7), b3->one()}; // T - 7
    UPoly<TowerElem> g(b3->zero());
    g.c = {b3->from_int(2), b3->one()}; // T + 2: |9| = b^-2
    CHECK(norm_resultant(lin, g) == Magnitude::from_exp(Rat(2)));

    // uncertified modulus rejected
    UPoly<TowerElem> red(b3->zero());
    red.c = {-b3->one(), b3->zero(), b3->one()};
    CHECK_THROWS_AS(norm_resultant(red, t), UbError);
}

TEST_CASE("section elements") {
    TowerPtr k = qp_sqrt(3);
    // b^(-5/2) decomposes as p^2 * g
    auto se = k->section_exponents(make_rat(5, 2));
    CHECK(se.a == 2);
    CHECK(se.e == std::vector<long>{1});
    TowerElem elem = k->section_element(make_rat(5, 2));
    CHECK(elem.val() == Magnitude::from_exp(make_rat(5, 2)));
    // unit part of 2*p^2*g is 2
    TowerElem x = k->from_int(2) * elem;
    FFElem u = x.unit_residue();
    CHECK(u == FFElem{&k->residue_field(), k->residue_field().from_int(Int(2), 0)});
}
