#include <doctest.h>

#include "ultraberk/checks.hpp"

using namespace ultraberk;

TEST_CASE("tower json round trip") {
    Json doc = Json::parse(R"json({
        "base": {"kind": "p_adic", "p": 3},
        "steps": [
            {"name": "g", "kind": "eisenstein", "poly": "g^2 - p"},
            {"name": "w", "kind": "unramified", "poly": "w^2 + w + 2"}
        ]
    })json");
    TowerPtr tw = tower_from_json(doc);
    CHECK(tw->depth() == 2);
    CHECK(tw->ram_index() == 2);
    CHECK(tw->res_degree() == 2);
    TowerPtr tw2 = tower_from_json(tower_to_json(tw));
    CHECK(tw2->same_as(*tw));

    // declared kind mismatch fails loudly
    Json bad = doc;
    bad["steps"][0]["kind"] = "unramified";
    CHECK_THROWS_AS(tower_from_json(bad), UbError);

    // rejected certificate fails loudly
    Json bad2 = Json::parse(R"json({
        "base": {"kind": "p_adic", "p": 3},
        "steps": [{"name": "g", "kind": "eisenstein", "poly": "g^2 - 1"}]
    })json");
    CHECK_THROWS_AS(tower_from_json(bad2), UbError);

    Json tdoc = Json::parse(R"json({"base": {"kind": "t_adic", "p": 2, "qdeg": 2}})json");
    TowerPtr tt = tower_from_json(tdoc);
    CHECK(tt->cfg()->qdeg() == 2);
    CHECK(tt->res_degree() == 2);
}

TEST_CASE("point json round trip") {
    Json tdoc = Json::parse(R"json({
        "base": {"kind": "p_adic", "p": 3},
        "steps": [{"name": "g", "kind": "eisenstein", "poly": "g^2 - p"}]
    })json");
    TowerPtr tw = tower_from_json(tdoc);
    Json pdoc = Json::parse(R"json({
        "layers": [{"center": "g + 1", "radius": "b^(-2)"}]
    })json");
    Point x = point_from_json(pdoc, tw);
    CHECK(x.dim() == 1);
    CHECK(x.layer(1).radius == Magnitude::from_exp(Rat(2)));
    Point x2 = point_from_json(point_to_json(x), tw);
    CHECK(eval(TPoly::variable(1, 0, tw->one()), x) ==
          eval(TPoly::variable(1, 0, tw->one()), x2));

    // hensel layer document
    Json hdoc = Json::parse(R"json({
        "layers": [
            {"center": "0", "radius": "b^(-1)"},
            {"center": {"defining": "C^2 - (1 + T1)", "approx": "1", "budget": 24},
             "radius": "b^(-4)"}
        ]
    })json");
    Point h = point_from_json(hdoc, tw);
    CHECK(h.dim() == 2);
    CHECK(h.layer(2).center.hensel);
    Point h2 = point_from_json(point_to_json(h), tw);
    TPoly rel(2, tw->zero());
    rel.add_term({0, 2}, tw->one());
    rel.add_term({0, 0}, -tw->one());
    rel.add_term({1, 0}, -tw->one());
    CHECK(eval(rel, h) == eval(rel, h2));
}

TEST_CASE("selftest runs clean at reduced scale") {
    auto results = run_selftest(0x5eed, 0.12);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.ok);
    }
}
