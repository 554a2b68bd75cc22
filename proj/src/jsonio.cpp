#include "ultraberk/jsonio.hpp"

namespace ultraberk {

namespace {

UPoly<TowerElem> to_upoly(const TPoly& p) {
    UPoly<TowerElem> out(p.z);
    for (const auto& [e, v] : p.t) {
        long d = e[0];
        if (static_cast<long>(out.c.size()) <= d) out.c.resize(d + 1, out.z);
        out.c[d] = v;
    }
    out.trim();
    return out;
}

StepKind kind_from_string(const std::string& s) {
    if (s == "unramified") return StepKind::Unramified;
    if (s == "eisenstein") return StepKind::Eisenstein;
    fail(Err::Validation, "unknown step kind '" + s + "'");
}

std::string kind_to_string(StepKind k) {
    return k == StepKind::Unramified ? "unramified" : "eisenstein";
}

} // namespace

TowerPtr tower_from_json(const Json& doc) {
    require(doc.contains("base"), Err::Validation, "tower document needs a 'base' object");
    const Json& base = doc.at("base");
    std::string kind = base.at("kind").get<std::string>();
    BaseCfgPtr cfg;
    if (kind == "p_adic") {
        cfg = BaseFieldCfg::p_adic(Int(base.at("p").get<long>()));
    } else if (kind == "t_adic") {
        int qdeg = base.value("qdeg", 1);
        bool trivial = base.value("trivial", false);
        cfg = BaseFieldCfg::t_adic(Int(base.at("p").get<long>()), qdeg, trivial);
    } else {
        fail(Err::Validation, "unknown base kind '" + kind + "'");
    }
    TowerPtr tw = Tower::base(cfg);
    if (doc.contains("steps")) {
        for (const Json& st : doc.at("steps")) {
            std::string name = st.at("name").get<std::string>();
            StepKind declared = kind_from_string(st.at("kind").get<std::string>());
            PolyContext ctx{tw, {name}};
            TPoly mp = parse_poly(st.at("poly").get<std::string>(), ctx);
            tw = tw->with_step(name, declared, to_upoly(mp));
        }
    }
    return tw;
}

Json tower_to_json(const TowerPtr& tw) {
    Json doc;
    const auto& cfg = tw->cfg();
    if (cfg->kind() == BaseFieldCfg::Kind::p_adic) {
        doc["base"] = {{"kind", "p_adic"}, {"p", to_long(cfg->p())}};
    } else {
        doc["base"] = {{"kind", "t_adic"},
                       {"p", to_long(cfg->p())},
                       {"qdeg", cfg->qdeg()},
                       {"trivial", cfg->trivial()}};
    }
    doc["steps"] = Json::array();
    for (int i = 1; i <= tw->depth(); ++i) {
        const Step& st = tw->step(i);
        // print the minimal polynomial in the generator's own name
        std::string text;
        for (size_t j = st.minpoly.size(); j-- > 0;) {
            // reconstruct coefficient at level i-1 as an element of the full tower
            // by printing at its own level
            std::string c = tw->nstr(st.minpoly[j], i - 1);
            if (c == "0") continue;
            std::string term;
            if (j == 0) {
                term = c;
            } else {
                if (c.find_first_of("+-*/ ") != std::string::npos) c = "(" + c + ")";
                term = (c == "1") ? st.name : c + "*" + st.name;
                if (j >= 2) term += "^" + std::to_string(j);
            }
            if (text.empty())
                text = term;
            else
                text += " + " + term;
        }
        doc["steps"].push_back(
            {{"name", st.name}, {"kind", kind_to_string(st.kind)}, {"poly", text}});
    }
    return doc;
}

Point point_from_json(const Json& doc, const TowerPtr& tw) {
    require(doc.contains("layers"), Err::Validation, "point document needs a 'layers' array");
    const Json& jlayers = doc.at("layers");
    const int n = static_cast<int>(jlayers.size());
    std::vector<std::string> vars = PolyContext::default_vars(n);
    std::vector<Layer> layers;
    int i = 1;
    for (const Json& jl : jlayers) {
        Layer L;
        L.radius = Magnitude::parse(jl.at("radius").get<std::string>());
        const Json& jc = jl.at("center");
        if (jc.is_string()) {
            PolyContext ctx{tw, vars};
            L.center = FiberElem::make_exact(parse_poly(jc.get<std::string>(), ctx));
        } else {
            std::vector<std::string> dvars = vars;
            dvars[i - 1] = jc.value("var", std::string("C"));
            PolyContext dctx{tw, dvars};
            PolyContext actx{tw, vars};
            TPoly defining = parse_poly(jc.at("defining").get<std::string>(), dctx);
            TPoly approx = parse_poly(jc.at("approx").get<std::string>(), actx);
            int budget = jc.value("budget", 24);
            L.center = FiberElem::make_hensel(std::move(defining), std::move(approx), budget);
        }
        layers.push_back(std::move(L));
        ++i;
    }
    return Point(tw, std::move(layers));
}

Json point_to_json(const Point& x) {
    Json doc;
    doc["layers"] = Json::array();
    const int n = x.dim();
    std::vector<std::string> vars = PolyContext::default_vars(n);
    PolyContext ctx{x.tower(), vars};
    for (int i = 1; i <= n; ++i) {
        const Layer& l = x.layer(i);
        Json jl;
        jl["radius"] = l.radius.str();
        if (!l.center.hensel) {
            jl["center"] = poly_str(l.center.exact, ctx);
        } else {
            std::vector<std::string> dvars = vars;
            dvars[i - 1] = "C";
            PolyContext dctx{x.tower(), dvars};
            TPoly approx;
            {
                std::lock_guard<std::mutex> lock(l.center.state->mu);
                approx = l.center.state->approx;
            }
            jl["center"] = {{"defining", poly_str(l.center.defining, dctx)},
                            {"approx", poly_str(l.center.exact, ctx)},
                            {"budget", l.center.budget}};
            jl["refined_approx"] = poly_str(approx, ctx);
        }
        doc["layers"].push_back(std::move(jl));
    }
    return doc;
}

Json approx1d_to_json(const Approx1D& a, const Point& x) {
    Json out;
    out["entries"] = Json::array();
    PolyContext ctx{x.tower(), {"T"}};
    for (const auto& e : a.entries) {
        out["entries"].push_back({{"degree", e.degree},
                                  {"R0", poly_str(e.r0, ctx)},
                                  {"r", e.r.str()},
                                  {"stabilized", e.stabilized}});
    }
    return out;
}

Json sdk_to_json(const SdkSet& s) {
    Json out;
    require(!s.source.empty(), Err::Internal, "SdkSet without source points");
    PolyContext ctx{s.source[0].tower(), PolyContext::default_vars(s.source[0].dim())};
    out["budget"] = s.budget.str();
    out["entries"] = Json::array();
    for (const auto& e : s.entries) {
        out["entries"].push_back(
            {{"multidegree", e.e.e}, {"R0", poly_str(e.r0, ctx)}, {"r", e.r.str()}});
    }
    return out;
}

Json magnitude_to_json(const Magnitude& m) { return Json(m.str()); }

} // namespace ultraberk
