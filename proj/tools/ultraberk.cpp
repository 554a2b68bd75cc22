#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ultraberk/checks.hpp"

namespace ub = ultraberk;
using ub::Json;

namespace {

constexpr const char* kVersion = "ultraberk 0.1.0";
constexpr const char* kSchema = "ultraberk-report/1";

Json load_doc(const std::string& arg) {
    if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return Json::parse(arg);
    std::ifstream in(arg);
    ub::require(in.good(), ub::Err::Validation, "cannot open '" + arg + "'");
    Json doc;
    in >> doc;
    return doc;
}

ub::PolyContext make_ctx(const ub::TowerPtr& tw, int n) {
    return ub::PolyContext{tw, n == 1 ? std::vector<std::string>{"T"}
                                      : ub::PolyContext::default_vars(n)};
}

struct JobInput {
    ub::TowerPtr tower;
    std::vector<ub::Point> points;
};

JobInput load_inputs(const Json& job) {
    JobInput in;
    ub::require(job.contains("tower"), ub::Err::Validation, "job needs a 'tower'");
    in.tower = ub::tower_from_json(job.at("tower").is_string()
                                       ? load_doc(job.at("tower").get<std::string>())
                                       : job.at("tower"));
    if (job.contains("points")) {
        for (const Json& jp : job.at("points")) {
            Json doc = jp.is_string() ? load_doc(jp.get<std::string>()) : jp;
            in.points.push_back(ub::point_from_json(doc, in.tower));
        }
    }
    return in;
}

ub::MultiDeg parse_budget(const Json& job, int nvars) {
    if (job.contains("multidegree")) {
        std::vector<long> e = job.at("multidegree").get<std::vector<long>>();
        ub::require(static_cast<int>(e.size()) == nvars, ub::Err::ArityMismatch,
                    "multidegree arity does not match the points");
        return ub::MultiDeg(e);
    }
    long t = job.value("total_degree", 1L);
    std::vector<long> e(nvars, 0);
    e[0] = t;
    return ub::MultiDeg(e);
}

Json run_job(const Json& job, std::uint64_t seed) {
    const std::string cmd = job.at("command").get<std::string>();
    Json result;
    Json verification;

    if (cmd == "selftest") {
        double scale = job.value("scale", 1.0);
        auto checks = ub::run_selftest(seed, scale);
        bool all = true;
        result["checks"] = Json::array();
        for (const auto& c : checks) {
            all = all && c.ok;
            result["checks"].push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
        }
        result["pass"] = all;
        ub::require(all, ub::Err::Internal, "selftest failed");
        return Json{{"result", result}, {"verification", verification}};
    }

    JobInput in = load_inputs(job);

    if (cmd == "eval") {
        ub::require(!in.points.empty(), ub::Err::Validation, "eval needs a point");
        const ub::Point& x = in.points[0];
        ub::PolyContext ctx = make_ctx(in.tower, x.dim());
        ub::TPoly p = ub::parse_poly(job.at("poly").get<std::string>(), ctx);
        if (job.value("graded", false)) {
            ub::GradedResidue g = ub::eval_graded(p, x);
            result["value"] = g.value.str();
            Json form = Json::array();
            for (const auto& [gamma, c] : g.form)
                form.push_back({{"exponents", gamma}, {"residue", c.str()}});
            result["form"] = form;
        } else {
            result["value"] = ub::eval(p, x).str();
        }
    } else if (cmd == "classify") {
        ub::require(!in.points.empty(), ub::Err::Validation, "classify needs a point");
        result["type"] = static_cast<int>(ub::classify(in.points[0]));
    } else if (cmd == "compare") {
        ub::require(in.points.size() == 2, ub::Err::Validation, "compare needs two points");
        if (in.points[0].dim() == 1) {
            ub::Order o = ub::compare_points(in.points[0], in.points[1]);
            const char* names[] = {"less", "equal", "greater", "incomparable"};
            result["order"] = names[static_cast<int>(o)];
        } else {
            int samples = job.value("samples", 64);
            ub::SampledOrder o =
                ub::compare_points_sampled(in.points[0], in.points[1], samples, seed);
            const char* names[] = {"less-evidence", "greater-evidence", "incomparable-evidence",
                                   "unknown"};
            result["order"] = names[static_cast<int>(o)];
            result["sampled"] = true;
        }
    } else if (cmd == "approx") {
        ub::require(!in.points.empty(), ub::Err::Validation, "approx needs a point");
        const ub::Point& x = in.points[0];
        long dmax = job.value("dmax", 3L);
        ub::Approx1D chain = ub::approximate_1d(x, dmax);
        result = ub::approx1d_to_json(chain, x);
        int samples = job.value("samples", 100);
        Json idblock = Json::array();
        ub::Rng rng(seed);
        bool all = true;
        for (const auto& entry : chain.entries) {
            auto pts = std::span<const ub::Point>(&x, 1);
            ub::LemmaReport rep =
                ub::lemma_check(pts, ub::MultiDeg({entry.degree}), entry.r0, entry.r, samples,
                                rng.next());
            all = all && rep.pass();
            idblock.push_back({{"degree", entry.degree},
                               {"samples", rep.samples},
                               {"failures", rep.failures},
                               {"detail", rep.first_failure}});
        }
        verification["identity_checks"] = idblock;
        verification["pass"] = all;
    } else if (cmd == "sdk") {
        ub::require(!in.points.empty(), ub::Err::Validation, "sdk needs at least one point");
        ub::MultiDeg budget = parse_budget(job, in.points[0].dim());
        auto pts = std::span<const ub::Point>(in.points.data(), in.points.size());
        ub::SdkSet s = ub::approximate_nd(pts, budget);
        result = ub::sdk_to_json(s);
        int samples = job.value("samples", 25);
        ub::Rng rng(seed);
        bool all = true;
        Json blocks = Json::array();
        for (const auto& entry : s.entries) {
            ub::LemmaReport rep = ub::lemma_check(pts, entry.e, entry.r0, entry.r, samples, rng.next());
            bool member = true;
            for (const auto& x : in.points) member = member && (ub::eval(entry.r0, x) <= entry.r);
            all = all && rep.pass() && member;
            blocks.push_back({{"multidegree", entry.e.e},
                              {"identity_failures", rep.failures},
                              {"source_membership", member}});
        }
        verification["entries"] = blocks;
        verification["pass"] = all;
    } else if (cmd == "formula") {
        ub::require(!in.points.empty(), ub::Err::Validation, "formula needs a point");
        const ub::Point& x = in.points[0];
        std::vector<ub::BaseElem> y;
        if (job.contains("fiber")) {
            for (const Json& v : job.at("fiber"))
                y.push_back(ub::BaseElem::from_rat(in.tower->cfg(), ub::rat_parse(v.get<std::string>())));
        }
        const int total_vars = x.dim() + static_cast<int>(y.size());
        ub::PolyContext ctx{in.tower, ub::PolyContext::default_vars(total_vars)};
        // trailing variables are the fiber coordinates
        for (size_t j = 0; j < y.size(); ++j)
            ctx.vars[x.dim() + j] = "U" + std::to_string(j + 1);
        ub::Formula phi = ub::parse_formula(job.at("formula").get<std::string>(), ctx);
        ub::FiberResult fr = ub::fiber_membership(x, phi, y);
        result["member"] = fr.member;
        result["hypothesis_ok"] = fr.hypothesis_ok;
        result["strict"] = ub::is_strict(phi, in.tower);
        if (!fr.note.empty()) result["note"] = fr.note;
        result["formula"] = ub::formula_str(phi, ctx);
        // certificate block: the envelope of x at the formula's T-degree plus
        // the universal/existential comparison template it supports
        long tdeg = 1;
        std::vector<const ub::TPoly*> polys;
        std::function<void(const ub::Formula&)> walk = [&](const ub::Formula& f) {
            if (f.kind == ub::Formula::Kind::Atom) {
                for (const auto& [e, v] : f.atom->p.t) {
                    long t = 0;
                    for (int i = 0; i < x.dim(); ++i) t += e[i];
                    tdeg = std::max(tdeg, t);
                }
                for (const auto& [e, v] : f.atom->q.t) {
                    long t = 0;
                    for (int i = 0; i < x.dim(); ++i) t += e[i];
                    tdeg = std::max(tdeg, t);
                }
                return;
            }
            for (const auto& k : f.kids) walk(k);
        };
        walk(phi);
        auto pts = std::span<const ub::Point>(&x, 1);
        ub::SdkSet cert = ub::approximate_nd_total(pts, tdeg, x.dim());
        verification["certificate"] = ub::sdk_to_json(cert);
        verification["certificate"]["template"] =
            "decision template: |Q(x,y)| <= |R(x,y)| holds iff for every point a of the "
            "envelope S there is a point b of S with |Q(a,y)| <= |R(b,y)|";
    } else if (cmd == "oracle") {
        ub::require(!in.points.empty(), ub::Err::Validation, "oracle needs a point");
        ub::MultiDeg d = parse_budget(job, in.points[0].dim());
        ub::LatticeWindow w;
        w.lo = ub::rat_parse(job.value("lo", std::string("-6")));
        w.hi = ub::rat_parse(job.value("hi", std::string("6")));
        w.den = job.value("den", 1L);
        w.depth = job.value("depth", 6);
        w.max_nodes = job.value("max_nodes", 2000000L);
        auto pts = std::span<const ub::Point>(in.points.data(), in.points.size());
        ub::BestMonic bm = ub::best_monic(pts, d);
        ub::BruteForceResult bf = ub::brute_force_min(pts, d, w);
        ub::PolyContext ctx = make_ctx(in.tower, in.points[0].dim());
        bool contained = ub::window_contains(bm.r0, d, w);
        result["descent_r"] = bm.r.str();
        result["descent_r0"] = ub::poly_str(bm.r0, ctx);
        result["oracle_min"] = bf.min.str();
        result["oracle_nodes"] = bf.nodes;
        result["window_contains_witness"] = contained;
        verification["agreement"] = !contained || bf.min == bm.r;
        ub::require(!contained || bf.min == bm.r, ub::Err::Internal,
                    "oracle disagrees with the descent on a contained witness");
    } else {
        ub::fail(ub::Err::Validation, "unknown command '" + cmd + "'");
    }
    return Json{{"result", result}, {"verification", verification}};
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Exact computations on points of non-Archimedean affine spaces"};
    app.set_version_flag("--version", kVersion);

    std::uint64_t seed = ub::default_seed();
    app.add_option("--seed", seed, "seed for sampled checks (or ULTRABERK_SEED)");

    std::string tower_arg, poly_arg, formula_arg, job_arg;
    std::vector<std::string> point_args, fiber_args;
    long dmax = 3, total_degree = 1;
    std::vector<long> multideg;
    int samples = 100;
    double scale = 1.0;
    std::string lo = "-6", hi = "6";
    long den = 1, max_nodes = 2000000;
    int depth = 6;
    bool graded = false;

    auto add_common = [&](CLI::App* sub, bool needs_point) {
        sub->add_option("--tower", tower_arg, "tower document (path or inline JSON)")->required();
        auto* opt = sub->add_option("--point", point_args, "point document (path or inline JSON)");
        if (needs_point) opt->required();
    };

    CLI::App* c_eval = app.add_subcommand("eval", "evaluate |P(x)|");
    add_common(c_eval, true);
    c_eval->add_option("--poly", poly_arg, "polynomial text")->required();
    c_eval->add_flag("--graded", graded, "also report the leading residue form");

    CLI::App* c_classify = app.add_subcommand("classify", "type of a dim-1 point");
    add_common(c_classify, true);

    CLI::App* c_compare = app.add_subcommand("compare", "order of two points");
    add_common(c_compare, true);
    c_compare->add_option("--samples", samples, "sample count in dimension > 1");

    CLI::App* c_approx = app.add_subcommand("approx", "degree-by-degree approximation chain");
    add_common(c_approx, true);
    c_approx->add_option("--dmax", dmax, "largest degree");
    c_approx->add_option("--samples", samples, "identity check sample count");

    CLI::App* c_sdk = app.add_subcommand("sdk", "defining pairs of the degree-d envelope");
    add_common(c_sdk, true);
    c_sdk->add_option("--total-degree", total_degree, "total degree budget");
    c_sdk->add_option("--multideg", multideg, "exact multidegree budget");
    c_sdk->add_option("--samples", samples, "identity check sample count");

    CLI::App* c_formula = app.add_subcommand("formula", "semi-algebraic membership");
    add_common(c_formula, true);
    c_formula->add_option("--formula", formula_arg, "formula text")->required();
    c_formula->add_option("--fiber", fiber_args, "rational values for the trailing variables");

    CLI::App* c_oracle = app.add_subcommand("oracle", "brute-force minimization cross-check");
    add_common(c_oracle, true);
    c_oracle->add_option("--total-degree", total_degree, "total degree budget");
    c_oracle->add_option("--multideg", multideg, "exact multidegree budget");
    c_oracle->add_option("--lo", lo, "lowest digit exponent");
    c_oracle->add_option("--hi", hi, "highest digit exponent");
    c_oracle->add_option("--den", den, "exponent denominator bound");
    c_oracle->add_option("--depth", depth, "digits per coefficient");
    c_oracle->add_option("--max-nodes", max_nodes, "search node guard");

    CLI::App* c_selftest = app.add_subcommand("selftest", "run the module invariant suites");
    c_selftest->add_option("--scale", scale, "sample count scale factor");

    CLI::App* c_job = app.add_subcommand("job", "run a job document");
    c_job->add_option("job", job_arg, "job document (path or inline JSON)")->required();

    app.require_subcommand(1);
    CLI11_PARSE(app, argc, argv);

    Json job;
    if (c_job->parsed()) {
        job = load_doc(job_arg);
    } else {
        if (c_eval->parsed()) job["command"] = "eval";
        if (c_classify->parsed()) job["command"] = "classify";
        if (c_compare->parsed()) job["command"] = "compare";
        if (c_approx->parsed()) job["command"] = "approx";
        if (c_sdk->parsed()) job["command"] = "sdk";
        if (c_formula->parsed()) job["command"] = "formula";
        if (c_oracle->parsed()) job["command"] = "oracle";
        if (c_selftest->parsed()) job["command"] = "selftest";
        if (!tower_arg.empty()) job["tower"] = tower_arg;
        if (!point_args.empty()) {
            job["points"] = Json::array();
            for (const auto& p : point_args) job["points"].push_back(p);
        }
        if (c_eval->parsed()) {
            job["poly"] = poly_arg;
            if (graded) job["graded"] = true;
        }
        if (c_approx->parsed()) {
            job["dmax"] = dmax;
            job["samples"] = samples;
        }
        if (c_compare->parsed()) job["samples"] = samples;
        if (c_sdk->parsed() || c_oracle->parsed()) {
            if (!multideg.empty())
                job["multidegree"] = multideg;
            else
                job["total_degree"] = total_degree;
            if (c_sdk->parsed()) job["samples"] = samples;
        }
        if (c_formula->parsed()) {
            job["formula"] = formula_arg;
            if (!fiber_args.empty()) {
                job["fiber"] = Json::array();
                for (const auto& v : fiber_args) job["fiber"].push_back(v);
            }
        }
        if (c_oracle->parsed()) {
            job["lo"] = lo;
            job["hi"] = hi;
            job["den"] = den;
            job["depth"] = depth;
            job["max_nodes"] = max_nodes;
        }
        if (c_selftest->parsed()) job["scale"] = scale;
    }

    Json report;
    report["schema"] = kSchema;
    report["version"] = kVersion;
    report["seed"] = seed;
    report["job"] = job;
    int code = 0;
    try {
        Json out = run_job(job, seed);
        report["result"] = out["result"];
        report["verification"] = out["verification"];
        report["ok"] = true;
    } catch (const ub::UbError& e) {
        report["ok"] = false;
        report["error"] = {{"code", ub::err_name(e.code())}, {"message", e.what()}};
        switch (e.code()) {
            case ub::Err::InsufficientPrecision: code = 2; break;
            case ub::Err::Internal: code = 3; break;
            default: code = 1; break;
        }
    } catch (const std::exception& e) {
        report["ok"] = false;
        report["error"] = {{"code", "Exception"}, {"message", e.what()}};
        code = 1;
    }
    std::cout << report.dump(2) << std::endl;
    return code;
}

} // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
