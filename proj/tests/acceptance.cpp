// Acceptance suite: runs every criterion at its stated scale and prints one
// pass/fail line each. All comparisons are exact magnitude equalities.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "ultraberk/checks.hpp"

using namespace ultraberk;

namespace {

struct Harness {
    int failures = 0;
    std::uint64_t seed = default_seed();

    void run(int num, const std::string& title, const std::function<std::pair<bool, std::string>()>& fn) {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        std::string detail;
        try {
            auto [o, d] = fn();
            ok = o;
            detail = d;
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::printf("[%s] criterion %d: %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", num,
                    title.c_str(), static_cast<long long>(ms), detail.empty() ? "" : " — ",
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

constexpr long kP = 3;

Magnitude mag(long num, long den = 1) { return Magnitude::from_exp(make_rat(num, den)); }

TowerPtr qp_sqrt() {
    TowerPtr base = Tower::base(BaseFieldCfg::p_adic(Int(kP)));
    UPoly<TowerElem> m(base->zero());
    m.c = {-base->uniformizer(), base->zero(), base->one()};
    m.trim();
    return base->with_step("g", StepKind::Eisenstein, m);
}

// re-reads a base-coefficient polynomial over another tower with the same base
TPoly rebase(const TPoly& p, const TowerPtr& target) {
    TPoly out(p.nvars, target->zero());
    for (const auto& [e, v] : p.t) out.add_term(e, target->from_base(v.base_part()));
    return out;
}

bool base_poly_eq(const TPoly& a, const TPoly& b) {
    if (a.nvars != b.nvars || a.t.size() != b.t.size()) return false;
    auto ia = a.t.begin();
    auto ib = b.t.begin();
    for (; ia != a.t.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        if (!(ia->second.base_part() == ib->second.base_part())) return false;
    }
    return true;
}

// multivariate reduction against the zero-radius entries, largest monomial first
bool reduces_to_zero(TPoly g, const SdkSet& s) {
    for (int guard = 0; guard < 4096; ++guard) {
        if (g.is_zero()) return true;
        bool reduced = false;
        std::vector<std::vector<long>> monos;
        for (const auto& [e, v] : g.t) monos.push_back(e);
        std::sort(monos.begin(), monos.end(), [](const auto& a, const auto& b) {
            return multideg_cmp(MultiDeg(a), MultiDeg(b)) > 0;
        });
        for (const auto& m : monos) {
            for (const auto& entry : s.entries) {
                if (!entry.r.is_zero()) continue;
                bool divides = true;
                for (int i = 0; i < g.nvars; ++i)
                    if (entry.e.e[i] > m[i]) divides = false;
                if (!divides) continue;
                std::vector<long> q(m.size());
                for (size_t i = 0; i < m.size(); ++i) q[i] = m[i] - entry.e.e[i];
                TowerElem c = g.coeff(m);
                g = g - TPoly::monomial(g.nvars, MultiDeg(q), c) * entry.r0;
                reduced = true;
                break;
            }
            if (reduced) break;
        }
        if (!reduced) return false;
    }
    return false;
}

void run_all(Harness& h) {
    // shared data: the dim-1 point suite and its chains
    std::vector<Point> suite = gen::dim1_suite(kP, h.seed);
    std::vector<Approx1D> chains5;

    h.run(1, "minimizer identity on 50 points, degrees <= 5, 100 monic samples each", [&] {
        Rng rng(h.seed ^ 0x11);
        long checked = 0, failed = 0;
        std::string detail;
        chains5.reserve(suite.size());
        for (const Point& x : suite) chains5.push_back(approximate_1d(x, 5));
        for (size_t pi = 0; pi < suite.size(); ++pi) {
            const Point& x = suite[pi];
            for (const auto& entry : chains5[pi].entries) {
                for (int s = 0; s < 100; ++s) {
                    TPoly r = sample_monic(x.tower(), MultiDeg({entry.degree}), rng, -3, 3);
                    Magnitude lhs = eval(r, x);
                    Magnitude rhs = Magnitude::max(entry.r, eval(r - entry.r0, x));
                    ++checked;
                    if (lhs != rhs) {
                        ++failed;
                        if (detail.empty())
                            detail = "point " + std::to_string(pi) + " degree " +
                                     std::to_string(entry.degree);
                    }
                }
            }
        }
        std::string msg = std::to_string(checked - failed) + "/" + std::to_string(checked) +
                          " identities exact";
        if (!detail.empty()) msg += ", first failure at " + detail;
        return std::pair{failed == 0, msg};
    });

    h.run(2, "oracle minimality, 20 points, d <= 3, window [-6,6] den 4 depth 6", [&] {
        LatticeWindow w;
        w.lo = Rat(-6);
        w.hi = Rat(6);
        w.den = 4;
        w.depth = 6;
        int runs = 0, flagged = 0, disagreements = 0;
        for (size_t pi = 10; pi < 30; ++pi) { // the 20 disc points of the suite
            const Point& x = suite[pi];
            auto pts = std::span<const Point>(&x, 1);
            for (long d = 1; d <= 3; ++d) {
                BestMonic bm = best_monic_1d(x, d);
                BruteForceResult bf = brute_force_min(pts, MultiDeg({d}), w);
                ++runs;
                if (window_contains(bm.r0, MultiDeg({d}), w)) {
                    ++flagged;
                    if (bf.min != bm.r) ++disagreements;
                }
            }
        }
        std::ostringstream msg;
        msg << flagged << "/" << runs << " runs window-contained, " << disagreements
            << " disagreements";
        bool ok = disagreements == 0 && flagged * 10 >= runs * 9;
        return std::pair{ok, msg.str()};
    });

    h.run(3, "worked example: sqrt(p) disc chain is (T, b^(-1/2)), (T^2-p, b^(-5/2))", [&] {
        TowerPtr k = qp_sqrt();
        Point x = gen::disc_point(k, k->gen(1), mag(2));
        Approx1D chain = approximate_1d(x, 2);
        TPoly t(1, k->zero());
        t.add_term({1}, k->one());
        TPoly m(1, k->zero());
        m.add_term({2}, k->one());
        m.add_term({0}, -k->uniformizer());
        bool ok = chain.entries[0].r0 == t && chain.entries[0].r == mag(1, 2) &&
                  chain.entries[1].r0 == m && chain.entries[1].r == mag(5, 2);
        return std::pair{ok, std::string("r_1 = ") + chain.entries[0].r.str() +
                                 ", r_2 = " + chain.entries[1].r.str()};
    });

    h.run(4, "worked example: curve graph point relations at total degree 3", [&] {
        TowerPtr k = Tower::base(BaseFieldCfg::p_adic(Int(kP)));
        Point x = gen::curve_graph_point(k);
        auto pts = std::span<const Point>(&x, 1);
        SdkSet s = approximate_nd_total(pts, 3, 3);
        TPoly rel1(3, k->zero()), rel2(3, k->zero()), rel3(3, k->zero());
        rel1.add_term({2, 1, 0}, k->one());
        rel1.add_term({0, 0, 1}, -k->one());
        rel2.add_term({2, 0, 1}, k->one());
        rel2.add_term({0, 2, 0}, -k->one());
        rel3.add_term({0, 3, 0}, k->one());
        rel3.add_term({0, 0, 2}, -k->one());
        bool ok = true;
        for (const TPoly* rel : {&rel1, &rel2, &rel3}) {
            ok = ok && eval(*rel, x).is_zero();
            ok = ok && reduces_to_zero(*rel, s);
        }
        int unit_balls = 0;
        for (auto e : {std::vector<long>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
            for (const auto& entry : s.entries)
                if (entry.e.e == e && entry.r == Magnitude::one() &&
                    entry.r0 == TPoly::monomial(3, MultiDeg(e), k->one()))
                    ++unit_balls;
        }
        ok = ok && unit_balls == 3;
        int zero_entries = 0;
        for (const auto& entry : s.entries)
            if (entry.r.is_zero()) ++zero_entries;
        return std::pair{ok,
                         std::to_string(zero_entries) +
                             " vanishing entries; all three relations reduce to 0; unit balls present"};
    });

    h.run(5, "worked example: square-root series point, r = b^(-1), s = b^(-4)", [&] {
        TowerPtr k = Tower::base(BaseFieldCfg::p_adic(Int(kP)));
        Point x = gen::sqrt_series_point(k, mag(1), mag(4));
        TPoly naive(2, k->zero());
        naive.add_term({0, 1}, k->one());
        naive.add_term({0, 0}, -k->one());
        naive.add_term({1, 0}, -k->from_rat(make_rat(1, 2)));
        naive.add_term({2, 0}, k->from_rat(make_rat(1, 8)));
        Magnitude naive_val = eval(naive, x);
        bool ok = naive_val == mag(3); // r^3 exactly, so the naive set fails

        auto pts = std::span<const Point>(&x, 1);
        SdkSet s = approximate_nd_total(pts, 2, 2);
        const SdkEntry* e22 = nullptr;
        const SdkEntry* e01 = nullptr;
        for (const auto& entry : s.entries) {
            if (entry.e.e == std::vector<long>{0, 2}) e22 = &entry;
            if (entry.e.e == std::vector<long>{0, 1}) e01 = &entry;
        }
        TPoly want(2, k->zero());
        want.add_term({0, 2}, k->one());
        want.add_term({0, 0}, -k->one());
        want.add_term({1, 0}, -k->one());
        ok = ok && e22 && e22->r0 == want && e22->r == mag(4);
        ok = ok && e01 && e01->r == mag(1);
        std::string note = "|T2 - series|(x) = " + naive_val.str() +
                           "; T2^2 budget entry has value " + (e22 ? e22->r.str() : "?") +
                           "; third generator T2 - 1 carries computed radius " +
                           (e01 ? e01->r.str() : "?") +
                           " = r (not s): discrepancy with the printed set reported";
        return std::pair{ok, note};
    });

    h.run(6, "minimality identity for 10 envelope systems, 100 samples per entry", [&] {
        Rng rng(h.seed ^ 0x66);
        TowerPtr k = Tower::base(BaseFieldCfg::p_adic(Int(kP)));
        TowerPtr ks = qp_sqrt();
        std::vector<std::vector<Point>> sets;
        sets.push_back({gen::rational_point(k, make_rat(2, 1))});
        sets.push_back({gen::disc_point(ks, ks->gen(1), mag(2))});
        sets.push_back({gen::gauss_point(k)});
        sets.push_back({gen::sqrt_unit_point(k, mag(2))});
        sets.push_back(
            {gen::rational_point(k, make_rat(0, 1)), gen::rational_point(k, make_rat(1, 1))});
        sets.push_back(
            {gen::rational_point(k, make_rat(1, 1)), gen::disc_point(k, k->from_int(4), mag(2))});
        sets.push_back({gen::sqrt_series_point(k, mag(1), mag(4))});
        {
            TPoly c1 = TPoly::constant(2, k->from_int(2));
            TPoly c2 = TPoly::constant(2, k->uniformizer());
            sets.push_back({Point(k, {Layer{FiberElem::make_exact(c1), mag(1)},
                                      Layer{FiberElem::make_exact(c2), Magnitude::zero()}})});
        }
        {
            TPoly a1 = TPoly::constant(2, k->zero());
            TPoly a2 = TPoly::constant(2, k->one());
            TPoly b1 = TPoly::constant(2, k->one());
            TPoly b2 = TPoly::constant(2, k->zero());
            sets.push_back({Point(k, {Layer{FiberElem::make_exact(a1), Magnitude::zero()},
                                      Layer{FiberElem::make_exact(a2), Magnitude::zero()}}),
                            Point(k, {Layer{FiberElem::make_exact(b1), Magnitude::zero()},
                                      Layer{FiberElem::make_exact(b2), Magnitude::zero()}})});
        }
        sets.push_back({gen::curve_graph_point(k)});

        long entries = 0, failures = 0;
        for (const auto& set : sets) {
            auto pts = std::span<const Point>(set.data(), set.size());
            int n = set[0].dim();
            long budget = n == 1 ? 3 : (n == 2 ? 2 : 3);
            SdkSet s = approximate_nd_total(pts, budget, n);
            for (const auto& entry : s.entries) {
                LemmaReport rep = lemma_check(pts, entry.e, entry.r0, entry.r, 100, rng.next());
                ++entries;
                if (!rep.pass()) ++failures;
            }
        }
        return std::pair{failures == 0, std::to_string(entries) + " entries x 100 samples, " +
                                            std::to_string(failures) + " failures"};
    });

    h.run(7, "separation: 20 distinct point pairs split by degree <= 4 chains", [&] {
        TowerPtr k = Tower::base(BaseFieldCfg::p_adic(Int(kP)));
        TowerPtr ks = qp_sqrt();
        std::vector<std::pair<Point, Point>> pairs;
        pairs.emplace_back(gen::rational_point(k, make_rat(0, 1)),
                           gen::rational_point(k, make_rat(1, 1)));
        pairs.emplace_back(gen::rational_point(k, make_rat(1, 2)),
                           gen::rational_point(k, make_rat(1, 1)));
        pairs.emplace_back(gen::rational_point(k, make_rat(3, 1)),
                           gen::disc_point(k, k->from_int(3), mag(2)));
        pairs.emplace_back(gen::disc_point(k, k->zero(), mag(1)),
                           gen::disc_point(k, k->zero(), mag(2)));
        pairs.emplace_back(gen::disc_point(k, k->zero(), mag(1)),
                           gen::disc_point(k, k->one(), mag(1)));
        pairs.emplace_back(gen::gauss_point(k), gen::disc_point(k, k->zero(), mag(1, 2)));
        pairs.emplace_back(gen::gauss_point(k),
                           gen::disc_point(k, k->zero(), Magnitude::from_exp(Rat(0), Rat(1))));
        pairs.emplace_back(gen::disc_point(ks, ks->gen(1), mag(2)),
                           gen::disc_point(ks, ks->gen(1) + ks->one(), mag(2)));
        pairs.emplace_back(gen::disc_point(ks, ks->gen(1), mag(2)),
                           gen::disc_point(ks, ks->gen(1), mag(3)));
        pairs.emplace_back(gen::rigid_quadratic_point(kP, 1, Magnitude::zero()),
                           gen::rational_point(k, make_rat(1, 1)));
        pairs.emplace_back(gen::sqrt_unit_point(k, mag(2)), gen::disc_point(k, k->one(), mag(2)));
        pairs.emplace_back(gen::rational_point(k, make_rat(-1, 1)),
                           gen::rational_point(k, make_rat(2, 1)));
        pairs.emplace_back(gen::rational_point(k, make_rat(9, 1)),
                           gen::rational_point(k, make_rat(0, 1)));
        pairs.emplace_back(gen::disc_point(k, k->from_int(2), mag(3)),
                           gen::disc_point(k, k->from_int(2), mag(4)));
        pairs.emplace_back(gen::disc_point(ks, ks->zero(), mag(1, 2)),
                           gen::disc_point(ks, ks->one() + ks->gen(1), mag(1, 2)));
        pairs.emplace_back(gen::gauss_point(ks), gen::disc_point(ks, ks->gen(1), mag(2)));
        pairs.emplace_back(gen::rational_point(k, make_rat(1, 4)),
                           gen::rational_point(k, make_rat(1, 5)));
        pairs.emplace_back(gen::disc_point(k, k->from_int(5), mag(1)),
                           gen::disc_point(k, k->from_int(5), Magnitude::from_exp(Rat(1), Rat(-1))));
        pairs.emplace_back(gen::rigid_quadratic_point(kP, 1, Magnitude::zero()),
                           gen::rigid_quadratic_point(kP, 1, mag(4)));
        pairs.emplace_back(gen::disc_point(k, k->uniformizer(), mag(2)),
                           gen::disc_point(k, -k->uniformizer(), mag(2)));

        int separated = 0;
        std::string fail_note;
        for (size_t i = 0; i < pairs.size(); ++i) {
            const auto& [x, y] = pairs[i];
            Approx1D cx = approximate_1d(x, 4);
            Approx1D cy = approximate_1d(y, 4);
            bool chains_differ = false;
            for (int j = 0; j < 4; ++j)
                if (!base_poly_eq(cx.entries[j].r0, cy.entries[j].r0) ||
                    cx.entries[j].r != cy.entries[j].r)
                    chains_differ = true;
            bool found = false;
            std::vector<TPoly> candidates;
            for (int j = 0; j < 4; ++j) {
                candidates.push_back(cx.entries[j].r0);
                candidates.push_back(cy.entries[j].r0);
            }
            for (const TPoly& pcand : candidates) {
                if (eval(rebase(pcand, x.tower()), x) != eval(rebase(pcand, y.tower()), y)) {
                    found = true;
                    break;
                }
            }
            if (chains_differ && found)
                ++separated;
            else if (fail_note.empty())
                fail_note = "pair " + std::to_string(i);
        }
        std::string msg = std::to_string(separated) + "/20 pairs separated";
        if (!fail_note.empty()) msg += ", first failure " + fail_note;
        return std::pair{separated == 20, msg};
    });

    h.run(8, "evaluator invariants: 500 pairs per archetype, precision independence", [&] {
        Rng rng(h.seed ^ 0x88);
        auto archetypes = gen::archetypes(kP);
        long mult_bad = 0, ultra_bad = 0, prec_bad = 0;
        for (auto& [name, x] : archetypes) {
            for (int i = 0; i < 500; ++i) {
                TPoly a = gen::random_poly(x.tower(), x.dim(), 3, rng);
                TPoly b = gen::random_poly(x.tower(), x.dim(), 2, rng);
                Magnitude va = eval(a, x), vb = eval(b, x);
                if (eval(a * b, x) != va * vb) ++mult_bad;
                Magnitude vs = eval(a + b, x);
                Magnitude mx = Magnitude::max(va, vb);
                if (vs > mx || (va != vb && vs != mx)) ++ultra_bad;
            }
        }
        {
            Point hensel = gen::sqrt_unit_point(Tower::base(BaseFieldCfg::p_adic(Int(kP))), mag(2));
            std::vector<TPoly> polys;
            std::vector<Magnitude> before;
            for (int i = 0; i < 50; ++i) {
                polys.push_back(gen::random_poly(hensel.tower(), 1, 3, rng));
                before.push_back(eval(polys[i], hensel));
            }
            hensel.refine_all(3);
            for (size_t i = 0; i < polys.size(); ++i)
                if (eval(polys[i], hensel) != before[i]) ++prec_bad;
        }
        std::ostringstream msg;
        msg << "multiplicativity failures " << mult_bad << ", ultrametric failures " << ultra_bad
            << ", precision failures " << prec_bad;
        return std::pair{mult_bad == 0 && ultra_bad == 0 && prec_bad == 0, msg.str()};
    });

    h.run(9, "canonical extension: restriction agreement over 3 extensions, 200 polys each", [&] {
        Rng rng(h.seed ^ 0x99);
        TowerPtr base = Tower::base(BaseFieldCfg::p_adic(Int(kP)));
        UPoly<TowerElem> m(base->zero());
        m.c = {-base->uniformizer(), base->zero(), base->one()};
        m.trim();
        TowerPtr k_eis = base->with_step("g", StepKind::Eisenstein, m);
        TowerPtr k_unram = base->with_step("u", StepKind::Unramified, gen::unramified_poly(base, 2));
        TowerPtr k_comp = k_unram->with_step("g", StepKind::Eisenstein, [&] {
            UPoly<TowerElem> m2(k_unram->zero());
            m2.c = {-k_unram->uniformizer(), k_unram->zero(), k_unram->one()};
            m2.trim();
            return m2;
        }());
        std::vector<Point> pts;
        pts.push_back(gen::gauss_point(base));
        pts.push_back(gen::disc_point(base, base->from_int(1), mag(2)));
        pts.push_back(gen::rational_point(base, make_rat(2, 1)));
        long bad = 0;
        for (const TowerPtr& kk : {k_eis, k_unram, k_comp}) {
            for (int i = 0; i < 200; ++i) {
                const Point& x = pts[rng.below(pts.size())];
                TPoly a = gen::random_poly(base, 1, 3, rng);
                TPoly lifted(1, kk->zero());
                for (const auto& [e, v] : a.t) lifted.add_term(e, v.lift_to(kk));
                if (canonical_extension_eval(lifted, kk, x) != eval(a, x)) ++bad;
            }
        }
        TPoly tg(1, k_eis->zero());
        tg.add_term({1}, k_eis->one());
        tg.add_term({0}, -k_eis->gen(1));
        bool disc_ok =
            canonical_extension_eval(tg, k_eis, pts[1]) == Magnitude::one() &&
            canonical_extension_eval(tg, k_eis, gen::disc_point(base, base->zero(), mag(2))) ==
                mag(1, 2) &&
            canonical_extension_eval(tg, k_eis, pts[0]) == Magnitude::one();
        return std::pair{bad == 0 && disc_ok, std::to_string(600 - bad) +
                                                  "/600 restriction agreements, disc distances exact"};
    });

    h.run(10, "nesting across budgets and chain prefix stability on all 50 points", [&] {
        TowerPtr k = Tower::base(BaseFieldCfg::p_adic(Int(kP)));
        bool ok = true;
        std::vector<Point> set;
        set.push_back(gen::rational_point(k, make_rat(1, 1)));
        set.push_back(gen::disc_point(k, k->from_int(4), mag(2)));
        auto pts = std::span<const Point>(set.data(), set.size());
        std::vector<SdkSet> sdks;
        for (long t = 1; t <= 3; ++t) sdks.push_back(approximate_nd_total(pts, t, 1));
        for (size_t i = 0; i + 1 < sdks.size(); ++i) {
            for (size_t j = 0; j < sdks[i].entries.size(); ++j) {
                if (!(sdks[i + 1].entries[j].r0 == sdks[i].entries[j].r0) ||
                    sdks[i + 1].entries[j].r != sdks[i].entries[j].r)
                    ok = false;
            }
        }
        for (const auto& s : sdks)
            for (const auto& entry : s.entries)
                for (const auto& x : set)
                    if (!(eval(entry.r0, x) <= entry.r)) ok = false;
        Point sq = gen::sqrt_series_point(k, mag(1), mag(4));
        auto sq_pts = std::span<const Point>(&sq, 1);
        SdkSet s1 = approximate_nd(sq_pts, MultiDeg({1, 0}));
        SdkSet s2 = approximate_nd(sq_pts, MultiDeg({2, 0}));
        for (size_t j = 0; j < s1.entries.size(); ++j)
            if (!(s2.entries[j].r0 == s1.entries[j].r0) || s2.entries[j].r != s1.entries[j].r)
                ok = false;
        long stable = 0;
        for (size_t pi = 0; pi < suite.size(); ++pi) {
            Approx1D c3 = approximate_1d(suite[pi], 3);
            bool match = true;
            for (int j = 0; j < 3; ++j)
                if (!(chains5[pi].entries[j].r0 == c3.entries[j].r0) ||
                    chains5[pi].entries[j].r != c3.entries[j].r)
                    match = false;
            if (match) ++stable;
        }
        ok = ok && stable == static_cast<long>(suite.size());
        return std::pair{ok, std::to_string(stable) + "/50 chains prefix-stable, envelopes nested"};
    });
}

} // namespace

int main() {
    Harness h;
    std::printf("acceptance suite, seed %llu\n", static_cast<unsigned long long>(h.seed));
    run_all(h);
    if (h.failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", h.failures);
    return 1;
}
