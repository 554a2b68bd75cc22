#include "ultraberk/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace ultraberk {

namespace gen {

UPoly<TowerElem> unramified_poly(const TowerPtr& tw, long deg) {
    // smallest constant-coefficient lifts first; certify decides
    for (long c1 = 0; c1 < 8; ++c1) {
        for (long c0 = 1; c0 < 16; ++c0) {
            UPoly<TowerElem> m(tw->zero());
            m.c.assign(deg + 1, tw->zero());
            m.c[deg] = tw->one();
            m.c[1] = m.c[1] + tw->from_int(Int(c1));
            m.c[0] = tw->from_int(Int(c0));
            m.trim();
            CertifyResult cert = certify_step(tw, m);
            if (cert.accepted && cert.kind == StepKind::Unramified) return m;
        }
    }
    fail(Err::Internal, "no unramified polynomial found in the scan range");
}

std::vector<TowerPtr> tower_catalog(long p) {
    std::vector<TowerPtr> out;
    TowerPtr base = Tower::base(BaseFieldCfg::p_adic(Int(p)));
    out.push_back(base);

    auto eis = [&](const TowerPtr& tw, const std::string& name, long deg, long shift) {
        UPoly<TowerElem> m(tw->zero());
        m.c.assign(deg + 1, tw->zero());
        m.c[deg] = tw->one();
        m.c[0] = -tw->uniformizer() * tw->from_int(Int(1 + shift * p));
        m.trim();
        return tw->with_step(name, StepKind::Eisenstein, m);
    };

    TowerPtr eis2 = eis(base, "g", 2, 0);
    out.push_back(eis2);
    out.push_back(base->with_step("u", StepKind::Unramified, unramified_poly(base, 2)));
    out.push_back(eis(base, "c", 3, 0));
    // unramified then Eisenstein
    TowerPtr u2 = out[2];
    out.push_back(eis(u2, "g", 2, 1));
    // Eisenstein then unramified
    out.push_back(eis2->with_step("w", StepKind::Unramified, unramified_poly(eis2, 2)));
    return out;
}

Point rational_point(const TowerPtr& tw, const Rat& a) {
    return Point(tw, {Layer{FiberElem::make_exact(TPoly::constant(1, tw->from_rat(a))),
                            Magnitude::zero()}});
}

Point disc_point(const TowerPtr& tw, const TowerElem& center, const Magnitude& radius) {
    return Point(tw, {Layer{FiberElem::make_exact(TPoly::constant(1, center)), radius}});
}

Point gauss_point(const TowerPtr& tw) { return disc_point(tw, tw->zero(), Magnitude::one()); }

Point sqrt_unit_point(const TowerPtr& tw, const Magnitude& radius) {
    // root of C^2 - (1 + p) near 1; Newton criterion needs odd residue characteristic
    TPoly defining(1, tw->zero());
    defining.add_term({2}, tw->one());
    defining.add_term({0}, -(tw->one() + tw->uniformizer()));
    TPoly approx = TPoly::constant(1, tw->one());
    return Point(tw, {Layer{FiberElem::make_hensel(std::move(defining), std::move(approx)), radius}});
}

Point rigid_quadratic_point(long p, long shift, const Magnitude& radius) {
    TowerPtr base = Tower::base(BaseFieldCfg::p_adic(Int(p)));
    TowerPtr tw = base->with_step("u", StepKind::Unramified, unramified_poly(base, 2));
    // pick a unit c whose residue is not a square in F_p, then an approximation
    // over the residue extension satisfying the Newton criterion
    for (long c0 = 2; c0 < p; ++c0) {
        TowerElem c = tw->from_int(Int(c0)) + tw->uniformizer().pow(shift);
        TPoly defining(1, tw->zero());
        defining.add_term({2}, tw->one());
        defining.add_term({0}, -c);
        for (long a1 = 0; a1 < p; ++a1) {
            for (long a0 = 0; a0 < p; ++a0) {
                TowerElem a = tw->gen(1) * tw->from_int(Int(a1)) + tw->from_int(Int(a0));
                TowerElem fa = a * a - c;
                TowerElem fpa = tw->from_int(2) * a;
                if (fpa.is_zero()) continue;
                if (fa.val() < fpa.val() * fpa.val()) {
                    // reject when the root is residually rational (square residue)
                    if (a1 == 0) continue;
                    TPoly approx = TPoly::constant(1, a);
                    return Point(tw, {Layer{FiberElem::make_hensel(std::move(defining),
                                                                   std::move(approx)),
                                            radius}});
                }
            }
        }
    }
    fail(Err::Internal, "no rigid quadratic point found for this p");
}

std::vector<std::pair<std::string, Point>> archetypes(long p) {
    auto towers = tower_catalog(p);
    std::vector<std::pair<std::string, Point>> out;
    out.emplace_back("rational", rational_point(towers[0], make_rat(3, 5)));
    out.emplace_back("eisenstein_disc",
                     disc_point(towers[1], towers[1]->gen(1), Magnitude::from_exp(Rat(2))));
    out.emplace_back("gauss", gauss_point(towers[0]));
    out.emplace_back("eps_radius",
                     disc_point(towers[0], towers[0]->zero(), Magnitude::from_exp(Rat(1), Rat(1))));
    out.emplace_back("hensel", sqrt_unit_point(towers[0], Magnitude::from_exp(Rat(2))));
    return out;
}

std::vector<Point> dim1_suite(long p, std::uint64_t seed) {
    Rng rng(seed);
    auto towers = tower_catalog(p);
    std::vector<Point> out;
    // 10 rational points
    const long nums[10] = {0, 1, -1, 2, 7, -5, 12, 9, 4, 3};
    const long dens[10] = {1, 1, 2, 1, 5, 1, 7, 2, 1, 4};
    for (int i = 0; i < 10; ++i) {
        long den = dens[i] % p == 0 ? dens[i] + 1 : dens[i];
        out.push_back(rational_point(towers[0], make_rat(nums[i], den)));
    }
    // 20 disc points with tower centers of depth <= 2 and degree <= 4
    for (int i = 0; i < 20; ++i) {
        const TowerPtr& tw = towers[rng.below(towers.size())];
        TowerElem center = tw->zero();
        for (int g = 1; g <= tw->depth(); ++g)
            center = center + tw->gen(g).pow(rng.range(0, 2)) * tw->from_int(Int(rng.range(0, p - 1)));
        center = center + tw->from_rat(make_rat(rng.range(-6, 6), 1));
        long num = rng.range(-2, 2);
        long den = rng.range(1, 2);
        out.push_back(disc_point(tw, center, Magnitude::from_exp(make_rat(num, den))));
    }
    // 5 Gauss + 5 eps-radius points
    for (int i = 0; i < 5; ++i) out.push_back(gauss_point(towers[i % towers.size()]));
    for (int i = 0; i < 5; ++i) {
        const TowerPtr& tw = towers[rng.below(towers.size())];
        Magnitude r = Magnitude::from_exp(make_rat(rng.range(-2, 3), 1), make_rat(rng.range(1, 3), 2));
        out.push_back(disc_point(tw, tw->from_int(Int(rng.range(0, 4))), r));
    }
    // 10 Hensel points: positive-radius square roots of units, and rigid
    // directions with genuinely quadratic roots
    for (int i = 0; i < 10; ++i) {
        if (i % 2 == 0) {
            const TowerPtr& tw = towers[i % 4 == 0 ? 0 : 1];
            long shift = rng.range(1, 3);
            TPoly defining(1, tw->zero());
            defining.add_term({2}, tw->one());
            TowerElem c = tw->one() + tw->uniformizer().pow(shift);
            if (tw->depth() >= 1 && i % 3 == 0) c = c + tw->gen(1) * tw->uniformizer();
            defining.add_term({0}, -c);
            TPoly approx = TPoly::constant(1, tw->one());
            Magnitude r = Magnitude::from_exp(Rat(rng.range(2, 5)));
            out.push_back(Point(
                tw, {Layer{FiberElem::make_hensel(std::move(defining), std::move(approx)), r}}));
        } else {
            Magnitude r = i % 4 == 1 ? Magnitude::zero() : Magnitude::from_exp(Rat(rng.range(2, 4)));
            out.push_back(rigid_quadratic_point(p, rng.range(1, 3), r));
        }
    }
    return out;
}

Point sqrt_series_point(const TowerPtr& tw, const Magnitude& r, const Magnitude& s) {
    Layer l1{FiberElem::make_exact(TPoly::constant(2, tw->zero())), r};
    TPoly defining(2, tw->zero());
    defining.add_term({0, 2}, tw->one());
    defining.add_term({0, 0}, -tw->one());
    defining.add_term({1, 0}, -tw->one()); // C^2 - (1 + T1)
    TPoly approx = TPoly::constant(2, tw->one());
    Layer l2{FiberElem::make_hensel(std::move(defining), std::move(approx)), s};
    return Point(tw, {std::move(l1), std::move(l2)});
}

Point curve_graph_point(const TowerPtr& tw) {
    Layer l1{FiberElem::make_exact(TPoly::constant(3, tw->zero())), Magnitude::one()};
    TPoly t14(3, tw->zero());
    t14.add_term({4, 0, 0}, tw->one());
    TPoly t16(3, tw->zero());
    t16.add_term({6, 0, 0}, tw->one());
    Layer l2{FiberElem::make_exact(std::move(t14)), Magnitude::zero()};
    Layer l3{FiberElem::make_exact(std::move(t16)), Magnitude::zero()};
    return Point(tw, {std::move(l1), std::move(l2), std::move(l3)});
}

TPoly random_poly(const TowerPtr& tw, int nvars, long maxdeg, Rng& rng) {
    TPoly out(nvars, tw->zero());
    BaseElem proto = BaseElem::zero(tw->cfg());
    int terms = 1 + static_cast<int>(rng.below(4));
    for (int t = 0; t < terms; ++t) {
        std::vector<long> e(nvars, 0);
        long left = maxdeg;
        for (int i = 0; i < nvars; ++i) {
            e[i] = rng.range(0, left);
            left -= e[i];
        }
        out.add_term(e, tw->from_base(proto.sample(rng, -2, 2)));
    }
    return out;
}

} // namespace gen

namespace {

Magnitude random_mag(Rng& rng, long max_den, bool allow_zero = true, bool allow_eps = true) {
    if (allow_zero && rng.below(8) == 0) return Magnitude::zero();
    long den = rng.range(1, max_den);
    Rat main = make_rat(rng.range(-24, 24), den);
    Rat eps(0);
    if (allow_eps && rng.below(3) == 0) eps = make_rat(rng.range(-6, 6), rng.range(1, 4));
    return Magnitude::from_exp(main, eps);
}

struct Suite {
    std::vector<CheckResult>& out;
    void add(const std::string& name, bool ok, const std::string& detail = "") {
        out.push_back(CheckResult{name, ok, detail});
    }
};

// independent resultant oracle: Sylvester determinant by exact elimination
TowerElem sylvester_resultant(const UPoly<TowerElem>& a, const UPoly<TowerElem>& b) {
    const long da = a.deg(), db = b.deg();
    const TowerPtr tw = a.z.tower() ? a.z.tower() : b.z.tower();
    if (da < 0 || db < 0) return tw->zero();
    if (da == 0 && db == 0) return tw->one();
    const long n = da + db;
    std::vector<std::vector<TowerElem>> m(n, std::vector<TowerElem>(n, tw->zero()));
    for (long r = 0; r < db; ++r)
        for (long j = 0; j <= da; ++j) m[r][r + j] = a.c[da - j];
    for (long r = 0; r < da; ++r)
        for (long j = 0; j <= db; ++j) m[db + r][r + j] = b.c[db - j];
    TowerElem det = tw->one();
    for (long c = 0; c < n; ++c) {
        long sel = c;
        while (sel < n && m[sel][c].is_zero()) ++sel;
        if (sel == n) return tw->zero();
        if (sel != c) {
            std::swap(m[sel], m[c]);
            det = -det;
        }
        det = det * m[c][c];
        TowerElem inv = m[c][c].inverse();
        for (long r = c + 1; r < n; ++r) {
            if (m[r][c].is_zero()) continue;
            TowerElem f = m[r][c] * inv;
            for (long j = c; j < n; ++j) m[r][j] = m[r][j] - f * m[c][j];
        }
    }
    return det;
}

UPoly<TowerElem> random_upoly(const TowerPtr& tw, long maxdeg, Rng& rng, bool monic = false) {
    UPoly<TowerElem> out(tw->zero());
    long d = rng.range(monic ? 1 : 0, maxdeg);
    out.c.assign(d + 1, tw->zero());
    BaseElem proto = BaseElem::zero(tw->cfg());
    for (long i = 0; i <= d; ++i) out.c[i] = tw->from_base(proto.sample(rng, -2, 2));
    if (monic)
        out.c[d] = tw->one();
    else if (out.c[d].is_zero())
        out.c[d] = tw->one();
    out.trim();
    return out;
}

TowerElem random_tower_elem(const TowerPtr& tw, Rng& rng) {
    TowerElem x = tw->zero();
    BaseElem proto = BaseElem::zero(tw->cfg());
    x = x + tw->from_base(proto.sample(rng, -2, 2));
    for (int g = 1; g <= tw->depth(); ++g) {
        if (rng.coin()) x = x + tw->gen(g).pow(rng.range(1, 2)) * tw->from_base(proto.sample(rng, -1, 1));
    }
    return x;
}

void magnitude_suite(Suite& s, Rng& rng, int n) {
    bool laws = true, dist = true, rt = true, parse_rt = true;
    std::string detail;
    for (int i = 0; i < n; ++i) {
        Magnitude a = random_mag(rng, 12), b = random_mag(rng, 12), c = random_mag(rng, 12);
        if ((a * b) * c != a * (b * c) || a * b != b * a) laws = false;
        if (Magnitude::max(a * b, a * c) != a * Magnitude::max(b, c)) dist = false;
        Magnitude m = random_mag(rng, 12);
        if (Magnitude::parse(m.str()) != m) parse_rt = false;
    }
    for (int i = 0; i < n; ++i) {
        Magnitude lead = random_mag(rng, 12, false);
        std::vector<Magnitude> dists;
        int k = static_cast<int>(rng.below(5));
        for (int j = 0; j < k; ++j) dists.push_back(random_mag(rng, 12));
        Magnitude rho = random_mag(rng, 12);
        Magnitude target = lead * rho;
        for (const auto& d : dists) target = target * Magnitude::max(rho, d);
        Magnitude solved = solve_radius(lead, dists, target);
        if (solved != rho) {
            // the map is injective, so disagreement is only possible if rho was
            // not reproducible; flag it
            rt = false;
            detail = "lead=" + lead.str() + " rho=" + rho.str() + " got " + solved.str();
        }
    }
    s.add("magnitude group and lattice laws", laws);
    s.add("max distributes over mul", dist);
    s.add("solve_radius inverts the product map", rt, detail);
    s.add("magnitude print/parse round trip", parse_rt);
}

void hull_suite(Suite& s, Rng& rng, int n) {
    bool mono = true, below = true;
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<long, std::optional<Rat>>> pts;
        int k = 2 + static_cast<int>(rng.below(6));
        for (int j = 0; j < k; ++j) {
            std::optional<Rat> v;
            if (rng.below(6) != 0) v = make_rat(rng.range(-8, 8), rng.range(1, 3));
            pts.emplace_back(j, v);
        }
        bool any = false;
        for (auto& [idx, v] : pts) any = any || v.has_value();
        if (!any) pts[0].second = Rat(0);
        NewtonPolygon np = lower_hull(pts);
        auto sl = np.slopes();
        for (size_t j = 0; j + 1 < sl.size(); ++j)
            if (sl[j].first > sl[j + 1].first) mono = false;
        // hull lies on or below every finite input point
        for (const auto& [idx, v] : pts) {
            if (!v) continue;
            for (size_t j = 0; j + 1 < np.vertices.size(); ++j) {
                const auto& a = np.vertices[j];
                const auto& b = np.vertices[j + 1];
                if (idx < a.index || idx > b.index) continue;
                Rat hull_val = a.val + (b.val - a.val) * Rat(idx - a.index) / Rat(b.index - a.index);
                if (hull_val > *v) below = false;
            }
        }
    }
    s.add("hull slopes nondecreasing", mono);
    s.add("hull lies below the input points", below);
}

void field_suite(Suite& s, Rng& rng, int n, long p) {
    auto towers = gen::tower_catalog(p);
    bool mult = true, ultra = true, res_mult = true, certify_ok = true, nr_ok = true;
    std::string det;
    for (int i = 0; i < n; ++i) {
        const TowerPtr& tw = towers[rng.below(towers.size())];
        TowerElem x = random_tower_elem(tw, rng);
        TowerElem y = random_tower_elem(tw, rng);
        if ((x * y).val() != x.val() * y.val()) {
            mult = false;
            det = "x=" + x.str() + " y=" + y.str();
        }
        Magnitude vs = (x + y).val();
        Magnitude mx = Magnitude::max(x.val(), y.val());
        if (vs > mx) ultra = false;
        if (x.val() != y.val() && vs != mx) ultra = false;
        // residues of units multiply
        if (!x.is_zero() && !y.is_zero()) {
            TowerElem ux = x * tw->section_element(x.val().vmain()).inverse();
            TowerElem uy = y * tw->section_element(y.val().vmain()).inverse();
            FFElem rx = ux.residue(), ry = uy.residue(), rxy = (ux * uy).residue();
            if (!(rx * ry == rxy)) res_mult = false;
        }
    }
    for (const TowerPtr& tw : towers) {
        long e = 1, f = 1;
        for (int i = 1; i <= tw->depth(); ++i) {
            if (tw->step(i).kind == StepKind::Eisenstein)
                e *= tw->step(i).deg;
            else
                f *= tw->step(i).deg;
        }
        if (tw->ram_index() != e || tw->res_degree() != f * tw->cfg()->qdeg()) certify_ok = false;
        // Newton-polygon re-derivation: the Eisenstein generator valuation has
        // denominator equal to its step degree over the value group below
        Rat gamma(1);
        for (int i = 1; i <= tw->depth(); ++i) {
            if (tw->step(i).kind != StepKind::Eisenstein) continue;
            Rat scaled = tw->step(i).slope * gamma;
            if (scaled.get_den() != tw->step(i).deg) certify_ok = false;
            gamma *= tw->step(i).deg;
        }
    }
    // norm_resultant against direct evaluation in an extension
    {
        TowerPtr base = towers[0];
        UPoly<TowerElem> m(base->zero());
        m.c = {-base->uniformizer(), base->zero(), base->one()}; // T^2 - p
        m.trim();
        TowerPtr ext = base->with_step("g", StepKind::Eisenstein, m);
        for (int i = 0; i < std::max(5, n / 20); ++i) {
            UPoly<TowerElem> g = random_upoly(base, 3, rng);
            if (g.is_zero()) continue;
            UPoly<TowerElem> glift(ext->zero());
            for (auto& c : g.c) glift.c.push_back(c.lift_to(ext));
            glift.trim();
            Magnitude via_res = norm_resultant(m, g);
            Magnitude direct = glift.eval(ext->gen(1)).val();
            if (via_res != direct) nr_ok = false;
        }
    }
    s.add("tower valuation multiplicative", mult, det);
    s.add("tower valuation ultrametric", ultra);
    s.add("unit residues multiply", res_mult);
    s.add("certified steps rebuild e and f", certify_ok);
    s.add("norm_resultant agrees with direct evaluation", nr_ok);
}

void poly_suite(Suite& s, Rng& rng, int n, long p) {
    auto towers = gen::tower_catalog(p);
    bool hasse_ok = true, radix_ok = true, order_ok = true, res_ok = true, syl_ok = true;
    for (int i = 0; i < n; ++i) {
        const TowerPtr& tw = towers[rng.below(3)];
        UPoly<TowerElem> q = random_upoly(tw, 8, rng);
        TowerElem alpha = random_tower_elem(tw, rng);
        auto cs = hasse_shift(q, alpha);
        // re-expansion oracle
        UPoly<TowerElem> tm(tw->zero());
        tm.c = {-alpha, tw->one()};
        UPoly<TowerElem> acc(tw->zero());
        for (size_t j = cs.size(); j-- > 0;) {
            acc = acc * tm;
            UPoly<TowerElem> cpoly(tw->zero());
            cpoly.c = {cs[j]};
            cpoly.trim();
            acc = acc + cpoly;
        }
        if (!(acc == q)) hasse_ok = false;
        if (!q.is_zero() && q.c[0] != cs[0] && q.deg() >= 0) {
            // c_0 must equal Q(alpha)
            if (!(cs[0] == q.eval(alpha))) hasse_ok = false;
        }
    }
    for (int i = 0; i < (n * 3) / 5; ++i) {
        const TowerPtr& tw = towers[rng.below(3)];
        UPoly<TowerElem> q = random_upoly(tw, 7, rng);
        UPoly<TowerElem> r0 = random_upoly(tw, 3, rng, true);
        if (r0.deg() < 1) continue;
        auto digits = radix_expand(q, r0);
        UPoly<TowerElem> acc(tw->zero());
        for (size_t j = digits.size(); j-- > 0;) acc = acc * r0 + digits[j];
        if (!(acc == q)) radix_ok = false;
        for (const auto& d : digits)
            if (d.deg() >= r0.deg()) radix_ok = false;
    }
    {
        // total order, enumeration, pred/succ
        std::vector<long> a{0, 1}, b{1, 0};
        if (!(MultiDeg(a) < MultiDeg(b))) order_ok = false;
        std::vector<MultiDeg> chain = enumerate_upto(MultiDeg({2, 0}));
        std::vector<std::vector<long>> want{{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
        if (chain.size() != want.size()) order_ok = false;
        for (size_t i = 0; i < chain.size() && order_ok; ++i)
            if (chain[i].e != want[i]) order_ok = false;
        for (int nv = 2; nv <= 3; ++nv) {
            std::vector<long> top(nv, 0);
            top[0] = 3;
            auto all = enumerate_upto(MultiDeg(top));
            for (size_t i = 1; i < all.size(); ++i) {
                if (multideg_pred(all[i]) != all[i - 1]) order_ok = false;
                if (multideg_succ(all[i - 1]) != all[i]) order_ok = false;
            }
        }
        bool threw = false;
        try {
            multideg_pred(MultiDeg({0, 0}));
        } catch (const UbError& e) {
            threw = e.code() == Err::PredOfZero;
        }
        if (!threw) order_ok = false;
    }
    for (int i = 0; i < n / 3; ++i) {
        const TowerPtr& tw = towers[rng.below(2)];
        UPoly<TowerElem> a = random_upoly(tw, 3, rng);
        UPoly<TowerElem> b = random_upoly(tw, 2, rng);
        UPoly<TowerElem> c = random_upoly(tw, 2, rng);
        if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
        TowerElem lhs = resultant(a, b * c);
        TowerElem rhs = resultant(a, b) * resultant(a, c);
        if (lhs != rhs) res_ok = false;
        if (resultant(a, b) != sylvester_resultant(a, b)) syl_ok = false;
    }
    s.add("hasse_shift re-expands exactly", hasse_ok);
    s.add("radix_expand re-expands exactly", radix_ok);
    s.add("multidegree order, enumeration and pred/succ", order_ok);
    s.add("resultant multiplicative in factors", res_ok);
    s.add("resultant matches the Sylvester determinant", syl_ok);
}

void points_suite(Suite& s, Rng& rng, int n, long p) {
    auto archetypes = gen::archetypes(p);
    bool mult = true, ultra = true, prec = true, order_ok = true;
    std::string det;
    for (auto& [name, x] : archetypes) {
        for (int i = 0; i < n; ++i) {
            TPoly a = gen::random_poly(x.tower(), x.dim(), 3, rng);
            TPoly b = gen::random_poly(x.tower(), x.dim(), 2, rng);
            Magnitude va = eval(a, x), vb = eval(b, x);
            if (eval(a * b, x) != va * vb) {
                mult = false;
                det = name;
            }
            Magnitude vs = eval(a + b, x);
            Magnitude mx = Magnitude::max(va, vb);
            if (vs > mx) ultra = false;
            if (va != vb && vs != mx) ultra = false;
        }
    }
    // precision independence across refinement depths: evaluate, refine three
    // more steps, evaluate again
    {
        auto hensel = gen::sqrt_unit_point(Tower::base(BaseFieldCfg::p_adic(Int(p))),
                                           Magnitude::from_exp(Rat(2)));
        std::vector<TPoly> polys;
        std::vector<Magnitude> before;
        for (int i = 0; i < std::max(5, n / 10); ++i) {
            polys.push_back(gen::random_poly(hensel.tower(), 1, 3, rng));
            before.push_back(eval(polys.back(), hensel));
        }
        hensel.refine_all(3);
        for (size_t i = 0; i < polys.size(); ++i)
            if (eval(polys[i], hensel) != before[i]) prec = false;
    }
    // order consistency on nested discs
    {
        TowerPtr tw = Tower::base(BaseFieldCfg::p_adic(Int(p)));
        for (int i = 0; i < n / 5; ++i) {
            TowerElem c = tw->from_int(Int(rng.range(-8, 8)));
            Magnitude small = Magnitude::from_exp(Rat(rng.range(1, 4)));
            Magnitude big = Magnitude::from_exp(Rat(rng.range(-2, 0)));
            Point inner = gen::disc_point(tw, c, small);
            Point outer = gen::disc_point(tw, c + tw->uniformizer(), big);
            if (compare_points(inner, outer) != Order::Less) order_ok = false;
            TPoly a = gen::random_poly(tw, 1, 3, rng);
            if (eval(a, inner) > eval(a, outer)) order_ok = false;
        }
    }
    s.add("evaluator multiplicative on all archetypes", mult, det);
    s.add("evaluator ultrametric with equality on distinct values", ultra);
    s.add("evaluation independent of refinement depth", prec);
    s.add("point order consistent with evaluation", order_ok);
}

void approx_suite(Suite& s, Rng& rng, int n, long p) {
    auto towers = gen::tower_catalog(p);
    bool identity_ok = true, chain_ok = true, oracle_ok = true, nest_ok = true;
    std::string det;
    std::vector<Point> pts;
    pts.push_back(gen::rational_point(towers[0], make_rat(2, 1)));
    pts.push_back(gen::disc_point(towers[1], towers[1]->gen(1), Magnitude::from_exp(Rat(2))));
    pts.push_back(gen::gauss_point(towers[0]));
    for (const Point& x : pts) {
        Approx1D chain = approximate_1d(x, 3);
        for (const auto& entry : chain.entries) {
            for (int i = 0; i < n / 10; ++i) {
                TPoly r = sample_monic(x.tower(), MultiDeg({entry.degree}), rng, -3, 3);
                Magnitude lhs = eval(r, x);
                Magnitude rhs = Magnitude::max(entry.r, eval(r - entry.r0, x));
                if (lhs != rhs) {
                    identity_ok = false;
                    det = "deg " + std::to_string(entry.degree);
                }
            }
        }
        Approx1D longer = approximate_1d(x, 4);
        for (size_t j = 0; j < chain.entries.size(); ++j) {
            if (!(longer.entries[j].r0 == chain.entries[j].r0) ||
                longer.entries[j].r != chain.entries[j].r)
                chain_ok = false;
        }
    }
    {
        Point x = gen::disc_point(towers[1], towers[1]->gen(1), Magnitude::from_exp(Rat(2)));
        BestMonic bm = best_monic_1d(x, 2);
        LatticeWindow w;
        w.lo = Rat(-4);
        w.hi = Rat(4);
        w.depth = 4;
        BruteForceResult bf = brute_force_min(std::span<const Point>(&x, 1), MultiDeg({2}), w);
        if (window_contains(bm.r0, MultiDeg({2}), w) && bf.min != bm.r) oracle_ok = false;
    }
    {
        std::vector<Point> k2;
        k2.push_back(gen::rational_point(towers[0], make_rat(1, 1)));
        k2.push_back(gen::rational_point(towers[0], make_rat(1 + p, 1)));
        SdkSet s1 = approximate_nd_total(std::span<const Point>(k2.data(), k2.size()), 1, 1);
        SdkSet s2 = approximate_nd_total(std::span<const Point>(k2.data(), k2.size()), 2, 1);
        for (size_t i = 0; i < s1.entries.size(); ++i) {
            if (!(s2.entries[i].r0 == s1.entries[i].r0) || s2.entries[i].r != s1.entries[i].r)
                nest_ok = false;
        }
        for (const auto& entry : s2.entries)
            for (const auto& x : k2)
                if (!(eval(entry.r0, x) <= entry.r)) nest_ok = false;
    }
    s.add("minimizer identity on sampled monic polynomials", identity_ok, det);
    s.add("chains stable under budget extension", chain_ok);
    s.add("oracle agrees with the descent minimum", oracle_ok);
    s.add("envelope systems nested with source membership", nest_ok);
}

Formula random_formula(const TowerPtr& tw, int nvars, int depth, Rng& rng) {
    if (depth == 0 || rng.below(3) == 0) {
        TPoly p = gen::random_poly(tw, nvars, 2, rng);
        TPoly q = rng.coin() ? TPoly::constant(nvars, tw->one())
                             : gen::random_poly(tw, nvars, 1, rng);
        if (q.is_zero()) q = TPoly::constant(nvars, tw->one());
        Magnitude lambda;
        switch (rng.below(4)) {
            case 0: lambda = Magnitude::zero(); break;
            case 1: lambda = Magnitude::one(); break;
            case 2: lambda = Magnitude::from_exp(Rat(rng.range(-2, 3))); break;
            default: lambda = Magnitude::from_exp(make_rat(rng.range(-3, 3), 2)); break;
        }
        return Formula::make_atom(std::move(p), std::move(q), std::move(lambda));
    }
    switch (rng.below(3)) {
        case 0:
            return Formula::make_not(random_formula(tw, nvars, depth - 1, rng));
        case 1:
            return Formula::make_and(random_formula(tw, nvars, depth - 1, rng),
                                     random_formula(tw, nvars, depth - 1, rng));
        default:
            return Formula::make_or(random_formula(tw, nvars, depth - 1, rng),
                                    random_formula(tw, nvars, depth - 1, rng));
    }
}

Formula demorgan(const Formula& f, bool negate) {
    if (f.kind == Formula::Kind::Atom) {
        Formula atom = f;
        return negate ? Formula::make_not(std::move(atom)) : atom;
    }
    if (f.kind == Formula::Kind::Not) return demorgan(f.kids[0], !negate);
    bool as_and = (f.kind == Formula::Kind::And) != negate;
    Formula a = demorgan(f.kids[0], negate);
    Formula b = demorgan(f.kids[1], negate);
    return as_and ? Formula::make_and(std::move(a), std::move(b))
                  : Formula::make_or(std::move(a), std::move(b));
}

void semialg_suite(Suite& s, Rng& rng, int n, long p) {
    auto archetypes = gen::archetypes(p);
    bool dm_ok = true, sigma_ok = true, fiber_ok = true, sup_ok = true;
    for (int i = 0; i < n; ++i) {
        auto& [name, x] = archetypes[rng.below(archetypes.size())];
        Formula f = random_formula(x.tower(), x.dim(), 3, rng);
        Formula g = demorgan(f, false);
        if (eval_formula(f, x) != eval_formula(g, x)) dm_ok = false;
    }
    {
        TowerPtr base = Tower::base(BaseFieldCfg::p_adic(Int(p)));
        UPoly<TowerElem> m(base->zero());
        m.c = {-base->uniformizer(), base->zero(), base->one()};
        m.trim();
        TowerPtr k1 = base->with_step("g", StepKind::Eisenstein, m);
        TowerPtr k2 = k1->with_step("w", StepKind::Unramified, gen::unramified_poly(k1, 2));
        Point x = gen::gauss_point(base);
        for (int i = 0; i < std::max(10, n / 4); ++i) {
            TPoly a = gen::random_poly(base, 1, 3, rng);
            Magnitude direct = eval(a, x);
            auto lift_poly = [&](const TowerPtr& kk) {
                TPoly out(1, kk->zero());
                for (const auto& [e, v] : a.t) out.add_term(e, v.lift_to(kk));
                return out;
            };
            if (canonical_extension_eval(lift_poly(k1), k1, x) != direct) sigma_ok = false;
            if (canonical_extension_eval(lift_poly(k2), k2, x) != direct) sigma_ok = false;
        }
        // disc distance over an extension: |T - g| at eta_{0,1} is max(b^{-1/2}, 1) = 1
        TPoly tg(1, k1->zero());
        tg.add_term({1}, k1->one());
        tg.add_term({0}, -k1->gen(1));
        if (canonical_extension_eval(tg, k1, x) != Magnitude::one()) sigma_ok = false;
    }
    {
        TowerPtr tw = Tower::base(BaseFieldCfg::p_adic(Int(p)));
        Point x = gen::disc_point(tw, tw->zero(), Magnitude::from_exp(Rat(1)));
        for (int i = 0; i < n / 2; ++i) {
            Formula f = random_formula(tw, 2, 2, rng);
            Formula g = random_formula(tw, 2, 2, rng);
            std::vector<BaseElem> y{BaseElem::from_int(tw->cfg(), Int(rng.range(-3, 3)))};
            FiberResult both = fiber_membership(x, Formula::make_and(f, g), y);
            FiberResult one = fiber_membership(x, f, y);
            if (both.member && !one.member) fiber_ok = false;
        }
    }
    {
        TowerPtr tw = Tower::base(BaseFieldCfg::p_adic(Int(p)));
        std::vector<Point> k;
        k.push_back(gen::rational_point(tw, make_rat(0, 1)));
        k.push_back(gen::rational_point(tw, make_rat(1, 1)));
        SdkSet sdk = approximate_nd_total(std::span<const Point>(k.data(), k.size()), 2, 1);
        for (int i = 0; i < std::max(5, n / 8); ++i) {
            TPoly q = gen::random_poly(tw, 1, 2, rng);
            auto res = sdk_supnorm_sample(sdk, q, std::span<const Point>(k.data(), k.size()));
            if (!res.equals_source_norm) sup_ok = false;
            if (res.value != sup_norm(q, std::span<const Point>(k.data(), k.size()))) sup_ok = false;
        }
    }
    s.add("boolean rewrites preserve formula evaluation", dm_ok);
    s.add("canonical extension compatible across nested extensions", sigma_ok);
    s.add("fiber membership monotone under conjunction", fiber_ok);
    s.add("envelope sup-norm sampling attains the source norm", sup_ok);
}

} // namespace

std::vector<CheckResult> run_selftest(std::uint64_t seed, double scale) {
    std::vector<CheckResult> out;
    Suite s{out};
    Rng rng(seed);
    const long p = 3;
    const bool trace = std::getenv("ULTRABERK_TRACE") != nullptr;
    auto scaled = [&](int full) { return std::max(8, static_cast<int>(full * scale)); };
    auto timed = [&](const char* name, auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        if (trace) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            std::fprintf(stderr, "[selftest] %s: %lld ms\n", name, static_cast<long long>(ms));
        }
    };
    timed("magnitude", [&] { magnitude_suite(s, rng, scaled(200)); });
    timed("hull", [&] { hull_suite(s, rng, scaled(200)); });
    timed("field", [&] { field_suite(s, rng, scaled(500), p); });
    timed("poly", [&] { poly_suite(s, rng, scaled(500), p); });
    timed("points", [&] { points_suite(s, rng, scaled(500), p); });
    timed("approx", [&] { approx_suite(s, rng, scaled(100), p); });
    timed("semialg", [&] { semialg_suite(s, rng, scaled(200), p); });
    return out;
}

} // namespace ultraberk
