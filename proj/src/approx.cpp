#include "ultraberk/approx.hpp"

#include <algorithm>
#include <map>

namespace ultraberk {

namespace {

void flatten_tower(const Nested& v, std::vector<BaseElem>& out) {
    if (v.leaf()) {
        out.push_back(v.b);
        return;
    }
    for (const auto& k : v.kids) flatten_tower(k, out);
}

/// Gaussian elimination over the base field; free variables fixed to 0.
std::optional<std::vector<BaseElem>> solve_field(std::vector<std::vector<BaseElem>> a,
                                                 std::vector<BaseElem> rhs, const BaseElem& zero,
                                                 size_t cols) {
    const size_t rows = a.size();
    std::vector<long> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && a[sel][c].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[r]);
        std::swap(rhs[sel], rhs[r]);
        BaseElem inv = a[r][c].inverse();
        for (size_t j = c; j < cols; ++j) a[r][j] = a[r][j] * inv;
        rhs[r] = rhs[r] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            BaseElem f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[r][j];
            rhs[i] = rhs[i] - f * rhs[r];
        }
        pivot_col.push_back(static_cast<long>(c));
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (!rhs[i].is_zero()) return std::nullopt;
    std::vector<BaseElem> x(cols, zero);
    for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = rhs[i];
    return x;
}

/// Linear normal form whose identical vanishing certifies |P|(x) = 0:
/// substitute exact rigid layers, reduce by monic defining polynomials at
/// rigid Hensel layers, keep everything else.
TPoly hit_normal_form(const TPoly& p, const Point& x) {
    TPoly cur = p;
    for (int i = x.dim(); i >= 1; --i) {
        const Layer& L = x.layer(i);
        const int var = i - 1;
        if (!L.center.hensel && L.radius.is_zero()) {
            cur = substitute_var(cur, var, L.center.exact);
        } else if (L.center.hensel && L.radius.is_zero()) {
            auto fc = extract_var(L.center.defining, var);
            TPoly one = TPoly::constant(p.nvars, ub_one(p.z));
            if (fc.size() >= 2 && fc.back() == one) cur = reduce_var(cur, var, L.center.defining);
        }
    }
    return cur;
}

std::vector<MultiDeg> budget_monomials(const MultiDeg& d) {
    std::vector<MultiDeg> all = enumerate_upto(d);
    all.pop_back(); // drop d itself
    return all;
}

struct FormKeyBasis {
    // per point: sorted union of gamma keys at the level
    std::vector<std::vector<long>> keys;
    long find(const std::vector<long>& k) const {
        auto it = std::lower_bound(keys.begin(), keys.end(), k);
        if (it == keys.end() || *it != k) return -1;
        return static_cast<long>(it - keys.begin());
    }
};

// digit lattice of the base field: lifts of residue-field elements
std::vector<BaseElem> digit_lifts(const BaseCfgPtr& cfg, bool include_zero) {
    std::vector<BaseElem> out;
    const FField& rf = cfg->residue_field();
    if (cfg->kind() == BaseFieldCfg::Kind::p_adic) {
        long p = to_long(cfg->p());
        for (long u = include_zero ? 0 : 1; u < p; ++u) out.push_back(BaseElem::from_int(cfg, Int(u)));
        return out;
    }
    // all elements of F_q as constants
    long q = to_long(Int(rf.order(rf.depth())));
    for (long idx = include_zero ? 0 : 1; idx < q; ++idx) {
        std::vector<Int> coords;
        long rem = idx;
        long f = rf.dim(rf.depth());
        long p = to_long(cfg->p());
        for (long i = 0; i < f; ++i) {
            coords.push_back(Int(rem % p));
            rem /= p;
        }
        out.push_back(BaseElem::from_ratfun(cfg, {rf.unflatten(coords, rf.depth())},
                                            {rf.one(rf.depth())}));
    }
    return out;
}

BaseElem lift_digit(const BaseCfgPtr& cfg, const FFv& digit) {
    const FField& rf = cfg->residue_field();
    if (cfg->kind() == BaseFieldCfg::Kind::p_adic) return BaseElem::from_int(cfg, digit.c);
    return BaseElem::from_ratfun(cfg, {digit}, {rf.one(rf.depth())});
}

} // namespace

Magnitude sup_norm(const TPoly& p, std::span<const Point> points) {
    Magnitude m = Magnitude::zero();
    for (const auto& x : points) m = Magnitude::max(m, eval(p, x));
    return m;
}

namespace {

/// The chain basis of the budget space below d: the minimizers of the lower
/// multidegrees, with their per-point values. By the minimality identity this
/// basis is orthogonal for the sup seminorm: ||sum a_e B_e|| = max ||a_e B_e||,
/// so single-level digit cancellation in it is a complete search.
struct ChainCtx {
    std::vector<TPoly> basis;
    std::vector<std::vector<Magnitude>> values; // [basis index][point]
};

BestMonic best_monic_step(std::span<const Point> points, const MultiDeg& d, const ChainCtx& lower);

ChainCtx build_chain(std::span<const Point> points, const MultiDeg& d) {
    const TowerPtr& tw = points[0].tower();
    const int n = points[0].dim();
    ChainCtx ctx;
    ctx.basis.push_back(TPoly::constant(n, tw->one()));
    ctx.values.push_back(std::vector<Magnitude>(points.size(), Magnitude::one()));
    for (const MultiDeg& e : enumerate_upto(d)) {
        if (e.is_zero() || e == d) continue;
        BestMonic bm = best_monic_step(points, e, ctx);
        std::vector<Magnitude> vals;
        for (const auto& x : points) vals.push_back(eval(bm.r0, x));
        ctx.basis.push_back(bm.r0);
        ctx.values.push_back(std::move(vals));
    }
    return ctx;
}

} // namespace

BestMonic best_monic(std::span<const Point> points, const MultiDeg& d) {
    require(!points.empty(), Err::EmptyInput, "best_monic needs at least one point");
    require(!d.is_zero(), Err::Validation, "budget multidegree must be positive");
    return best_monic_step(points, d, build_chain(points, d));
}

namespace {

BestMonic best_monic_step(std::span<const Point> points, const MultiDeg& d, const ChainCtx& lower) {
    require(!points.empty(), Err::EmptyInput, "best_monic needs at least one point");
    const TowerPtr& tw = points[0].tower();
    const int n = points[0].dim();
    require(d.nvars() == n, Err::ArityMismatch, "budget arity does not match the points");
    for (const auto& x : points) {
        require(x.dim() == n, Err::ArityMismatch, "points of mixed dimension");
        require(x.tower()->same_as(*tw), Err::Validation, "points over different towers");
    }
    require(!d.is_zero(), Err::Validation, "budget multidegree must be positive");

    const std::vector<MultiDeg> budget = budget_monomials(d);
    const TowerElem one = tw->one();
    TPoly lead = TPoly::monomial(n, d, one);

    // ---- exact algebraic hit: solve sum over the budget of q_m T^m matching
    // T^d on every point's normal form, over the base field ----
    {
        std::vector<std::vector<BaseElem>> rows;
        std::vector<BaseElem> rhs;
        const BaseElem bzero = BaseElem::zero(tw->cfg());
        // per point: normal form of each monomial; rows indexed by (point, gamma-term, tower coordinate)
        for (const auto& x : points) {
            // collect union of exponent keys of all normal forms at this point
            std::map<std::vector<long>, size_t> keyindex;
            auto reg = [&](const TPoly& q) {
                for (const auto& [e, v] : q.t) keyindex.emplace(e, 0);
            };
            TPoly nf_lead = hit_normal_form(lead, x);
            reg(nf_lead);
            std::vector<TPoly> nf_mon;
            nf_mon.reserve(budget.size());
            for (const auto& m : budget) {
                nf_mon.push_back(hit_normal_form(TPoly::monomial(n, m, one), x));
                reg(nf_mon.back());
            }
            size_t idx = 0;
            for (auto& [k, v] : keyindex) v = idx++;
            const long tdim = [&] {
                std::vector<BaseElem> f;
                flatten_tower(tw->zero().nested(), f);
                return static_cast<long>(f.size());
            }();
            // one block of rows per key
            size_t base_row = rows.size();
            rows.resize(base_row + keyindex.size() * tdim,
                        std::vector<BaseElem>(budget.size(), bzero));
            rhs.resize(rows.size(), bzero);
            auto fill = [&](const TPoly& q, long col, bool is_rhs) {
                for (const auto& [e, v] : q.t) {
                    size_t krow = base_row + keyindex.at(e) * tdim;
                    std::vector<BaseElem> flat;
                    flatten_tower(v.nested(), flat);
                    for (long c = 0; c < tdim; ++c) {
                        if (is_rhs)
                            rhs[krow + c] = flat[c];
                        else
                            rows[krow + c][col] = flat[c];
                    }
                }
            };
            fill(nf_lead, 0, true);
            for (size_t mi = 0; mi < budget.size(); ++mi) fill(nf_mon[mi], static_cast<long>(mi), false);
        }
        auto sol = solve_field(std::move(rows), std::move(rhs), bzero, budget.size());
        if (sol) {
            TPoly r0 = lead;
            for (size_t mi = 0; mi < budget.size(); ++mi)
                r0 = r0 - TPoly::monomial(n, budget[mi], tw->from_base((*sol)[mi]));
            // canonicalize: zero coefficients in decreasing monomial order while
            // the value stays zero
            for (size_t mi = budget.size(); mi-- > 0;) {
                TowerElem c = r0.coeff(budget[mi].e);
                if (c.is_zero()) continue;
                TPoly cand = r0 - TPoly::monomial(n, budget[mi], c);
                bool still_zero = true;
                for (const auto& x : points)
                    if (!hit_normal_form(cand, x).is_zero()) {
                        still_zero = false;
                        break;
                    }
                if (still_zero) r0 = cand;
            }
            return BestMonic{r0, Magnitude::zero(), 0, true};
        }
    }

    // ---- graded-residue descent over the orthogonal chain basis ----
    const FField& rf = tw->residue_field();
    const int rf_top = rf.depth();
    const int base_rf = tw->cfg()->residue_level();
    const long kappa_k_dim = rf.dim(base_rf);
    const Int& p = tw->cfg()->p();
    const bool trivial = tw->cfg()->trivial();

    const std::vector<TPoly>& mon_poly = lower.basis;
    const std::vector<std::vector<Magnitude>>& mon_val = lower.values;

    TPoly r0 = lead;
    Magnitude v = sup_norm(r0, points);

    // lattice step cap: value exponents live in (1/D)Z with D from the tower
    // ramification and the radius denominators
    Int dlat(tw->ram_index());
    Rat span_bound = Rat(16);
    for (const auto& x : points)
        for (int i = 1; i <= x.dim(); ++i) {
            const Magnitude& rad = x.layer(i).radius;
            if (!rad.is_zero()) {
                mpz_lcm(dlat.get_mpz_t(), dlat.get_mpz_t(), rad.vmain().get_den().get_mpz_t());
                mpz_lcm(dlat.get_mpz_t(), dlat.get_mpz_t(), rad.veps().get_den().get_mpz_t());
                Rat a = rad.vmain() > 0 ? rad.vmain() : -rad.vmain();
                Rat b = rad.veps() > 0 ? rad.veps() : -rad.veps();
                span_bound += (a + b + 1) * d.total();
            }
        }
    if (!v.is_zero()) {
        Rat a = v.vmain() > 0 ? v.vmain() : -v.vmain();
        span_bound += a + 1;
    }
    span_bound += d.total() + 8;
    long cap = 64 + 4 * to_long(rat_ceil(span_bound * Rat(dlat)));

    int steps = 0;
    for (;;) {
        if (v.is_zero()) break; // landed on an exact hit during descent
        // unknown digits: (basis element, level) pairs hitting exactly v
        // somewhere, never exceeding it anywhere
        struct Unknown {
            size_t mi;
            long z;
        };
        std::vector<Unknown> unknowns;
        for (size_t mi = 0; mi < mon_poly.size(); ++mi) {
            std::vector<long> zs;
            for (size_t j = 0; j < points.size(); ++j) {
                const Magnitude& w = mon_val[mi][j];
                if (w.is_zero()) continue;
                if (w.veps() != v.veps()) continue;
                Rat z = v.vmain() - w.vmain();
                if (!is_integer(z)) continue;
                if (trivial && z != 0) continue;
                zs.push_back(to_long(z.get_num()));
            }
            std::sort(zs.begin(), zs.end());
            zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
            for (long z : zs) {
                bool ok = true;
                for (size_t j = 0; j < points.size(); ++j) {
                    if (mon_val[mi][j].is_zero()) continue;
                    if (Magnitude::from_exp(Rat(z)) * mon_val[mi][j] > v) {
                        ok = false;
                        break;
                    }
                }
                if (ok) unknowns.push_back({mi, z});
            }
        }
        if (unknowns.empty()) break;

        // graded forms of the unknowns and the target at level v, per point
        std::vector<GradedResidue> target;
        target.reserve(points.size());
        for (const auto& x : points) target.push_back(eval_graded_at(r0, x, v));

        std::vector<std::vector<GradedResidue>> uforms(unknowns.size());
        for (size_t ui = 0; ui < unknowns.size(); ++ui) {
            TPoly scaled = trivial || unknowns[ui].z == 0
                               ? mon_poly[unknowns[ui].mi]
                               : tw->uniformizer().pow(unknowns[ui].z) * mon_poly[unknowns[ui].mi];
            for (const auto& x : points) uforms[ui].push_back(eval_graded_at(scaled, x, v));
        }

        // F_p linear system
        std::vector<std::vector<Int>> mat;
        std::vector<Int> rhs;
        const long fdim = rf.dim(rf_top);
        for (size_t j = 0; j < points.size(); ++j) {
            // key union at this point
            std::vector<std::vector<long>> keys;
            for (const auto& [k, c] : target[j].form) keys.push_back(k);
            for (size_t ui = 0; ui < unknowns.size(); ++ui)
                for (const auto& [k, c] : uforms[ui][j].form) keys.push_back(k);
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            for (const auto& key : keys) {
                size_t row0 = mat.size();
                mat.resize(row0 + fdim, std::vector<Int>(unknowns.size() * kappa_k_dim, Int(0)));
                rhs.resize(mat.size(), Int(0));
                auto tit = target[j].form.find(key);
                if (tit != target[j].form.end()) {
                    std::vector<Int> flat;
                    rf.flatten(tit->second.v, rf_top, flat);
                    for (long c = 0; c < fdim; ++c) rhs[row0 + c] = flat[c];
                }
                for (size_t ui = 0; ui < unknowns.size(); ++ui) {
                    auto fit = uforms[ui][j].form.find(key);
                    if (fit == uforms[ui][j].form.end()) continue;
                    for (long b = 0; b < kappa_k_dim; ++b) {
                        // basis element of the base residue field, embedded
                        std::vector<Int> coords(kappa_k_dim, Int(0));
                        coords[b] = 1;
                        FFv eb = rf.lift(rf.unflatten(coords, base_rf), base_rf, rf_top);
                        FFv prod = rf.mul(eb, fit->second.v, rf_top);
                        std::vector<Int> flat;
                        rf.flatten(prod, rf_top, flat);
                        for (long c = 0; c < fdim; ++c)
                            mat[row0 + c][ui * kappa_k_dim + b] = flat[c];
                    }
                }
            }
        }
        auto sol = solve_mod_p(std::move(mat), std::move(rhs), p);
        if (!sol) break; // no cancellation solvable: v is minimal

        TPoly q(n, tw->zero());
        for (size_t ui = 0; ui < unknowns.size(); ++ui) {
            std::vector<Int> coords(sol->begin() + ui * kappa_k_dim,
                                    sol->begin() + (ui + 1) * kappa_k_dim);
            FFv digit = rf.unflatten(coords, base_rf);
            if (rf.is_zero(digit)) continue;
            BaseElem lifted = lift_digit(tw->cfg(), digit);
            TowerElem coeff = tw->from_base(lifted);
            if (!trivial && unknowns[ui].z != 0)
                coeff = coeff * tw->uniformizer().pow(unknowns[ui].z);
            q = q + coeff * mon_poly[unknowns[ui].mi];
        }
        require(!q.is_zero(), Err::Internal, "descent produced an empty correction");
        TPoly next = r0 - q;
        Magnitude nv = sup_norm(next, points);
        require(nv < v, Err::Internal, "descent failed to decrease the value");
        r0 = std::move(next);
        v = nv;
        ++steps;
        require(steps <= cap, Err::InsufficientPrecision,
                "descent exceeded the lattice step bound (minimum may be unattained)");
    }

    // canonicalize: zero removable coefficients, largest monomial first
    for (size_t mi = budget.size(); mi-- > 0;) {
        TowerElem c = r0.coeff(budget[mi].e);
        if (c.is_zero()) continue;
        TPoly cand = r0 - TPoly::monomial(n, budget[mi], c);
        if (sup_norm(cand, points) == v) r0 = cand;
    }
    return BestMonic{r0, v, steps, v.is_zero()};
}

} // namespace

BestMonic best_monic(const Point& x, const MultiDeg& d) {
    return best_monic(std::span<const Point>(&x, 1), d);
}

BestMonic best_monic_1d(const Point& x, long degree) {
    return best_monic(x, MultiDeg({degree}));
}

Approx1D approximate_1d(const Point& x, long dmax) {
    require(x.dim() == 1, Err::Validation, "approximate_1d needs a dim-1 point");
    require(dmax >= 1, Err::Validation, "dmax must be >= 1");
    Approx1D out;
    const TowerPtr& tw = x.tower();
    auto pts = std::span<const Point>(&x, 1);
    ChainCtx ctx;
    ctx.basis.push_back(TPoly::constant(1, tw->one()));
    ctx.values.push_back({Magnitude::one()});
    for (long j = 1; j <= dmax; ++j) {
        if (!out.entries.empty() && out.entries.back().r.is_zero()) {
            Approx1DEntry e = out.entries.back();
            e.degree = j;
            e.stabilized = true;
            out.entries.push_back(std::move(e));
            continue;
        }
        BestMonic bm = best_monic_step(pts, MultiDeg({j}), ctx);
        Approx1DEntry e;
        e.degree = j;
        e.r0 = bm.r0;
        e.r = bm.r;
        e.stabilized = false;
        if (j >= 2) {
            TPoly carry = TPoly::variable(1, 0, tw->one()) * out.entries[j - 2].r0;
            e.stabilized = (eval(carry, x) == bm.r);
        }
        ctx.basis.push_back(bm.r0);
        ctx.values.push_back({bm.r});
        out.entries.push_back(std::move(e));
    }
    return out;
}

SdkSet approximate_nd(std::span<const Point> points, const MultiDeg& budget) {
    require(!points.empty(), Err::EmptyInput, "approximate_nd needs at least one point");
    SdkSet out;
    out.budget = budget;
    out.source.assign(points.begin(), points.end());
    ChainCtx ctx;
    ctx.basis.push_back(TPoly::constant(points[0].dim(), points[0].tower()->one()));
    ctx.values.push_back(std::vector<Magnitude>(points.size(), Magnitude::one()));
    for (const MultiDeg& e : enumerate_upto(budget)) {
        if (e.is_zero()) continue;
        BestMonic bm = best_monic_step(points, e, ctx);
        out.entries.push_back(SdkEntry{e, bm.r0, bm.r});
        std::vector<Magnitude> vals;
        for (const auto& x : points) vals.push_back(eval(bm.r0, x));
        ctx.basis.push_back(bm.r0);
        ctx.values.push_back(std::move(vals));
    }
    return out;
}

SdkSet approximate_nd_total(std::span<const Point> points, long total_degree, int nvars) {
    std::vector<long> e(nvars, 0);
    e[0] = total_degree;
    return approximate_nd(points, MultiDeg(e));
}

LemmaReport lemma_check(std::span<const Point> points, const MultiDeg& e, const TPoly& r0,
                        const Magnitude& r, int samples, std::uint64_t seed) {
    LemmaReport rep;
    rep.samples = samples;
    Rng rng(seed);
    const TowerPtr& tw = points[0].tower();
    for (int s = 0; s < samples; ++s) {
        TPoly cand = sample_monic(tw, e, rng, -3, 3);
        Magnitude lhs = sup_norm(cand, points);
        Magnitude rhs = Magnitude::max(r, sup_norm(cand - r0, points));
        if (lhs != rhs) {
            rep.failures += 1;
            if (rep.first_failure.empty())
                rep.first_failure = "||R|| = " + lhs.str() + " vs max(r, ||R-R0||) = " + rhs.str();
        }
    }
    return rep;
}

TPoly sample_monic(const TowerPtr& tw, const MultiDeg& e, Rng& rng, long exp_lo, long exp_hi) {
    TPoly out = TPoly::monomial(e.nvars(), e, tw->one());
    BaseElem proto = BaseElem::zero(tw->cfg());
    for (const MultiDeg& m : budget_monomials(e)) {
        if (rng.below(3) == 0) continue; // keep the support sparse
        BaseElem c = proto.sample(rng, exp_lo, exp_hi);
        if (c.is_zero()) continue;
        out = out + TPoly::monomial(e.nvars(), m, tw->from_base(c));
    }
    return out;
}

BruteForceResult brute_force_min(std::span<const Point> points, const MultiDeg& d,
                                 const LatticeWindow& window) {
    require(!points.empty(), Err::EmptyInput, "oracle needs at least one point");
    const TowerPtr& tw = points[0].tower();
    const int n = points[0].dim();
    const bool trivial = tw->cfg()->trivial();
    const TowerElem one = tw->one();

    const std::vector<MultiDeg> budget = budget_monomials(d);
    const std::vector<BaseElem> digits = digit_lifts(tw->cfg(), true);
    long zlo = trivial ? 0 : to_long(rat_ceil(window.lo));
    long zhi = trivial ? 0 : to_long(rat_floor(window.hi));
    require(zhi >= zlo, Err::Validation, "empty exponent window");

    // per-monomial magnitudes per point, and per-point tail caps by level
    std::vector<std::vector<Magnitude>> mon_val(budget.size());
    std::vector<TPoly> mon_poly;
    for (size_t mi = 0; mi < budget.size(); ++mi) {
        mon_poly.push_back(TPoly::monomial(n, budget[mi], one));
        for (const auto& x : points) mon_val[mi].push_back(eval(mon_poly[mi], x));
    }
    TPoly lead = TPoly::monomial(n, d, one);

    struct Node {
        TPoly acc;           // T^d - partial sum
        std::vector<int> used; // nonzero digits consumed per monomial
        long zi;             // next level index
    };

    BruteForceResult res;
    res.min = sup_norm(lead, points);
    long nodes = 0;

    std::vector<Node> stack;
    stack.push_back(Node{lead, std::vector<int>(budget.size(), 0), zlo});
    while (!stack.empty()) {
        Node node = std::move(stack.back());
        stack.pop_back();
        require(++nodes <= window.max_nodes, Err::WindowTooLarge, "oracle window search space too large");

        // tail cap per point from level node.zi on, honoring digit capacity
        std::vector<Magnitude> tailcap(points.size(), Magnitude::zero());
        bool any_tail = node.zi <= zhi;
        if (any_tail) {
            bool capacity = false;
            for (size_t mi = 0; mi < budget.size(); ++mi) {
                if (node.used[mi] >= window.depth) continue;
                capacity = true;
                for (size_t j = 0; j < points.size(); ++j)
                    tailcap[j] = Magnitude::max(
                        tailcap[j], Magnitude::from_exp(Rat(node.zi)) * mon_val[mi][j]);
            }
            any_tail = capacity;
        }

        std::vector<Magnitude> cur(points.size());
        for (size_t j = 0; j < points.size(); ++j) cur[j] = eval(node.acc, points[j]);
        Magnitude vmax = Magnitude::zero();
        bool frozen = true;
        Magnitude frozen_floor = Magnitude::zero();
        for (size_t j = 0; j < points.size(); ++j) {
            vmax = Magnitude::max(vmax, cur[j]);
            if (any_tail && !(cur[j] > tailcap[j]))
                frozen = false;
            else
                frozen_floor = Magnitude::max(frozen_floor, cur[j]);
        }
        if (frozen || !any_tail) {
            res.min = Magnitude::min(res.min, vmax);
            continue;
        }
        if (frozen_floor >= res.min && !(frozen_floor == Magnitude::zero())) continue; // cannot improve

        // branch over digit vectors at level zi; the all-zero branch first
        std::vector<size_t> active;
        for (size_t mi = 0; mi < budget.size(); ++mi)
            if (node.used[mi] < window.depth) active.push_back(mi);
        // skip-level branch
        {
            Node next = node;
            next.zi += 1;
            stack.push_back(std::move(next));
        }
        // enumerate nonzero digit assignments over the active monomials
        std::vector<size_t> choice(active.size(), 0);
        for (;;) {
            size_t k = 0;
            while (k < choice.size() && ++choice[k] == digits.size()) choice[k++] = 0;
            if (k == choice.size()) break;
            Node next = node;
            bool nonzero = false;
            for (size_t ai = 0; ai < active.size(); ++ai) {
                if (choice[ai] == 0) continue;
                nonzero = true;
                size_t mi = active[ai];
                TowerElem coeff = tw->from_base(digits[choice[ai]]);
                if (!trivial && node.zi != 0) coeff = coeff * tw->uniformizer().pow(node.zi);
                next.acc = next.acc - TPoly::monomial(n, budget[mi], coeff);
                next.used[mi] += 1;
            }
            if (!nonzero) continue;
            next.zi = node.zi + 1;
            stack.push_back(std::move(next));
        }
    }
    res.nodes = nodes;
    return res;
}

bool window_contains(const TPoly& r0, const MultiDeg& d, const LatticeWindow& window) {
    const TowerPtr& tw = r0.z.tower();
    const bool trivial = tw->cfg()->trivial();
    long zlo = trivial ? 0 : to_long(rat_ceil(window.lo));
    long zhi = trivial ? 0 : to_long(rat_floor(window.hi));
    for (const auto& [e, c] : r0.t) {
        if (MultiDeg(e) == d) continue; // the monic lead is not searched
        // the lattice holds the subtracted part P = T^d - R0
        TowerElem x = -c;
        if (!x.in_base()) return false;
        BaseElem b = x.base_part();
        int digits_used = 0;
        while (!b.is_zero()) {
            Magnitude v = b.val();
            if (v.veps() != 0 || !is_integer(v.vmain())) return false;
            long z = to_long(v.vmain().get_num());
            if (z < zlo || z > zhi) return false;
            if (++digits_used > window.depth) return false;
            // peel one digit
            FFv digit = trivial ? b.residue_integral() : (b * BaseElem::uniformizer(tw->cfg()).pow(-z)).residue_integral();
            BaseElem lifted = lift_digit(tw->cfg(), digit);
            if (!trivial && z != 0) lifted = lifted * BaseElem::uniformizer(tw->cfg()).pow(z);
            b = b - lifted;
        }
    }
    return true;
}

} // namespace ultraberk
