#include "ultraberk/point.hpp"

#include <algorithm>

#include "ultraberk/rng.hpp"

namespace ultraberk {

namespace {

TPoly truncate_total(const TPoly& p, long maxdeg) {
    TPoly out(p.nvars, p.z);
    for (const auto& [e, v] : p.t) {
        long t = 0;
        for (long x : e) t += x;
        if (t <= maxdeg) out.add_term(e, v);
    }
    return out;
}

TPoly derivative_var(const TPoly& p, int i) {
    TPoly out(p.nvars, p.z);
    const TowerPtr& tw = p.z.tower();
    for (const auto& [e, v] : p.t) {
        if (e[i] == 0) continue;
        std::vector<long> f = e;
        f[i] -= 1;
        out.add_term(f, tw->from_int(Int(e[i])) * v);
    }
    return out;
}

bool monic_in_var(const TPoly& f, int var) {
    auto fc = extract_var(f, var);
    if (fc.size() < 2) return false;
    TPoly one = TPoly::constant(f.nvars, ub_one(f.z));
    return fc.back() == one;
}

} // namespace

FiberElem FiberElem::make_hensel(TPoly defining, TPoly approx, int budget) {
    FiberElem f;
    f.hensel = true;
    f.exact = approx; // keeps the initial approx around for serialization
    f.defining = std::move(defining);
    f.state = std::make_shared<HenselState>();
    f.state->approx = std::move(approx);
    f.budget = budget;
    return f;
}

Point::Point(TowerPtr tw, std::vector<Layer> layers) : tw_(std::move(tw)), layers_(std::move(layers)) {
    require(!layers_.empty(), Err::Validation, "a point needs at least one layer");
    const int n = dim();
    for (int i = 1; i <= n; ++i) {
        Layer& L = layers_[i - 1];
        if (!L.center.hensel) {
            require(L.center.exact.nvars == n, Err::ArityMismatch, "center arity mismatch");
            require(L.center.exact.max_var() < i - 1, Err::Validation,
                    "layer center may only use earlier variables");
        } else {
            require(L.center.defining.nvars == n && L.center.state->approx.nvars == n,
                    Err::ArityMismatch, "center arity mismatch");
            require(L.center.state->approx.max_var() < i - 1, Err::Validation,
                    "approximation may only use earlier variables");
            require(L.center.defining.max_var() <= i - 1, Err::Validation,
                    "defining polynomial may only use this and earlier variables");
            auto fc = extract_var(L.center.defining, i - 1);
            require(fc.size() >= 2, Err::Validation, "defining polynomial must involve its root variable");
            // Newton criterion |F(a)| < |F'(a)|^2 at the partial point
            HenselState& st = *L.center.state;
            TPoly fa_poly = substitute_var(L.center.defining, i - 1, st.approx);
            TPoly fpa_poly = substitute_var(derivative_var(L.center.defining, i - 1), i - 1, st.approx);
            st.fa = eval_prefix(fa_poly, *this, i - 1);
            st.fpa = eval_prefix(fpa_poly, *this, i - 1);
            require(!st.fpa.is_zero(), Err::Validation, "derivative vanishes at the approximation");
            require(st.fa < st.fpa * st.fpa, Err::Validation,
                    "Newton criterion |F(a)| < |F'(a)|^2 fails");
            st.err = st.fa.is_zero() ? Magnitude::zero() : st.fa / st.fpa;
            st.trunc = std::max<long>(8, 2 * st.approx.total_degree() + 4);
        }
    }
}

namespace {

TowerElem reduce_elem_precision(const TowerElem& x, long m) {
    const TowerPtr& tw = x.tower();
    auto rec = [&](auto&& self, const Nested& v) -> Nested {
        if (v.leaf()) return Nested{v.b.reduce_precision(m), {}};
        Nested out = v;
        for (auto& k : out.kids) k = self(self, k);
        return out;
    };
    return TowerElem(tw, rec(rec, x.nested()));
}

TPoly reduce_poly_precision(const TPoly& p, long m) {
    TPoly out(p.nvars, p.z);
    for (const auto& [e, v] : p.t) out.add_term(e, reduce_elem_precision(v, m));
    return out;
}

/// One Newton refinement of layer i; returns false when no progress is possible.
bool refine_layer(const Point& x, int i) {
    const Layer& L = x.layer(i);
    HenselState& st = *L.center.state;
    std::lock_guard<std::mutex> lock(st.mu);
    if (st.err.is_zero()) return true;
    const int var = i - 1;
    const TPoly& F = L.center.defining;
    TPoly dF = derivative_var(F, var);

    // coefficient digits beyond the achievable error are noise; bound the kept
    // precision by the error target plus the largest monomial weight below
    long weight_pad = 0;
    for (int j = 1; j < i; ++j) {
        TPoly tj = TPoly::variable(F.nvars, j - 1, ub_one(F.z));
        Magnitude w = eval_prefix(tj, x, i - 1);
        if (!w.is_zero() && w.vmain() < 0)
            weight_pad += to_long(rat_ceil(-w.vmain())) * st.trunc;
    }

    for (int attempt = 0; attempt < 4; ++attempt) {
        TPoly fpa_poly = substitute_var(dF, var, st.approx);
        TPoly fa_poly = substitute_var(F, var, st.approx);
        TowerElem inv0 = fpa_poly.coeff(std::vector<long>(F.nvars, 0));
        if (inv0.is_zero()) return false;
        // series inverse of F'(a) = inv0 * (1 - W), W without constant term
        TowerElem inv0i = inv0.inverse();
        TPoly one = TPoly::constant(F.nvars, ub_one(F.z));
        TPoly w = one - inv0i * fpa_poly;
        w = truncate_total(w, st.trunc);
        TPoly acc = one;
        TPoly inv_series = one;
        for (long k = 1; k <= st.trunc; ++k) {
            acc = truncate_total(acc * w, st.trunc);
            if (acc.is_zero()) break;
            inv_series = inv_series + acc;
        }
        inv_series = inv0i * inv_series;
        TPoly delta = truncate_total(fa_poly * inv_series, st.trunc);
        TPoly next = truncate_total(st.approx - delta, st.trunc);
        if (!st.fa.is_zero() && !st.fpa.is_zero() && st.fa.veps() == 0 && st.fpa.veps() == 0) {
            // expected error squares; keep digits a safe margin past it
            Rat target = (st.fa.vmain() - st.fpa.vmain()) * 2 + st.fpa.vmain();
            long m = to_long(rat_ceil(target)) + weight_pad + 8;
            next = reduce_poly_precision(next, m);
        }

        TPoly nfa_poly = substitute_var(F, var, next);
        Magnitude nfa = eval_prefix(nfa_poly, x, i - 1);
        TPoly nfpa_poly = substitute_var(dF, var, next);
        Magnitude nfpa = eval_prefix(nfpa_poly, x, i - 1);
        if (!nfpa.is_zero()) {
            Magnitude nerr = nfa.is_zero() ? Magnitude::zero() : nfa / nfpa;
            if (nerr < st.err) {
                st.approx = std::move(next);
                st.fa = nfa;
                st.fpa = nfpa;
                st.err = nerr;
                st.refinements += 1;
                return true;
            }
        }
        st.trunc = st.trunc * 2 + 4;
    }
    return false;
}

struct LayerSnap {
    bool hensel = false;
    bool hensel_zero = false; // error direction
    TPoly center{0, TowerElem()};
    TPoly defining{0, TowerElem()};
    bool reduce = false;
    Magnitude radius;
    Magnitude err;
};

std::vector<LayerSnap> snapshot(const Point& x, int upto) {
    std::vector<LayerSnap> out;
    out.reserve(upto);
    for (int i = 1; i <= upto; ++i) {
        const Layer& L = x.layer(i);
        LayerSnap s;
        s.hensel = L.center.hensel;
        s.radius = L.radius;
        if (L.center.hensel) {
            std::lock_guard<std::mutex> lock(L.center.state->mu);
            s.center = L.center.state->approx;
            s.err = L.center.state->err;
            s.defining = L.center.defining;
            s.hensel_zero = L.radius.is_zero();
            s.reduce = s.hensel_zero && monic_in_var(s.defining, i - 1);
        } else {
            s.center = L.center.exact;
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// Iterated shifted-monomial expansion: P = sum a_gamma prod_i (T_i - c_i)^{gamma_i}
/// with hensel centers replaced by their current approximations.
std::map<std::vector<long>, TowerElem> expand(const TPoly& p, const std::vector<LayerSnap>& snaps,
                                              int upto) {
    std::map<std::vector<long>, TPoly> cur;
    cur.emplace(std::vector<long>{}, p);
    for (int i = upto; i >= 1; --i) {
        const LayerSnap& s = snaps[i - 1];
        const int var = i - 1;
        std::map<std::vector<long>, TPoly> next;
        auto push = [&](long j, const std::vector<long>& suffix, TPoly q) {
            if (q.is_zero()) return;
            std::vector<long> key;
            key.reserve(suffix.size() + 1);
            key.push_back(j);
            key.insert(key.end(), suffix.begin(), suffix.end());
            auto it = next.find(key);
            if (it == next.end())
                next.emplace(std::move(key), std::move(q));
            else
                it->second = it->second + q;
        };
        for (const auto& [suffix, q] : cur) {
            if (!s.hensel && s.radius.is_zero()) {
                push(0, suffix, substitute_var(q, var, s.center));
                continue;
            }
            TPoly base = q;
            if (s.reduce) base = reduce_var(base, var, s.defining);
            TPoly shifted = shift_var(base, var, s.center);
            auto coeffs = extract_var(shifted, var);
            for (size_t j = 0; j < coeffs.size(); ++j)
                push(static_cast<long>(j), suffix, coeffs[j]);
        }
        cur = std::move(next);
    }
    std::map<std::vector<long>, TowerElem> out;
    const std::vector<long> zero_exp(p.nvars, 0);
    for (auto& [gamma, q] : cur) {
        TowerElem c = q.coeff(zero_exp);
        if (!c.is_zero()) out.emplace(gamma, c);
    }
    return out;
}

struct CoreOut {
    Magnitude value;
    std::map<std::vector<long>, TowerElem> at_level;
};

CoreOut eval_core(const TPoly& p, const Point& x, int upto, const std::optional<Magnitude>& level) {
    require(p.nvars == x.dim(), Err::ArityMismatch, "polynomial arity does not match the point");
    require(p.max_var() < upto, Err::ArityMismatch, "polynomial uses variables beyond the prefix");

    // positive-radius hensel layers must satisfy err < radius before expansion
    for (int i = 1; i <= upto; ++i) {
        const Layer& L = x.layer(i);
        if (!L.center.hensel || L.radius.is_zero()) continue;
        int guard = 0;
        for (;;) {
            Magnitude err;
            {
                std::lock_guard<std::mutex> lock(L.center.state->mu);
                err = L.center.state->err;
            }
            if (err < L.radius) break;
            require(guard++ < L.center.budget, Err::InsufficientPrecision,
                    "cannot refine the root below the layer radius");
            require(refine_layer(x, i), Err::InsufficientPrecision,
                    "Newton refinement stalled below the layer radius");
        }
    }

    int budget = 0;
    for (int i = 1; i <= upto; ++i)
        if (x.layer(i).center.hensel) budget = std::max(budget, x.layer(i).center.budget);

    for (int round = 0;; ++round) {
        auto snaps = snapshot(x, upto);
        auto terms = expand(p, snaps, upto);

        Magnitude v = Magnitude::zero();
        Magnitude u = Magnitude::zero();
        bool has_error_terms = false;
        auto weigh = [&](const std::vector<long>& gamma, const TowerElem& c,
                         bool& error_term) -> Magnitude {
            Magnitude w = c.val();
            error_term = false;
            for (int i = 1; i <= upto; ++i) {
                long g = gamma[i - 1];
                if (g == 0) continue;
                const LayerSnap& s = snaps[i - 1];
                if (s.hensel_zero) {
                    error_term = true;
                    if (s.err.is_zero()) return Magnitude::zero();
                    w = w * s.err.pow(g);
                } else {
                    if (s.radius.is_zero()) return Magnitude::zero(); // exact rigid direction
                    w = w * s.radius.pow(g);
                }
            }
            return w;
        };
        for (const auto& [gamma, c] : terms) {
            bool error_term = false;
            Magnitude w = weigh(gamma, c, error_term);
            if (error_term) {
                if (!w.is_zero()) {
                    has_error_terms = true;
                    u = Magnitude::max(u, w);
                }
            } else {
                v = Magnitude::max(v, w);
            }
        }

        if (!has_error_terms || u < v) {
            CoreOut out;
            out.value = v;
            const Magnitude want = level ? *level : v;
            if (!want.is_zero()) {
                for (const auto& [gamma, c] : terms) {
                    bool error_term = false;
                    Magnitude w = weigh(gamma, c, error_term);
                    if (!error_term && w == want) out.at_level.emplace(gamma, c);
                }
            }
            return out;
        }

        require(round < budget, Err::InsufficientPrecision,
                "evaluation undecidable within the refinement budget");
        bool progress = false;
        for (int i = 1; i <= upto; ++i) {
            const Layer& L = x.layer(i);
            if (L.center.hensel && L.radius.is_zero() && !L.center.state->err.is_zero())
                progress = refine_layer(x, i) || progress;
        }
        require(progress, Err::InsufficientPrecision, "Newton refinement stalled");
    }
}

} // namespace

Magnitude eval(const TPoly& p, const Point& x) { return eval_core(p, x, x.dim(), std::nullopt).value; }

Magnitude eval_prefix(const TPoly& p, const Point& x, int upto) {
    return eval_core(p, x, upto, std::nullopt).value;
}

GradedResidue eval_graded(const TPoly& p, const Point& x) {
    CoreOut core = eval_core(p, x, x.dim(), std::nullopt);
    require(!core.value.is_zero(), Err::ZeroValue, "graded form of a value-zero polynomial");
    GradedResidue out;
    out.value = core.value;
    for (const auto& [gamma, c] : core.at_level) out.form.emplace(gamma, c.unit_residue());
    return out;
}

GradedResidue eval_graded_at(const TPoly& p, const Point& x, const Magnitude& level) {
    CoreOut core = eval_core(p, x, x.dim(), level);
    GradedResidue out;
    out.value = core.value;
    for (const auto& [gamma, c] : core.at_level) out.form.emplace(gamma, c.unit_residue());
    return out;
}

void Point::refine_all(int extra_steps) const {
    for (int i = 1; i <= dim(); ++i) {
        if (!layers_[i - 1].center.hensel) continue;
        for (int k = 0; k < extra_steps; ++k)
            if (!refine_layer(*this, i)) break;
    }
}

namespace {

TPoly rearity(const TPoly& p, int new_n, int var_shift, const TowerPtr& tw) {
    TPoly out(new_n, tw->zero());
    for (const auto& [e, v] : p.t) {
        std::vector<long> f(new_n, 0);
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            f[i + var_shift] = e[i];
        }
        out.add_term(f, v);
    }
    return out;
}

// definitive center equality for dim-1 layers
bool centers_equal(const Layer& a, const Layer& b) {
    if (!a.center.hensel && !b.center.hensel) return a.center.exact == b.center.exact;
    if (a.center.hensel && b.center.hensel) {
        if (!(a.center.defining == b.center.defining)) return false; // fall to the general route
        TowerElem da = a.center.state->approx.coeff({0});
        TowerElem db = b.center.state->approx.coeff({0});
        Magnitude gap = (da - db).val();
        return gap <= Magnitude::max(a.center.state->err, b.center.state->err);
    }
    const Layer& h = a.center.hensel ? a : b;
    const Layer& e = a.center.hensel ? b : a;
    TowerElem c = e.center.exact.coeff({0});
    TPoly fc = substitute_var(h.center.defining, 0, e.center.exact);
    TowerElem fval = fc.coeff({0});
    if (!fval.is_zero()) return false;
    TowerElem ap = h.center.state->approx.coeff({0});
    return (c - ap).val() <= h.center.state->err;
}

} // namespace

Order compare_points(const Point& x, const Point& y) {
    require(x.dim() == 1 && y.dim() == 1, Err::Validation, "exact comparison is dim-1 only");
    require(x.tower()->same_as(*y.tower()), Err::Validation, "points live over different towers");
    const Layer& lx = x.layer(1);
    const Layer& ly = y.layer(1);

    bool eq_known = false;
    if (!lx.center.hensel || !ly.center.hensel ||
        lx.center.defining == ly.center.defining) {
        eq_known = centers_equal(lx, ly);
        if (eq_known) {
            int c = Magnitude::cmp(lx.radius, ly.radius);
            return c < 0 ? Order::Less : (c > 0 ? Order::Greater : Order::Equal);
        }
    }

    // combined 2-dim point: |T0 - T1| = max(r_x, r_y, |c_x - c_y|)
    const TowerPtr& tw = x.tower();
    auto to2 = [&](const Layer& l, int shift) {
        Layer out;
        out.radius = l.radius;
        if (!l.center.hensel) {
            out.center = FiberElem::make_exact(rearity(l.center.exact, 2, shift, tw));
        } else {
            out.center = FiberElem::make_hensel(rearity(l.center.defining, 2, shift, tw),
                                                rearity(l.center.state->approx, 2, shift, tw),
                                                l.center.budget);
        }
        return out;
    };
    Point z(tw, {to2(lx, 0), to2(ly, 1)});
    TPoly diff = TPoly::variable(2, 0, tw->one()) - TPoly::variable(2, 1, tw->one());
    Magnitude m = eval(diff, z);
    bool xley = lx.radius <= ly.radius && m == ly.radius;
    bool ylex = ly.radius <= lx.radius && m == lx.radius;
    if (xley && ylex) return Order::Equal;
    if (xley) return Order::Less;
    if (ylex) return Order::Greater;
    return Order::Incomparable;
}

SampledOrder compare_points_sampled(const Point& x, const Point& y, int samples, std::uint64_t seed) {
    require(x.dim() == y.dim(), Err::ArityMismatch, "dimension mismatch");
    const TowerPtr& tw = x.tower();
    Rng rng(seed);
    const int n = x.dim();
    bool le = true, ge = true, strict = false;
    BaseElem proto = BaseElem::zero(tw->cfg());
    for (int s = 0; s < samples; ++s) {
        TPoly p(n, tw->zero());
        int terms = 1 + static_cast<int>(rng.below(4));
        for (int t = 0; t < terms; ++t) {
            std::vector<long> e(n, 0);
            for (int i = 0; i < n; ++i) e[i] = rng.range(0, 2);
            p.add_term(e, tw->from_base(proto.sample(rng, -2, 2)));
        }
        if (p.is_zero()) continue;
        Magnitude vx = eval(p, x);
        Magnitude vy = eval(p, y);
        if (vx > vy) le = false;
        if (vx < vy) ge = false;
        if (vx != vy) strict = true;
    }
    if (le && ge && !strict) return SampledOrder::Unknown; // indistinguishable on the sample
    if (le) return SampledOrder::LessEvidence;
    if (ge) return SampledOrder::GreaterEvidence;
    return SampledOrder::IncomparableEvidence;
}

PointType classify(const Point& x) {
    require(x.dim() == 1, Err::Validation, "type classification is dim-1 only");
    const Magnitude& r = x.layer(1).radius;
    if (r.is_zero()) return PointType::Type1;
    return r.veps() == 0 ? PointType::Type2 : PointType::Type3;
}

} // namespace ultraberk
