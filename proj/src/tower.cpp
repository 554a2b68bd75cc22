#include "ultraberk/tower.hpp"

#include <algorithm>
#include <numeric>

namespace ultraberk {

TowerPtr Tower::base(BaseCfgPtr cfg) { return TowerPtr(new Tower(std::move(cfg))); }

// ---- nested arithmetic ----

Nested Tower::nzero(int lvl) const {
    if (lvl == 0) return Nested{BaseElem::zero(cfg_), {}};
    return Nested{BaseElem(), std::vector<Nested>(step(lvl).deg, nzero(lvl - 1))};
}

Nested Tower::none(int lvl) const {
    Nested z = nzero(lvl);
    Nested* cur = &z;
    for (int l = lvl; l > 0; --l) cur = &cur->kids[0];
    cur->b = BaseElem::one(cfg_);
    return z;
}

Nested Tower::nfrom_base(const BaseElem& b, int lvl) const {
    Nested z = nzero(lvl);
    Nested* cur = &z;
    for (int l = lvl; l > 0; --l) cur = &cur->kids[0];
    cur->b = b;
    return z;
}

Nested Tower::nlift(const Nested& a, int from, int to) const {
    Nested out = a;
    for (int l = from + 1; l <= to; ++l) {
        Nested up = nzero(l);
        up.kids[0] = out;
        out = std::move(up);
    }
    return out;
}

bool Tower::nis_zero(const Nested& a) const {
    if (a.leaf()) return a.b.is_zero();
    for (const auto& k : a.kids)
        if (!nis_zero(k)) return false;
    return true;
}

bool Tower::neq(const Nested& a, const Nested& b) const {
    if (a.leaf() && b.leaf()) return a.b == b.b;
    if (a.leaf() || b.leaf()) return nis_zero(a) && nis_zero(b);
    if (a.kids.size() != b.kids.size()) return false;
    for (size_t i = 0; i < a.kids.size(); ++i)
        if (!neq(a.kids[i], b.kids[i])) return false;
    return true;
}

Nested Tower::nadd(const Nested& a, const Nested& b, int lvl) const {
    if (lvl == 0) return Nested{a.b + b.b, {}};
    Nested out = a;
    for (size_t i = 0; i < out.kids.size(); ++i) out.kids[i] = nadd(out.kids[i], b.kids[i], lvl - 1);
    return out;
}

Nested Tower::nsub(const Nested& a, const Nested& b, int lvl) const { return nadd(a, nneg(b, lvl), lvl); }

Nested Tower::nneg(const Nested& a, int lvl) const {
    if (lvl == 0) return Nested{-a.b, {}};
    Nested out = a;
    for (auto& k : out.kids) k = nneg(k, lvl - 1);
    return out;
}

Nested Tower::nmul(const Nested& a, const Nested& b, int lvl) const {
    if (lvl == 0) return Nested{a.b * b.b, {}};
    const long d = step(lvl).deg;
    std::vector<Nested> conv(2 * d - 1, nzero(lvl - 1));
    for (long i = 0; i < d; ++i) {
        if (nis_zero(a.kids[i])) continue;
        for (long j = 0; j < d; ++j) {
            if (nis_zero(b.kids[j])) continue;
            conv[i + j] = nadd(conv[i + j], nmul(a.kids[i], b.kids[j], lvl - 1), lvl - 1);
        }
    }
    const auto& mp = step(lvl).minpoly;
    for (long k = 2 * d - 2; k >= d; --k) {
        if (nis_zero(conv[k])) continue;
        Nested lead = conv[k];
        conv[k] = nzero(lvl - 1);
        for (long j = 0; j < d; ++j)
            conv[k - d + j] = nsub(conv[k - d + j], nmul(lead, mp[j], lvl - 1), lvl - 1);
    }
    Nested out = nzero(lvl);
    for (long i = 0; i < d; ++i) out.kids[i] = conv[i];
    return out;
}

Nested Tower::ninv(const Nested& a, int lvl) const {
    require(!nis_zero(a), Err::DivisionByZero, "tower inverse of zero");
    if (lvl == 0) return Nested{a.b.inverse(), {}};
    using Poly = std::vector<Nested>;
    auto trim = [&](Poly& f) {
        while (!f.empty() && nis_zero(f.back())) f.pop_back();
    };
    auto pmul = [&](const Poly& f, const Poly& g) {
        Poly out;
        if (f.empty() || g.empty()) return out;
        out.assign(f.size() + g.size() - 1, nzero(lvl - 1));
        for (size_t i = 0; i < f.size(); ++i)
            for (size_t j = 0; j < g.size(); ++j)
                out[i + j] = nadd(out[i + j], nmul(f[i], g[j], lvl - 1), lvl - 1);
        trim(out);
        return out;
    };

    const auto& mp = step(lvl).minpoly;
    Poly r0(mp.begin(), mp.end());
    Poly r1(a.kids.begin(), a.kids.end());
    trim(r1);
    Poly s0{}, s1{none(lvl - 1)};
    while (!r1.empty()) {
        Poly q;
        Poly rem = r0;
        trim(rem);
        Nested lci = ninv(r1.back(), lvl - 1);
        if (rem.size() >= r1.size()) q.assign(rem.size() - r1.size() + 1, nzero(lvl - 1));
        while (rem.size() >= r1.size() && !rem.empty()) {
            Nested qc = nmul(rem.back(), lci, lvl - 1);
            size_t off = rem.size() - r1.size();
            q[off] = qc;
            for (size_t i = 0; i < r1.size(); ++i)
                rem[off + i] = nsub(rem[off + i], nmul(qc, r1[i], lvl - 1), lvl - 1);
            trim(rem);
        }
        Poly qs = pmul(q, s1);
        Poly s2 = s0;
        if (s2.size() < qs.size()) s2.resize(qs.size(), nzero(lvl - 1));
        for (size_t i = 0; i < qs.size(); ++i) s2[i] = nsub(s2[i], qs[i], lvl - 1);
        trim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    require(r0.size() == 1, Err::Internal, "tower gcd with minimal polynomial not constant");
    Nested scale = ninv(r0[0], lvl - 1);
    Nested out = nzero(lvl);
    for (size_t i = 0; i < s0.size() && i < out.kids.size(); ++i)
        out.kids[i] = nmul(s0[i], scale, lvl - 1);
    return out;
}

std::optional<Rat> Tower::nval(const Nested& a, int lvl) const {
    if (lvl == 0) {
        if (a.b.is_zero()) return std::nullopt;
        return a.b.val().vmain();
    }
    const Rat& slope = step(lvl).slope;
    std::optional<Rat> best;
    for (size_t j = 0; j < a.kids.size(); ++j) {
        auto vj = nval(a.kids[j], lvl - 1);
        if (!vj) continue;
        Rat cand = *vj + slope * static_cast<long>(j);
        if (!best || cand < *best) best = cand;
    }
    return best;
}

int Tower::rf_level(int lvl) const {
    int r = cfg_->residue_level();
    for (int i = 1; i <= lvl; ++i)
        if (step(i).kind == StepKind::Unramified) ++r;
    return r;
}

FFv Tower::nresidue(const Nested& a, int lvl) const {
    if (lvl == 0) return a.b.residue_integral();
    const Step& st = step(lvl);
    if (st.kind == StepKind::Eisenstein) {
        // the j = 0 coordinate carries the residue; higher terms have
        // valuations outside the lower value group
        auto v0 = nval(a.kids[0], lvl - 1);
        if (v0 && *v0 == 0) return nresidue(a.kids[0], lvl - 1);
        return rf_.zero(rf_level(lvl));
    }
    const int out_lvl = rf_level(lvl);
    FFv out = rf_.zero(out_lvl);
    for (size_t j = 0; j < a.kids.size(); ++j) {
        auto vj = nval(a.kids[j], lvl - 1);
        if (!vj || *vj > 0) continue;
        out.sub[j] = nresidue(a.kids[j], lvl - 1);
    }
    return out;
}

std::string Tower::nstr(const Nested& a, int lvl) const {
    if (lvl == 0) return a.b.str();
    const std::string& g = step(lvl).name;
    std::string out;
    bool first = true;
    for (size_t i = a.kids.size(); i-- > 0;) {
        if (nis_zero(a.kids[i])) continue;
        std::string c = nstr(a.kids[i], lvl - 1);
        std::string term;
        if (i == 0) {
            term = c;
        } else {
            if (c.find_first_of("+-*/ ") != std::string::npos) c = "(" + c + ")";
            term = (c == "1") ? g : c + "*" + g;
            if (i >= 2) term += "^" + std::to_string(i);
        }
        out += first ? term : " + " + term;
        first = false;
    }
    return first ? "0" : out;
}

// ---- tower construction ----

bool Tower::same_as(const Tower& other) const {
    if (this == &other) return true;
    if (!cfg_->same_as(*other.cfg_) || steps_.size() != other.steps_.size()) return false;
    for (size_t i = 0; i < steps_.size(); ++i) {
        if (steps_[i].kind != other.steps_[i].kind || steps_[i].deg != other.steps_[i].deg)
            return false;
        for (size_t j = 0; j < steps_[i].minpoly.size(); ++j)
            if (!neq(steps_[i].minpoly[j], other.steps_[i].minpoly[j])) return false;
    }
    return true;
}

bool Tower::extends(const Tower& t) const {
    if (!cfg_->same_as(*t.cfg_) || steps_.size() < t.steps_.size()) return false;
    for (size_t i = 0; i < t.steps_.size(); ++i) {
        if (steps_[i].kind != t.steps_[i].kind || steps_[i].deg != t.steps_[i].deg) return false;
        for (size_t j = 0; j < t.steps_[i].minpoly.size(); ++j)
            if (!neq(steps_[i].minpoly[j], t.steps_[i].minpoly[j])) return false;
    }
    return true;
}

CertifyResult certify_step(const TowerPtr& tw, const UPoly<TowerElem>& m) {
    require(!m.is_zero() && m.is_monic(), Err::NonMonic, "step polynomial must be monic");
    require(m.deg() >= 2, Err::Validation, "step polynomial must have degree >= 2");
    const long d = m.deg();
    const int lvl = tw->depth();

    // coefficient valuations
    std::vector<std::optional<Rat>> vals(d + 1);
    bool integral = true;
    for (long i = 0; i <= d; ++i) {
        vals[i] = tw->nval(m.c[i].nested(), lvl);
        if (vals[i] && *vals[i] < 0) integral = false;
    }

    // Unramified: integral coefficients whose reduction is irreducible over
    // the residue field.
    if (integral) {
        const FField& rf = tw->residue_field();
        const int rlvl = tw->rf_level(lvl);
        std::vector<FFv> red;
        red.reserve(d + 1);
        for (long i = 0; i <= d; ++i) red.push_back(tw->nresidue(m.c[i].nested(), lvl));
        if (rf.irreducible(red, rlvl)) return {true, StepKind::Unramified, ""};
    }

    // Eisenstein-like: Newton polygon is a single segment whose slope has
    // relative denominator exactly d over the current value group.
    std::vector<std::pair<long, std::optional<Rat>>> pts;
    for (long i = 0; i <= d; ++i) pts.emplace_back(i, vals[i]);
    NewtonPolygon np = lower_hull(pts);
    if (!np.single_segment())
        return {false, StepKind::Eisenstein, "Newton polygon has more than one segment"};
    if (np.vertices.front().index != 0)
        return {false, StepKind::Eisenstein, "Newton polygon does not start at index 0"};
    Rat root_val = -np.slopes()[0].first;
    if (root_val <= 0)
        return {false, StepKind::Eisenstein,
                integral ? "residually reducible and generator valuation not positive"
                         : "generator valuation not positive"};
    // relative denominator of the slope over (1/e)Z must equal d
    Rat scaled = root_val * tw->ram_index();
    Int den = scaled.get_den();
    if (den != d)
        return {false, StepKind::Eisenstein,
                "slope denominator " + den.get_str() + " over the current value group, need " +
                    std::to_string(d)};
    return {true, StepKind::Eisenstein, ""};
}

TowerPtr Tower::with_step(const std::string& name, StepKind declared,
                          const UPoly<TowerElem>& minpoly) const {
    CertifyResult cert = certify_step(shared_from_this(), minpoly);
    require(cert.accepted, Err::Validation, "step rejected: " + cert.reason);
    require(cert.kind == declared, Err::Validation,
            "step certificate disagrees with the declared kind");

    auto next = TowerPtr(new Tower(cfg_));
    Tower& t = const_cast<Tower&>(*next);
    t.steps_ = steps_;
    t.rf_ = rf_;
    t.e_ = e_;
    t.f_ = f_;

    Step st;
    st.name = name;
    st.kind = cert.kind;
    st.deg = minpoly.deg();
    for (long i = 0; i <= minpoly.deg(); ++i) st.minpoly.push_back(minpoly.c[i].nested());
    if (cert.kind == StepKind::Eisenstein) {
        std::vector<std::pair<long, std::optional<Rat>>> pts;
        for (long i = 0; i <= minpoly.deg(); ++i)
            pts.emplace_back(i, nval(minpoly.c[i].nested(), depth()));
        st.slope = -lower_hull(pts).slopes()[0].first;
        t.e_ *= st.deg;
    } else {
        st.slope = Rat(0);
        std::vector<FFv> red;
        for (long i = 0; i <= minpoly.deg(); ++i)
            red.push_back(nresidue(minpoly.c[i].nested(), depth()));
        t.rf_.push_extension(std::move(red), name + "~");
        t.f_ *= st.deg;
    }
    t.steps_.push_back(std::move(st));
    return next;
}

// ---- element factories ----

TowerElem Tower::zero() const { return TowerElem(shared_from_this(), nzero(depth())); }
TowerElem Tower::one() const { return TowerElem(shared_from_this(), none(depth())); }
TowerElem Tower::from_int(const Int& n) const {
    return from_base(BaseElem::from_int(cfg_, n));
}
TowerElem Tower::from_rat(const Rat& q) const { return from_base(BaseElem::from_rat(cfg_, q)); }
TowerElem Tower::from_base(const BaseElem& b) const {
    return TowerElem(shared_from_this(), nfrom_base(b, depth()));
}
TowerElem Tower::uniformizer() const { return from_base(BaseElem::uniformizer(cfg_)); }

TowerElem Tower::gen(int i) const {
    require(i >= 1 && i <= depth(), Err::Validation, "no such tower step");
    Nested g = nzero(i);
    g.kids[1] = none(i - 1);
    return TowerElem(shared_from_this(), nlift(g, i, depth()));
}

int Tower::find_gen(const std::string& name) const {
    for (int i = 1; i <= depth(); ++i)
        if (step(i).name == name) return i;
    return -1;
}

Tower::SectionExps Tower::section_exponents(const Rat& w) const {
    auto it = section_cache_.find(w);
    if (it != section_cache_.end()) return it->second;

    std::vector<int> eis;
    for (int i = 1; i <= depth(); ++i)
        if (step(i).kind == StepKind::Eisenstein) eis.push_back(i);

    SectionExps out;
    out.e.assign(depth(), 0);
    // walk the box of Eisenstein exponents; exactly one combination leaves an
    // integer remainder
    std::vector<long> idx(eis.size(), 0);
    for (;;) {
        Rat rem = w;
        for (size_t k = 0; k < eis.size(); ++k) rem -= step(eis[k]).slope * idx[k];
        if (is_integer(rem)) {
            if (cfg_->trivial())
                require(rem == 0, Err::Validation, "magnitude not achievable over a trivially valued base");
            out.a = to_long(rem.get_num());
            for (size_t k = 0; k < eis.size(); ++k) out.e[eis[k] - 1] = idx[k];
            section_cache_.emplace(w, out);
            return out;
        }
        size_t k = 0;
        while (k < eis.size() && ++idx[k] == step(eis[k]).deg) idx[k++] = 0;
        if (k == eis.size()) break;
    }
    fail(Err::Validation, "magnitude b^(-" + rat_str(w) + ") not achievable in this tower");
}

TowerElem Tower::section_element(const Rat& w) const {
    SectionExps se = section_exponents(w);
    TowerElem out = one();
    if (se.a != 0) out = out * uniformizer().pow(se.a);
    for (int i = 1; i <= depth(); ++i)
        if (se.e[i - 1] > 0) out = out * gen(i).pow(se.e[i - 1]);
    return out;
}

// ---- TowerElem ----

TowerElem TowerElem::pow(long n) const {
    TowerElem base = n < 0 ? inverse() : *this;
    long k = n < 0 ? -n : n;
    TowerElem acc = tw_->one();
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

FFElem TowerElem::residue() const {
    Magnitude v = val();
    if (v.is_zero()) return {&tw_->residue_field(), tw_->residue_field().zero(tw_->rf_level(tw_->depth()))};
    require(v <= Magnitude::one(), Err::NotIntegralUnit, "residue of an element with |x| > 1");
    return {&tw_->residue_field(), tw_->nresidue(v_, tw_->depth())};
}

FFElem TowerElem::unit_residue() const {
    Magnitude v = val();
    require(!v.is_zero(), Err::ZeroValue, "unit part of zero");
    TowerElem unit = *this / tw_->section_element(v.vmain());
    return unit.residue();
}

TowerElem TowerElem::lift_to(const TowerPtr& k2) const {
    require(k2->extends(*tw_), Err::UncertifiedExtension,
            "target tower does not extend the element's tower");
    return TowerElem(k2, k2->nlift(v_, tw_->depth(), k2->depth()));
}

bool TowerElem::in_base() const {
    const Nested* cur = &v_;
    while (!cur->leaf()) {
        for (size_t i = 1; i < cur->kids.size(); ++i)
            if (!tw_->nis_zero(cur->kids[i])) return false;
        cur = &cur->kids[0];
    }
    return true;
}

BaseElem TowerElem::base_part() const {
    require(in_base(), Err::Internal, "element not in the base field");
    const Nested* cur = &v_;
    while (!cur->leaf()) cur = &cur->kids[0];
    return cur->b;
}

Magnitude norm_resultant(const UPoly<TowerElem>& m, const UPoly<TowerElem>& g) {
    require(!m.is_zero() && m.is_monic(), Err::NonMonic, "modulus must be monic");
    const long n = m.deg();
    require(n >= 1, Err::UncertifiedModulus, "modulus must have positive degree");
    if (n >= 2) {
        CertifyResult cert = certify_step(m.z.tower(), m);
        require(cert.accepted, Err::UncertifiedModulus, "modulus not certified irreducible: " + cert.reason);
    }
    if (g.is_zero()) return Magnitude::zero();
    TowerElem r = resultant(m, g);
    return r.val().pow(make_rat(1, n));
}

} // namespace ultraberk
