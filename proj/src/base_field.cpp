#include "ultraberk/base_field.hpp"

#include <algorithm>

#include "ultraberk/errors.hpp"

namespace ultraberk {

namespace {

bool is_prime_small(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// Deterministic irreducible monic polynomial of the given degree over F_p:
// first hit when enumerating by coefficient tuples in lexicographic order.
std::vector<FFv> find_irreducible(const FField& fp, int degree) {
    const Int& p = fp.p();
    require(p.fits_ulong_p(), Err::Validation, "residue characteristic too large");
    const unsigned long pu = p.get_ui();
    std::vector<unsigned long> digits(static_cast<size_t>(degree), 0);
    for (;;) {
        std::vector<FFv> poly;
        poly.reserve(degree + 1);
        for (int i = 0; i < degree; ++i) poly.push_back(fp.from_int(Int(static_cast<long>(digits[i])), 0));
        poly.push_back(fp.one(0));
        if (fp.irreducible(poly, 0)) return poly;
        int i = 0;
        while (i < degree && ++digits[i] == pu) digits[i++] = 0;
        require(i < degree, Err::Internal, "no irreducible polynomial found");
    }
}

} // namespace

BaseFieldCfg::BaseFieldCfg(Kind kind, Int p, int qdeg, bool trivial)
    : kind_(kind), p_(std::move(p)), qdeg_(qdeg), trivial_(trivial), rf_(p_) {
    require(is_prime_small(p_), Err::Validation, "base characteristic must be prime");
    require(qdeg_ >= 1, Err::Validation, "residue degree must be >= 1");
    if (qdeg_ > 1) rf_.push_extension(find_irreducible(rf_, qdeg_), "u");
}

std::shared_ptr<const BaseFieldCfg> BaseFieldCfg::p_adic(Int p) {
    return std::shared_ptr<const BaseFieldCfg>(new BaseFieldCfg(Kind::p_adic, std::move(p), 1, false));
}

std::shared_ptr<const BaseFieldCfg> BaseFieldCfg::t_adic(Int p, int qdeg, bool trivial) {
    return std::shared_ptr<const BaseFieldCfg>(new BaseFieldCfg(Kind::t_adic, std::move(p), qdeg, trivial));
}

// ---- t_adic polynomial helpers over the residue field ----

namespace {

using Poly = std::vector<FFv>;

void trim(const FField& F, Poly& f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
}

Poly pmul(const FField& F, const Poly& a, const Poly& b) {
    int lvl = F.depth();
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, F.zero(lvl));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            out[i + j] = F.add(out[i + j], F.mul(a[i], b[j], lvl), lvl);
    trim(F, out);
    return out;
}

Poly padd(const FField& F, Poly a, const Poly& b) {
    int lvl = F.depth();
    if (a.size() < b.size()) a.resize(b.size(), F.zero(lvl));
    for (size_t i = 0; i < b.size(); ++i) a[i] = F.add(a[i], b[i], lvl);
    trim(F, a);
    return a;
}

Poly pneg(const FField& F, Poly a) {
    int lvl = F.depth();
    for (auto& c : a) c = F.neg(c, lvl);
    return a;
}

Poly pmod(const FField& F, Poly f, const Poly& g) {
    int lvl = F.depth();
    trim(F, f);
    FFv lci = F.inv(g.back(), lvl);
    while (f.size() >= g.size() && !f.empty()) {
        FFv q = F.mul(f.back(), lci, lvl);
        size_t off = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i) f[off + i] = F.sub(f[off + i], F.mul(q, g[i], lvl), lvl);
        trim(F, f);
    }
    return f;
}

Poly pgcd(const FField& F, Poly a, Poly b) {
    int lvl = F.depth();
    trim(F, a);
    trim(F, b);
    while (!b.empty()) {
        Poly r = pmod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        FFv lci = F.inv(a.back(), lvl);
        for (auto& c : a) c = F.mul(c, lci, lvl);
    }
    return a;
}

Poly pdiv_exact(const FField& F, Poly f, const Poly& g) {
    int lvl = F.depth();
    trim(F, f);
    Poly q;
    if (f.size() >= g.size()) q.assign(f.size() - g.size() + 1, F.zero(lvl));
    FFv lci = F.inv(g.back(), lvl);
    while (f.size() >= g.size() && !f.empty()) {
        FFv qc = F.mul(f.back(), lci, lvl);
        size_t off = f.size() - g.size();
        q[off] = qc;
        for (size_t i = 0; i < g.size(); ++i) f[off + i] = F.sub(f[off + i], F.mul(qc, g[i], lvl), lvl);
        trim(F, f);
    }
    require(f.empty(), Err::Internal, "inexact polynomial division");
    return q;
}

long ord_t(const FField& F, const Poly& f) {
    for (size_t i = 0; i < f.size(); ++i)
        if (!F.is_zero(f[i])) return static_cast<long>(i);
    fail(Err::Internal, "ord of zero polynomial");
}

std::string poly_str(const FField& F, const Poly& f, const std::string& var) {
    int lvl = F.depth();
    if (f.empty()) return "0";
    std::string out;
    bool first = true;
    for (size_t i = f.size(); i-- > 0;) {
        if (F.is_zero(f[i])) continue;
        std::string c = F.str(f[i], lvl);
        std::string term;
        if (i == 0) {
            term = c;
        } else {
            if (c.find_first_of("+-*") != std::string::npos) c = "(" + c + ")";
            term = (c == "1") ? var : c + "*" + var;
            if (i >= 2) term += "^" + std::to_string(i);
        }
        out += first ? term : " + " + term;
        first = false;
    }
    return out;
}

} // namespace

BaseElem BaseElem::from_int(const BaseCfgPtr& cfg, const Int& n) {
    BaseElem e;
    e.cfg_ = cfg;
    if (cfg->kind() == BaseFieldCfg::Kind::p_adic) {
        e.q_ = Rat(n);
    } else {
        const FField& F = cfg->residue_field();
        FFv c = F.from_int(n, F.depth());
        if (!F.is_zero(c)) e.num_ = {c};
        e.den_ = {F.one(F.depth())};
    }
    return e;
}

BaseElem BaseElem::from_rat(const BaseCfgPtr& cfg, const Rat& q) {
    if (cfg->kind() == BaseFieldCfg::Kind::p_adic) {
        BaseElem e;
        e.cfg_ = cfg;
        e.q_ = q;
        return e;
    }
    BaseElem n = from_int(cfg, q.get_num());
    BaseElem d = from_int(cfg, q.get_den());
    require(!d.is_zero(), Err::DivisionByZero, "rational literal denominator divisible by p");
    return n / d;
}

BaseElem BaseElem::from_ratfun(const BaseCfgPtr& cfg, std::vector<FFv> num, std::vector<FFv> den) {
    require(cfg->kind() == BaseFieldCfg::Kind::t_adic, Err::Validation, "rational function needs a t_adic base");
    BaseElem e;
    e.cfg_ = cfg;
    e.num_ = std::move(num);
    e.den_ = std::move(den);
    e.normalize();
    return e;
}

BaseElem BaseElem::uniformizer(const BaseCfgPtr& cfg) {
    require(!cfg->trivial(), Err::Validation, "trivially valued base has no uniformizer");
    if (cfg->kind() == BaseFieldCfg::Kind::p_adic) return from_rat(cfg, Rat(cfg->p()));
    const FField& F = cfg->residue_field();
    BaseElem e;
    e.cfg_ = cfg;
    e.num_ = {F.zero(F.depth()), F.one(F.depth())};
    e.den_ = {F.one(F.depth())};
    return e;
}

void BaseElem::normalize() {
    const FField& F = cfg_->residue_field();
    trim(F, num_);
    trim(F, den_);
    require(!den_.empty(), Err::DivisionByZero, "rational function with zero denominator");
    if (num_.empty()) {
        den_ = {F.one(F.depth())};
    } else {
        Poly g = pgcd(F, num_, den_);
        if (g.size() > 1) {
            num_ = pdiv_exact(F, num_, g);
            den_ = pdiv_exact(F, den_, g);
        }
        FFv lci = F.inv(den_.back(), F.depth());
        for (auto& c : num_) c = F.mul(c, lci, F.depth());
        for (auto& c : den_) c = F.mul(c, lci, F.depth());
    }
    if (cfg_->trivial())
        require(num_.size() <= 1 && den_.size() <= 1, Err::Validation,
                "trivially valued base admits constants only");
}

bool BaseElem::is_zero() const {
    if (!cfg_) return true;
    if (cfg_->kind() == BaseFieldCfg::Kind::p_adic) return q_ == 0;
    return num_.empty();
}

BaseElem operator+(const BaseElem& a, const BaseElem& b) {
    BaseElem e;
    e.cfg_ = a.cfg_;
    if (a.cfg_->kind() == BaseFieldCfg::Kind::p_adic) {
        e.q_ = a.q_ + b.q_;
        return e;
    }
    const FField& F = a.cfg_->residue_field();
    e.num_ = padd(F, pmul(F, a.num_, b.den_), pmul(F, b.num_, a.den_));
    e.den_ = pmul(F, a.den_, b.den_);
    e.normalize();
    return e;
}

BaseElem operator-(const BaseElem& a, const BaseElem& b) { return a + (-b); }

BaseElem BaseElem::operator-() const {
    BaseElem e = *this;
    if (cfg_->kind() == BaseFieldCfg::Kind::p_adic) {
        e.q_ = -q_;
    } else {
        e.num_ = pneg(cfg_->residue_field(), e.num_);
    }
    return e;
}

BaseElem operator*(const BaseElem& a, const BaseElem& b) {
    BaseElem e;
    e.cfg_ = a.cfg_;
    if (a.cfg_->kind() == BaseFieldCfg::Kind::p_adic) {
        e.q_ = a.q_ * b.q_;
        return e;
    }
    const FField& F = a.cfg_->residue_field();
    e.num_ = pmul(F, a.num_, b.num_);
    e.den_ = pmul(F, a.den_, b.den_);
    e.normalize();
    return e;
}

BaseElem operator/(const BaseElem& a, const BaseElem& b) { return a * b.inverse(); }

bool operator==(const BaseElem& a, const BaseElem& b) {
    if (a.is_zero() && b.is_zero()) return true;
    if (a.cfg_->kind() == BaseFieldCfg::Kind::p_adic) return a.q_ == b.q_;
    const FField& F = a.cfg_->residue_field();
    if (a.num_.size() != b.num_.size() || a.den_.size() != b.den_.size()) return false;
    for (size_t i = 0; i < a.num_.size(); ++i)
        if (!F.eq(a.num_[i], b.num_[i])) return false;
    for (size_t i = 0; i < a.den_.size(); ++i)
        if (!F.eq(a.den_[i], b.den_[i])) return false;
    return true;
}

BaseElem BaseElem::inverse() const {
    require(!is_zero(), Err::DivisionByZero, "inverse of zero");
    BaseElem e;
    e.cfg_ = cfg_;
    if (cfg_->kind() == BaseFieldCfg::Kind::p_adic) {
        e.q_ = 1 / q_;
        return e;
    }
    e.num_ = den_;
    e.den_ = num_;
    e.normalize();
    return e;
}

BaseElem BaseElem::pow(long n) const {
    BaseElem base = n < 0 ? inverse() : *this;
    long k = n < 0 ? -n : n;
    BaseElem acc = one(cfg_);
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

Magnitude BaseElem::val() const {
    if (is_zero()) return Magnitude::zero();
    if (cfg_->kind() == BaseFieldCfg::Kind::p_adic)
        return Magnitude::from_exp(Rat(rat_val(q_, cfg_->p())));
    if (cfg_->trivial()) return Magnitude::one();
    const FField& F = cfg_->residue_field();
    return Magnitude::from_exp(Rat(ord_t(F, num_) - ord_t(F, den_)));
}

FFv BaseElem::residue_integral() const {
    const FField& F = cfg_->residue_field();
    if (is_zero()) return F.zero(F.depth());
    Magnitude v = val();
    require(v <= Magnitude::one(), Err::NotIntegralUnit, "residue of an element with |x| > 1");
    if (v < Magnitude::one()) return F.zero(F.depth());
    if (cfg_->kind() == BaseFieldCfg::Kind::p_adic) {
        // canonical gcd(num, den) = 1, so neither carries a p factor here
        FFv n = F.from_int(q_.get_num(), 0);
        FFv d = F.from_int(q_.get_den(), 0);
        return F.mul(n, F.inv(d, 0), 0);
    }
    return F.mul(num_[0], F.inv(den_[0], F.depth()), F.depth());
}

BaseElem BaseElem::reduce_precision(long m) const {
    if (is_zero() || cfg_->trivial()) return *this;
    Rat vr = val().vmain();
    require(is_integer(vr), Err::Internal, "base valuation not integral");
    long v = to_long(vr.get_num());
    if (v >= m) return zero(cfg_);
    if (cfg_->kind() == BaseFieldCfg::Kind::p_adic) {
        // x = p^v * u with u a unit; replace u by its integer residue mod p^(m-v)
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), cfg_->p().get_mpz_t(), static_cast<unsigned long>(m - v));
        Rat u = q_;
        if (v != 0) {
            Rat pv(cfg_->p());
            Rat scale(1);
            for (long i = 0; i < std::labs(v); ++i) scale *= pv;
            u = v > 0 ? Rat(q_ / scale) : Rat(q_ * scale);
        }
        // u = a/b with both prime to p
        Int a = u.get_num(), b = u.get_den(), binv, t;
        int ok = mpz_invert(binv.get_mpz_t(), b.get_mpz_t(), pk.get_mpz_t());
        require(ok != 0, Err::Internal, "unit denominator not invertible");
        mpz_mod(t.get_mpz_t(), Int(a * binv).get_mpz_t(), pk.get_mpz_t());
        BaseElem out = from_int(cfg_, t);
        if (v != 0) out = out * uniformizer(cfg_).pow(v);
        return out;
    }
    // t_adic: x = t^v * u with u a unit series; truncate u at t^(m - v)
    const FField& F = cfg_->residue_field();
    const int lvl = F.depth();
    auto ord = [&](const std::vector<FFv>& f) {
        long o = 0;
        while (F.is_zero(f[o])) ++o;
        return o;
    };
    const long on = ord(num_), od = ord(den_);
    std::vector<FFv> nu(num_.begin() + on, num_.end());
    std::vector<FFv> de(den_.begin() + od, den_.end());
    const long need = m - v;
    // series u = nu / de to precision t^need
    std::vector<FFv> u(static_cast<size_t>(need), F.zero(lvl));
    FFv d0i = F.inv(de[0], lvl);
    for (long k = 0; k < need; ++k) {
        FFv acc = k < static_cast<long>(nu.size()) ? nu[k] : F.zero(lvl);
        for (long j = 1; j <= k && j < static_cast<long>(de.size()); ++j)
            acc = F.sub(acc, F.mul(de[j], u[k - j], lvl), lvl);
        u[k] = F.mul(acc, d0i, lvl);
    }
    if (v >= 0) {
        std::vector<FFv> out(static_cast<size_t>(v), F.zero(lvl));
        out.insert(out.end(), u.begin(), u.end());
        return from_ratfun(cfg_, std::move(out), {F.one(lvl)});
    }
    std::vector<FFv> den_t(static_cast<size_t>(-v + 1), F.zero(lvl));
    den_t.back() = F.one(lvl);
    return from_ratfun(cfg_, std::move(u), std::move(den_t));
}

std::string BaseElem::str() const {
    if (cfg_->kind() == BaseFieldCfg::Kind::p_adic) return rat_str(q_);
    const FField& F = cfg_->residue_field();
    std::string n = poly_str(F, num_, "t");
    if (den_.size() == 1 && F.eq(den_[0], F.one(F.depth()))) return n;
    std::string d = poly_str(F, den_, "t");
    return "(" + n + ")/(" + d + ")";
}

BaseElem BaseElem::sample(Rng& rng, long exp_lo, long exp_hi) const {
    const BaseCfgPtr& cfg = cfg_;
    if (rng.below(8) == 0) return zero(cfg);
    if (cfg->trivial()) {
        const FField& F = cfg->residue_field();
        FFv c = F.sample(rng, F.depth());
        while (F.is_zero(c)) c = F.sample(rng, F.depth());
        return from_ratfun(cfg, {c}, {F.one(F.depth())});
    }
    long z = rng.range(exp_lo, exp_hi);
    if (cfg->kind() == BaseFieldCfg::Kind::p_adic) {
        // unit * p^z with a small multi-digit unit
        Int unit = 1 + Int(static_cast<long>(rng.below(64)));
        while (unit % cfg->p() == 0) unit += 1;
        BaseElem e = from_rat(cfg, Rat(unit));
        return e * uniformizer(cfg).pow(z);
    }
    const FField& F = cfg->residue_field();
    std::vector<FFv> num;
    int len = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < len; ++i) num.push_back(F.sample(rng, F.depth()));
    while (F.is_zero(num[0])) num[0] = F.sample(rng, F.depth());
    BaseElem e = from_ratfun(cfg, num, {F.one(F.depth())});
    return e * uniformizer(cfg).pow(z);
}

} // namespace ultraberk
