#include "ultraberk/ffield.hpp"

#include <algorithm>

#include "ultraberk/errors.hpp"

namespace ultraberk {

void FField::push_extension(std::vector<FFv> minpoly, std::string gen_name) {
    require(minpoly.size() >= 3, Err::Validation, "extension degree must be >= 2");
    require(eq(minpoly.back(), one(depth())), Err::NonMonic, "extension minimal polynomial not monic");
    exts_.push_back(Ext{std::move(minpoly), std::move(gen_name)});
}

long FField::dim(int level) const {
    long d = 1;
    for (int i = 1; i <= level; ++i) d *= ext_degree(i);
    return d;
}

Int FField::order(int level) const {
    Int q;
    mpz_pow_ui(q.get_mpz_t(), p_.get_mpz_t(), static_cast<unsigned long>(dim(level)));
    return q;
}

FFv FField::zero(int level) const {
    if (level == 0) return FFv{Int(0), {}};
    return FFv{Int(0), std::vector<FFv>(ext_degree(level), zero(level - 1))};
}

FFv FField::one(int level) const {
    FFv z = zero(level);
    FFv* cur = &z;
    for (int l = level; l > 0; --l) cur = &cur->sub[0];
    cur->c = 1;
    return z;
}

FFv FField::from_int(const Int& n, int level) const {
    FFv z = zero(level);
    FFv* cur = &z;
    for (int l = level; l > 0; --l) cur = &cur->sub[0];
    mpz_mod(cur->c.get_mpz_t(), n.get_mpz_t(), p_.get_mpz_t());
    return z;
}

bool FField::is_zero(const FFv& a) const {
    if (a.leaf()) return a.c == 0;
    for (const auto& s : a.sub)
        if (!is_zero(s)) return false;
    return true;
}

bool FField::eq(const FFv& a, const FFv& b) const {
    if (a.leaf() != b.leaf()) return false;
    if (a.leaf()) return a.c == b.c;
    if (a.sub.size() != b.sub.size()) return false;
    for (size_t i = 0; i < a.sub.size(); ++i)
        if (!eq(a.sub[i], b.sub[i])) return false;
    return true;
}

FFv FField::add(const FFv& a, const FFv& b, int level) const {
    if (level == 0) {
        Int s = a.c + b.c;
        if (s >= p_) s -= p_;
        return FFv{s, {}};
    }
    FFv out = a;
    for (size_t i = 0; i < out.sub.size(); ++i) out.sub[i] = add(out.sub[i], b.sub[i], level - 1);
    return out;
}

FFv FField::sub(const FFv& a, const FFv& b, int level) const { return add(a, neg(b, level), level); }

FFv FField::neg(const FFv& a, int level) const {
    if (level == 0) return FFv{a.c == 0 ? Int(0) : Int(p_ - a.c), {}};
    FFv out = a;
    for (auto& s : out.sub) s = neg(s, level - 1);
    return out;
}

FFv FField::mul(const FFv& a, const FFv& b, int level) const {
    if (level == 0) {
        Int m;
        mpz_mod(m.get_mpz_t(), Int(a.c * b.c).get_mpz_t(), p_.get_mpz_t());
        return FFv{m, {}};
    }
    const long d = ext_degree(level);
    std::vector<FFv> conv(2 * d - 1, zero(level - 1));
    for (long i = 0; i < d; ++i) {
        if (is_zero(a.sub[i])) continue;
        for (long j = 0; j < d; ++j) {
            if (is_zero(b.sub[j])) continue;
            conv[i + j] = add(conv[i + j], mul(a.sub[i], b.sub[j], level - 1), level - 1);
        }
    }
    // reduce modulo the monic minimal polynomial
    const auto& mp = exts_[level - 1].minpoly;
    for (long k = 2 * d - 2; k >= d; --k) {
        if (is_zero(conv[k])) continue;
        FFv lead = conv[k];
        conv[k] = zero(level - 1);
        for (long j = 0; j < d; ++j)
            conv[k - d + j] = sub(conv[k - d + j], mul(lead, mp[j], level - 1), level - 1);
    }
    FFv out = zero(level);
    for (long i = 0; i < d; ++i) out.sub[i] = conv[i];
    return out;
}

void FField::trim(Poly& f) const {
    while (!f.empty() && is_zero(f.back())) f.pop_back();
}

FField::Poly FField::poly_mul(const Poly& f, const Poly& g, int level) const {
    if (f.empty() || g.empty()) return {};
    Poly out(f.size() + g.size() - 1, zero(level));
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j)
            out[i + j] = add(out[i + j], mul(f[i], g[j], level), level);
    trim(out);
    return out;
}

FField::Poly FField::poly_mod(Poly f, const Poly& g, int level) const {
    trim(f);
    require(!g.empty(), Err::DivisionByZero, "poly_mod by zero");
    const FFv lc_inv = inv(g.back(), level);
    while (f.size() >= g.size() && !f.empty()) {
        FFv q = mul(f.back(), lc_inv, level);
        size_t off = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i)
            f[off + i] = sub(f[off + i], mul(q, g[i], level), level);
        trim(f);
    }
    return f;
}

FField::Poly FField::poly_gcd(Poly f, Poly g, int level) const {
    trim(f);
    trim(g);
    while (!g.empty()) {
        Poly r = poly_mod(f, g, level);
        f = std::move(g);
        g = std::move(r);
    }
    if (!f.empty()) {
        FFv lc_inv = inv(f.back(), level);
        for (auto& c : f) c = mul(c, lc_inv, level);
    }
    return f;
}

FField::Poly FField::poly_powmod(const Poly& base, const Int& e, const Poly& mod, int level) const {
    Poly result{one(level)};
    Poly b = poly_mod(base, mod, level);
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) result = poly_mod(poly_mul(result, b, level), mod, level);
        b = poly_mod(poly_mul(b, b, level), mod, level);
        k >>= 1;
    }
    return result;
}

FFv FField::inv(const FFv& a, int level) const {
    require(!is_zero(a), Err::DivisionByZero, "finite field inverse of zero");
    if (level == 0) {
        Int r;
        int ok = mpz_invert(r.get_mpz_t(), a.c.get_mpz_t(), p_.get_mpz_t());
        require(ok != 0, Err::Internal, "no inverse mod p");
        return FFv{r, {}};
    }
    // extended Euclid of a (as polynomial over level-1) against the minimal polynomial
    const auto& mp = exts_[level - 1].minpoly;
    Poly r0(mp.begin(), mp.end());
    Poly r1(a.sub.begin(), a.sub.end());
    trim(r1);
    Poly s0{}, s1{one(level - 1)};
    while (!r1.empty()) {
        // divide r0 by r1
        Poly q;
        Poly rem = r0;
        trim(rem);
        FFv lc_inv = inv(r1.back(), level - 1);
        if (rem.size() >= r1.size()) q.assign(rem.size() - r1.size() + 1, zero(level - 1));
        while (rem.size() >= r1.size() && !rem.empty()) {
            FFv qc = mul(rem.back(), lc_inv, level - 1);
            size_t off = rem.size() - r1.size();
            q[off] = qc;
            for (size_t i = 0; i < r1.size(); ++i)
                rem[off + i] = sub(rem[off + i], mul(qc, r1[i], level - 1), level - 1);
            trim(rem);
        }
        // (r0, r1) = (r1, rem); (s0, s1) = (s1, s0 - q*s1)
        Poly qs = poly_mul(q, s1, level - 1);
        Poly s2 = s0;
        if (s2.size() < qs.size()) s2.resize(qs.size(), zero(level - 1));
        for (size_t i = 0; i < qs.size(); ++i) s2[i] = sub(s2[i], qs[i], level - 1);
        trim(s2);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    require(r0.size() == 1, Err::Internal, "gcd with minimal polynomial not constant");
    FFv scale = inv(r0[0], level - 1);
    FFv out = zero(level);
    for (size_t i = 0; i < s0.size() && i < out.sub.size(); ++i)
        out.sub[i] = mul(s0[i], scale, level - 1);
    return out;
}

FFv FField::pow(FFv a, Int e, int level) const {
    require(e >= 0, Err::Internal, "negative finite field power");
    FFv result = one(level);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mul(result, a, level);
        a = mul(a, a, level);
        e >>= 1;
    }
    return result;
}

FFv FField::lift(const FFv& a, int from, int to) const {
    FFv out = a;
    for (int l = from + 1; l <= to; ++l) {
        FFv up = zero(l);
        up.sub[0] = out;
        out = std::move(up);
    }
    return out;
}

FFv FField::gen(int level) const {
    require(level >= 1, Err::Internal, "prime field has no generator");
    FFv out = zero(level);
    out.sub[1] = one(level - 1);
    return out;
}

void FField::flatten(const FFv& a, int level, std::vector<Int>& out) const {
    if (level == 0) {
        out.push_back(a.c);
        return;
    }
    for (const auto& s : a.sub) flatten(s, level - 1, out);
}

FFv FField::unflatten(const std::vector<Int>& coords, int level) const {
    size_t pos = 0;
    // recursive fill in coordinate order
    auto rec = [&](auto&& self, int lvl) -> FFv {
        if (lvl == 0) {
            FFv leaf{coords[pos++], {}};
            mpz_mod(leaf.c.get_mpz_t(), leaf.c.get_mpz_t(), p_.get_mpz_t());
            return leaf;
        }
        FFv out = zero(lvl);
        for (auto& s : out.sub) s = self(self, lvl - 1);
        return out;
    };
    require(coords.size() == static_cast<size_t>(dim(level)), Err::Internal, "unflatten size mismatch");
    return rec(rec, level);
}

FFv FField::sample(Rng& rng, int level) const {
    if (level == 0) {
        unsigned long pm = p_.fits_ulong_p() ? p_.get_ui() : 0;
        require(pm != 0, Err::Internal, "characteristic too large to sample");
        return FFv{Int(static_cast<long>(rng.below(pm))), {}};
    }
    FFv out = zero(level);
    for (auto& s : out.sub) s = sample(rng, level - 1);
    return out;
}

std::string FField::str(const FFv& a, int level) const {
    if (level == 0) return a.c.get_str();
    const std::string& g = exts_[level - 1].name;
    std::string out;
    bool first = true;
    for (size_t i = 0; i < a.sub.size(); ++i) {
        if (is_zero(a.sub[i])) continue;
        std::string term = str(a.sub[i], level - 1);
        if (level - 1 > 0 && term.find_first_of("+-") != std::string::npos) term = "(" + term + ")";
        if (i >= 1) {
            if (term == "1")
                term = g;
            else
                term += "*" + g;
            if (i >= 2) term += "^" + std::to_string(i);
        }
        out += first ? term : " + " + term;
        first = false;
    }
    return first ? "0" : out;
}

bool FField::irreducible(const std::vector<FFv>& monic_poly, int level) const {
    Poly g(monic_poly.begin(), monic_poly.end());
    trim(g);
    require(!g.empty() && eq(g.back(), one(level)), Err::NonMonic, "irreducibility test needs a monic polynomial");
    const long n = static_cast<long>(g.size()) - 1;
    if (n <= 0) return false;
    if (n == 1) return true;
    const Int q = order(level);
    const Poly x{zero(level), one(level)};

    auto frob_power = [&](long times) {
        // x^(q^times) mod g
        Poly acc = x;
        for (long i = 0; i < times; ++i) acc = poly_powmod(acc, q, g, level);
        return acc;
    };

    // x^(q^n) == x mod g
    Poly xqn = frob_power(n);
    Poly diff = xqn;
    if (diff.size() < 2) diff.resize(2, zero(level));
    diff[1] = sub(diff[1], one(level), level);
    trim(diff);
    if (!diff.empty()) return false;

    // gcd(x^(q^(n/l)) - x, g) == 1 for every prime l | n
    for (long l = 2; l <= n; ++l) {
        if (n % l != 0) continue;
        bool prime = true;
        for (long d = 2; d * d <= l; ++d)
            if (l % d == 0) prime = false;
        if (!prime) continue;
        Poly xq = frob_power(n / l);
        Poly d2 = xq;
        if (d2.size() < 2) d2.resize(2, zero(level));
        d2[1] = sub(d2[1], one(level), level);
        trim(d2);
        Poly gg = poly_gcd(g, d2, level);
        if (gg.size() != 1) return false;
    }
    return true;
}

bool FField::same_structure(const FField& other) const {
    if (this == &other) return true;
    if (p_ != other.p_ || exts_.size() != other.exts_.size()) return false;
    for (size_t i = 0; i < exts_.size(); ++i) {
        if (exts_[i].minpoly.size() != other.exts_[i].minpoly.size()) return false;
        for (size_t j = 0; j < exts_[i].minpoly.size(); ++j)
            if (!eq(exts_[i].minpoly[j], other.exts_[i].minpoly[j])) return false;
    }
    return true;
}

std::optional<std::vector<Int>> solve_mod_p(std::vector<std::vector<Int>> a, std::vector<Int> b,
                                            const Int& p) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    auto norm = [&](Int& x) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()); };
    for (auto& row : a)
        for (auto& x : row) norm(x);
    for (auto& x : b) norm(x);

    std::vector<long> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t sel = r;
        while (sel < rows && a[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[r]);
        std::swap(b[sel], b[r]);
        Int inv;
        mpz_invert(inv.get_mpz_t(), a[r][c].get_mpz_t(), p.get_mpz_t());
        for (size_t j = c; j < cols; ++j) {
            a[r][j] *= inv;
            norm(a[r][j]);
        }
        b[r] *= inv;
        norm(b[r]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Int f = a[i][c];
            for (size_t j = c; j < cols; ++j) {
                a[i][j] -= f * a[r][j];
                norm(a[i][j]);
            }
            b[i] -= f * b[r];
            norm(b[i]);
        }
        pivot_col.push_back(static_cast<long>(c));
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<Int> x(cols, Int(0));
    for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i];
    return x;
}

} // namespace ultraberk
