#pragma once

#include <map>
#include <vector>

#include "ultraberk/multideg.hpp"
#include "ultraberk/upoly.hpp"

namespace ultraberk {

/// Sparse multivariate polynomial with a fixed variable count; no zero
/// coefficients are stored, term keys are exponent vectors.
template <class C>
struct MPoly {
    int nvars = 0;
    C z;
    std::map<std::vector<long>, C> t;

    MPoly() = default;
    MPoly(int n, const C& zero_like) : nvars(n), z(ub_zero(zero_like)) {}

    bool is_zero() const { return t.empty(); }

    static MPoly constant(int n, const C& value) {
        MPoly out(n, value);
        if (!ub_is_zero(value)) out.t.emplace(std::vector<long>(n, 0), value);
        return out;
    }

    static MPoly monomial(int n, const MultiDeg& d, const C& coeff) {
        MPoly out(n, coeff);
        if (!ub_is_zero(coeff)) out.t.emplace(d.e, coeff);
        return out;
    }

    static MPoly variable(int n, int i, const C& one_like) {
        std::vector<long> e(n, 0);
        e[i] = 1;
        return monomial(n, MultiDeg(e), ub_one(one_like));
    }

    C coeff(const std::vector<long>& e) const {
        auto it = t.find(e);
        return it == t.end() ? z : it->second;
    }

    void add_term(const std::vector<long>& e, const C& v) {
        if (ub_is_zero(v)) return;
        auto [it, fresh] = t.emplace(e, v);
        if (!fresh) {
            it->second = it->second + v;
            if (ub_is_zero(it->second)) t.erase(it);
        }
    }

    long total_degree() const { // -1 for the zero polynomial
        long d = -1;
        for (const auto& [e, v] : t) d = std::max(d, MultiDeg(e).total());
        return d;
    }

    /// Largest variable index actually used, or -1.
    int max_var() const {
        int m = -1;
        for (const auto& [e, v] : t)
            for (int i = 0; i < nvars; ++i)
                if (e[i] > 0) m = std::max(m, i);
        return m;
    }

    /// Leading multidegree in the total order.
    MultiDeg lead() const {
        require(!t.empty(), Err::Internal, "leading term of zero polynomial");
        auto it = t.begin();
        MultiDeg best(it->first);
        for (++it; it != t.end(); ++it) {
            MultiDeg d(it->first);
            if (best < d) best = d;
        }
        return best;
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) {
        require(a.nvars == b.nvars, Err::ArityMismatch, "polynomial arity mismatch");
        MPoly out = a;
        for (const auto& [e, v] : b.t) out.add_term(e, v);
        return out;
    }

    friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

    MPoly operator-() const {
        MPoly out = *this;
        for (auto& [e, v] : out.t) v = -v;
        return out;
    }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        require(a.nvars == b.nvars, Err::ArityMismatch, "polynomial arity mismatch");
        MPoly out(a.nvars, a.z);
        std::vector<long> e(a.nvars);
        for (const auto& [ea, va] : a.t)
            for (const auto& [eb, vb] : b.t) {
                for (int i = 0; i < a.nvars; ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, va * vb);
            }
        return out;
    }

    friend MPoly operator*(const C& s, const MPoly& a) {
        MPoly out(a.nvars, a.z);
        for (const auto& [e, v] : a.t) out.add_term(e, s * v);
        return out;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        if (a.nvars != b.nvars || a.t.size() != b.t.size()) return false;
        auto ia = a.t.begin();
        auto ib = b.t.begin();
        for (; ia != a.t.end(); ++ia, ++ib)
            if (ia->first != ib->first || !(ia->second == ib->second)) return false;
        return true;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    MPoly pow(long n) const {
        MPoly acc = constant(nvars, ub_one(z));
        MPoly base = *this;
        while (n > 0) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }
};

/// View of P as a univariate polynomial in variable i: slot j holds the
/// multivariate coefficient of T_i^j (free of variable i).
template <class C>
std::vector<MPoly<C>> extract_var(const MPoly<C>& p, int i) {
    long top = 0;
    for (const auto& [e, v] : p.t) top = std::max(top, e[i]);
    std::vector<MPoly<C>> out(top + 1, MPoly<C>(p.nvars, p.z));
    for (const auto& [e, v] : p.t) {
        std::vector<long> f = e;
        long j = f[i];
        f[i] = 0;
        out[j].add_term(f, v);
    }
    return out;
}

template <class C>
MPoly<C> assemble_var(const std::vector<MPoly<C>>& coeffs, int i, int nvars, const C& zero_like) {
    MPoly<C> out(nvars, ub_zero(zero_like));
    for (size_t j = 0; j < coeffs.size(); ++j)
        for (const auto& [e, v] : coeffs[j].t) {
            std::vector<long> f = e;
            f[i] += static_cast<long>(j);
            out.add_term(f, v);
        }
    return out;
}

/// Substitutes variable i by s (which must not use variable i).
template <class C>
MPoly<C> substitute_var(const MPoly<C>& p, int i, const MPoly<C>& s) {
    auto coeffs = extract_var(p, i);
    MPoly<C> out(p.nvars, p.z);
    // Horner from the top slot down
    for (size_t j = coeffs.size(); j-- > 0;) out = out * s + coeffs[j];
    return out;
}

/// Taylor shift in variable i: returns P with T_i replaced by T_i + s
/// (s free of variable i); slot-j coefficients of the result in T_i are the
/// shift data of P around -s... phrased directly: result(T_i) = P(T_i + s).
template <class C>
MPoly<C> shift_var(const MPoly<C>& p, int i, const MPoly<C>& s) {
    auto coeffs = extract_var(p, i);
    MPoly<C> xi = MPoly<C>::variable(p.nvars, i, ub_one(p.z));
    MPoly<C> xs = xi + s;
    MPoly<C> out(p.nvars, p.z);
    for (size_t j = coeffs.size(); j-- > 0;) out = out * xs + coeffs[j];
    return out;
}

/// Remainder of P by a monic-in-variable-i polynomial F.
template <class C>
MPoly<C> reduce_var(const MPoly<C>& p, int i, const MPoly<C>& f) {
    auto fc = extract_var(f, i);
    const long df = static_cast<long>(fc.size()) - 1;
    require(df >= 1, Err::Internal, "reduce_var needs positive degree");
    require(!fc[df].is_zero(), Err::Internal, "reduce_var lead missing");
    // monic check: lead coefficient must be the constant 1
    MPoly<C> one = MPoly<C>::constant(p.nvars, ub_one(p.z));
    require(fc[df] == one, Err::NonMonic, "reduce_var divisor must be monic in its variable");
    auto pc = extract_var(p, i);
    while (static_cast<long>(pc.size()) - 1 >= df) {
        long dp = static_cast<long>(pc.size()) - 1;
        MPoly<C> lead = pc.back();
        if (!lead.is_zero()) {
            for (long k = 0; k <= df; ++k) pc[dp - df + k] = pc[dp - df + k] - lead * fc[k];
        }
        pc.pop_back();
    }
    return assemble_var(pc, i, p.nvars, p.z);
}

} // namespace ultraberk
