#pragma once

#include <utility>
#include <vector>

#include "ultraberk/errors.hpp"

namespace ultraberk {

/// Dense univariate polynomial over a field-like coefficient type C.
/// C must provide +, -, *, unary -, ==, and the ADL helpers
/// ub_zero/ub_one/ub_is_zero/ub_inv. Coefficients ascending, trailing zeros
/// stripped; the zero polynomial has empty coefficients and deg() == -1.
template <class C>
struct UPoly {
    C z; // zero of the coefficient ring, carries the ring context
    std::vector<C> c;

    explicit UPoly(const C& zero_like) : z(ub_zero(zero_like)) {}
    UPoly(const C& zero_like, std::vector<C> coeffs) : z(ub_zero(zero_like)), c(std::move(coeffs)) {
        trim();
    }

    long deg() const { return static_cast<long>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool is_monic() const { return !c.empty() && c.back() == ub_one(z); }
    const C& lc() const { return c.back(); }
    C coeff(long i) const { return (i >= 0 && i < static_cast<long>(c.size())) ? c[i] : z; }

    void trim() {
        while (!c.empty() && ub_is_zero(c.back())) c.pop_back();
    }

    static UPoly monomial(const C& zero_like, long degree, const C& coeff) {
        UPoly f(zero_like);
        f.c.assign(degree + 1, f.z);
        f.c[degree] = coeff;
        f.trim();
        return f;
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        UPoly out = a;
        if (out.c.size() < b.c.size()) out.c.resize(b.c.size(), out.z);
        for (size_t i = 0; i < b.c.size(); ++i) out.c[i] = out.c[i] + b.c[i];
        out.trim();
        return out;
    }

    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        UPoly out = a;
        if (out.c.size() < b.c.size()) out.c.resize(b.c.size(), out.z);
        for (size_t i = 0; i < b.c.size(); ++i) out.c[i] = out.c[i] - b.c[i];
        out.trim();
        return out;
    }

    UPoly operator-() const {
        UPoly out = *this;
        for (auto& x : out.c) x = -x;
        return out;
    }

    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        UPoly out(a.z);
        if (a.is_zero() || b.is_zero()) return out;
        out.c.assign(a.c.size() + b.c.size() - 1, out.z);
        for (size_t i = 0; i < a.c.size(); ++i) {
            if (ub_is_zero(a.c[i])) continue;
            for (size_t j = 0; j < b.c.size(); ++j) out.c[i + j] = out.c[i + j] + a.c[i] * b.c[j];
        }
        out.trim();
        return out;
    }

    friend UPoly operator*(const C& s, const UPoly& a) {
        UPoly out = a;
        for (auto& x : out.c) x = s * x;
        out.trim();
        return out;
    }

    friend bool operator==(const UPoly& a, const UPoly& b) {
        if (a.c.size() != b.c.size()) return false;
        for (size_t i = 0; i < a.c.size(); ++i)
            if (!(a.c[i] == b.c[i])) return false;
        return true;
    }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    C eval(const C& x) const { // Horner
        C acc = z;
        for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
    }
};

/// Quotient and remainder; the divisor's leading coefficient must be invertible.
template <class C>
std::pair<UPoly<C>, UPoly<C>> divmod(const UPoly<C>& a, const UPoly<C>& b) {
    require(!b.is_zero(), Err::DivisionByZero, "polynomial division by zero");
    UPoly<C> q(a.z), r = a;
    C lci = ub_inv(b.lc());
    if (r.deg() >= b.deg()) q.c.assign(r.deg() - b.deg() + 1, q.z);
    while (!r.is_zero() && r.deg() >= b.deg()) {
        C f = r.lc() * lci;
        long off = r.deg() - b.deg();
        q.c[off] = f;
        for (long i = 0; i <= b.deg(); ++i) r.c[off + i] = r.c[off + i] - f * b.c[i];
        r.trim();
    }
    q.trim();
    return {q, r};
}

/// Formal derivative.
template <class C>
UPoly<C> derivative(const UPoly<C>& a) {
    UPoly<C> out(a.z);
    for (long i = 1; i <= a.deg(); ++i) {
        C k = out.z;
        for (long j = 0; j < i; ++j) k = k + ub_one(a.z);
        out.c.push_back(k * a.c[i]);
    }
    out.trim();
    return out;
}

/// Coefficients c_i with Q(T) = sum c_i (T - alpha)^i; exact in every
/// characteristic (repeated synthetic division computes Hasse-shift data).
template <class C>
std::vector<C> hasse_shift(const UPoly<C>& q, const C& alpha) {
    std::vector<C> c = q.c;
    const long n = q.deg();
    for (long k = 0; k < n; ++k)
        for (long j = n - 1; j >= k; --j) c[j] = c[j] + alpha * c[j + 1];
    if (c.empty()) c.push_back(q.z);
    return c;
}

/// Digits a_i with Q = sum a_i R0^i, deg a_i < deg R0; R0 must be monic.
template <class C>
std::vector<UPoly<C>> radix_expand(const UPoly<C>& q, const UPoly<C>& r0) {
    require(!r0.is_zero() && r0.is_monic(), Err::NonMonicRadix, "radix base must be monic");
    require(r0.deg() >= 1, Err::NonMonicRadix, "radix base must have degree >= 1");
    std::vector<UPoly<C>> out;
    UPoly<C> cur = q;
    do {
        auto [quot, rem] = divmod(cur, r0);
        out.push_back(rem);
        cur = quot;
    } while (!cur.is_zero());
    return out;
}

/// Resultant with the convention Res(A,B) = lc(A)^{deg B} * prod B(roots of A)
/// (matches the Sylvester determinant). Subresultant PRS keeps intermediate
/// growth down.
template <class C>
C resultant(UPoly<C> a, UPoly<C> b) {
    require(!(a.is_zero() && b.is_zero()), Err::BothZero, "resultant of two zero polynomials");
    if (a.is_zero() || b.is_zero()) return a.z;
    C one = ub_one(a.z);
    C sign = one;
    if (a.deg() < b.deg()) {
        if ((a.deg() & 1) && (b.deg() & 1)) sign = -sign;
        std::swap(a, b);
    }
    if (b.deg() == 0) {
        C acc = one;
        for (long i = 0; i < a.deg(); ++i) acc = acc * b.c[0];
        return sign * acc;
    }
    C g = one, h = one;
    auto cpow = [&](C base, long e) {
        C acc = one;
        for (long i = 0; i < e; ++i) acc = acc * base;
        return acc;
    };
    for (;;) {
        long da = a.deg(), db = b.deg();
        long delta = da - db;
        if ((da & 1) && (db & 1)) sign = -sign;
        // pseudo-remainder lc(b)^(delta+1) * a mod b
        UPoly<C> r = cpow(b.lc(), delta + 1) * a;
        r = divmod(r, b).second;
        if (r.is_zero()) return a.z; // nonconstant common factor
        C divisor = g * cpow(h, delta);
        UPoly<C> nb(a.z);
        C divisor_inv = ub_inv(divisor);
        nb.c.reserve(r.c.size());
        for (auto& x : r.c) nb.c.push_back(x * divisor_inv);
        nb.trim();
        a = b;
        b = nb;
        g = a.lc();
        // h = g^delta * h^(1-delta)
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = cpow(g, delta) * ub_inv(cpow(h, delta - 1));
        }
        if (b.deg() == 0) {
            long dA = a.deg();
            // Res = s * lc(b)^dA / h^(dA-1)
            C num = cpow(b.c[0], dA);
            C den = cpow(h, dA - 1);
            return sign * num * ub_inv(den);
        }
    }
}

/// Monic gcd over a field.
template <class C>
UPoly<C> poly_gcd(UPoly<C> a, UPoly<C> b) {
    while (!b.is_zero()) {
        UPoly<C> r = divmod(a, b).second;
        a = b;
        b = r;
    }
    if (!a.is_zero()) {
        C lci = ub_inv(a.lc());
        for (auto& x : a.c) x = x * lci;
    }
    return a;
}

} // namespace ultraberk
