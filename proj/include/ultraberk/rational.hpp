#pragma once

#include <gmpxx.h>

#include <string>

#include "ultraberk/errors.hpp"

namespace ultraberk {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
    require(den != 0, Err::DivisionByZero, "rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat make_rat(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

/// Valuation of a nonzero integer at the prime p (number of p factors).
inline long int_val(Int n, const Int& p) {
    require(n != 0, Err::Internal, "valuation of zero integer");
    long v = 0;
    Int q, r;
    for (;;) {
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        n = q;
        ++v;
    }
    return v;
}

/// p-adic valuation of a nonzero rational.
inline long rat_val(const Rat& q, const Int& p) {
    require(q != 0, Err::Internal, "valuation of zero rational");
    return int_val(q.get_num(), p) - int_val(q.get_den(), p);
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

/// Parses "a" or "a/b" with optional sign.
inline Rat rat_parse(const std::string& s) {
    std::string t = s;
    if (!t.empty() && t[0] == '+') t = t.substr(1);
    Rat q;
    if (q.set_str(t, 10) != 0) fail(Err::SyntaxError, "bad rational literal '" + s + "'");
    q.canonicalize();
    return q;
}

inline Int rat_floor(const Rat& q) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
}

inline Int rat_ceil(const Rat& q) {
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return c;
}

inline bool mpz_fits_long(const Int& n) { return n.fits_slong_p(); }

inline long to_long(const Int& n) {
    require(n.fits_slong_p(), Err::Internal, "integer out of long range");
    return n.get_si();
}

} // namespace ultraberk
