#pragma once

#include <string>
#include <vector>

#include "ultraberk/errors.hpp"

namespace ultraberk {

/// Exponent vector in N^n under the total order: total degree first, then at
/// the leftmost differing coordinate the smaller entry wins. This is a well
/// order of type omega; pred/succ walk it.
struct MultiDeg {
    std::vector<long> e;

    MultiDeg() = default;
    explicit MultiDeg(std::vector<long> exps) : e(std::move(exps)) {}
    static MultiDeg zero(int n) { return MultiDeg(std::vector<long>(n, 0)); }

    int nvars() const { return static_cast<int>(e.size()); }
    long total() const {
        long t = 0;
        for (long x : e) t += x;
        return t;
    }
    bool is_zero() const { return total() == 0; }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
        return s + ")";
    }
};

inline int multideg_cmp(const MultiDeg& a, const MultiDeg& b) {
    require(a.nvars() == b.nvars(), Err::ArityMismatch, "multidegree arity mismatch");
    long ta = a.total(), tb = b.total();
    if (ta != tb) return ta < tb ? -1 : 1;
    for (int i = 0; i < a.nvars(); ++i)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
    return 0;
}

inline bool operator<(const MultiDeg& a, const MultiDeg& b) { return multideg_cmp(a, b) < 0; }
inline bool operator<=(const MultiDeg& a, const MultiDeg& b) { return multideg_cmp(a, b) <= 0; }
inline bool operator==(const MultiDeg& a, const MultiDeg& b) { return multideg_cmp(a, b) == 0; }
inline bool operator!=(const MultiDeg& a, const MultiDeg& b) { return multideg_cmp(a, b) != 0; }
inline bool operator>(const MultiDeg& a, const MultiDeg& b) { return multideg_cmp(a, b) > 0; }
inline bool operator>=(const MultiDeg& a, const MultiDeg& b) { return multideg_cmp(a, b) >= 0; }

inline MultiDeg multideg_succ(const MultiDeg& d) {
    const int n = d.nvars();
    MultiDeg out = d;
    // within the same total-degree block: bump the rightmost position that has
    // mass to its right, dump the leftover into the last slot
    for (int i = n - 2; i >= 0; --i) {
        long right = 0;
        for (int k = i + 1; k < n; ++k) right += out.e[k];
        if (right > 0) {
            out.e[i] += 1;
            for (int k = i + 1; k < n; ++k) out.e[k] = 0;
            out.e[n - 1] = right - 1;
            return out;
        }
    }
    // block maximum (t,0,...,0): move to the next block minimum (0,...,0,t+1)
    long t = d.total();
    for (auto& x : out.e) x = 0;
    out.e[n - 1] = t + 1;
    return out;
}

inline MultiDeg multideg_pred(const MultiDeg& d) {
    require(!d.is_zero(), Err::PredOfZero, "predecessor of the zero multidegree");
    const int n = d.nvars();
    MultiDeg out = d;
    for (int i = n - 2; i >= 0; --i) {
        if (out.e[i] > 0) {
            long right = 0;
            for (int k = i + 1; k < n; ++k) right += out.e[k];
            out.e[i] -= 1;
            for (int k = i + 1; k < n; ++k) out.e[k] = 0;
            out.e[i + 1] = right + 1;
            return out;
        }
    }
    // block minimum (0,...,0,t): previous block maximum (t-1,0,...,0)
    long t = d.total();
    for (auto& x : out.e) x = 0;
    out.e[0] = t - 1;
    return out;
}

/// All multidegrees <= d, ascending; same cardinality as a monomial basis of
/// the span of {T^e : e <= d}.
inline std::vector<MultiDeg> enumerate_upto(const MultiDeg& d) {
    std::vector<MultiDeg> out;
    MultiDeg cur = MultiDeg::zero(d.nvars());
    for (;;) {
        out.push_back(cur);
        if (cur == d) break;
        cur = multideg_succ(cur);
    }
    return out;
}

} // namespace ultraberk
