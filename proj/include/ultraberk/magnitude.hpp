#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultraberk/rational.hpp"

namespace ultraberk {

/// A non-Archimedean absolute value b^{-(a + c*eps)} with a, c rational and
/// eps an infinitesimal, or the distinguished ZERO (exponent +infinity).
/// The scale base b is carried by the field context, not stored here.
///
/// Order: comparisons agree with the real value b^{-(a + c*delta)} for every
/// sufficiently small delta > 0, i.e. exponents compare lexicographically and
/// larger exponent means smaller magnitude.
class Magnitude {
public:
    Magnitude() : zero_(true) {}

    static Magnitude zero() { return Magnitude(); }
    static Magnitude one() { return from_exp(Rat(0)); }

    /// Magnitude with valuation exponent main + eps*epsilon (value b^{-exponent}).
    static Magnitude from_exp(Rat main, Rat eps = Rat(0)) {
        Magnitude m;
        m.zero_ = false;
        m.main_ = std::move(main);
        m.eps_ = std::move(eps);
        return m;
    }

    bool is_zero() const { return zero_; }
    bool is_one() const { return !zero_ && main_ == 0 && eps_ == 0; }
    const Rat& vmain() const { return main_; }
    const Rat& veps() const { return eps_; }

    /// -1 if a < b (as absolute values), 0 if equal, +1 if a > b.
    static int cmp(const Magnitude& a, const Magnitude& b) {
        if (a.zero_ && b.zero_) return 0;
        if (a.zero_) return -1;
        if (b.zero_) return 1;
        if (a.main_ != b.main_) return a.main_ > b.main_ ? -1 : 1;
        if (a.eps_ != b.eps_) return a.eps_ > b.eps_ ? -1 : 1;
        return 0;
    }

    friend bool operator==(const Magnitude& a, const Magnitude& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Magnitude& a, const Magnitude& b) { return cmp(a, b) != 0; }
    friend bool operator<(const Magnitude& a, const Magnitude& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Magnitude& a, const Magnitude& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Magnitude& a, const Magnitude& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Magnitude& a, const Magnitude& b) { return cmp(a, b) >= 0; }

    friend Magnitude operator*(const Magnitude& a, const Magnitude& b) {
        if (a.zero_ || b.zero_) return zero();
        return from_exp(a.main_ + b.main_, a.eps_ + b.eps_);
    }

    friend Magnitude operator/(const Magnitude& a, const Magnitude& b) {
        require(!b.zero_, Err::DivisionByZero, "magnitude division by zero");
        if (a.zero_) return zero();
        return from_exp(a.main_ - b.main_, a.eps_ - b.eps_);
    }

    /// Exact q-th power; pow(1/n) is the exact n-th root.
    Magnitude pow(const Rat& q) const {
        if (zero_) {
            require(q > 0, Err::NegativePowerOfZero, "zero magnitude to a nonpositive power");
            return zero();
        }
        return from_exp(main_ * q, eps_ * q);
    }

    Magnitude pow(long n) const { return pow(Rat(n)); }

    static Magnitude max(const Magnitude& a, const Magnitude& b) { return cmp(a, b) >= 0 ? a : b; }
    static Magnitude min(const Magnitude& a, const Magnitude& b) { return cmp(a, b) <= 0 ? a : b; }

    /// True when the exponent lies in (1/den)Z with no infinitesimal part.
    bool exponent_in_lattice(long den) const {
        if (zero_) return false;
        if (eps_ != 0) return false;
        Rat scaled = main_ * den;
        return is_integer(scaled);
    }

    std::string str() const;
    static Magnitude parse(const std::string& text);

private:
    bool zero_ = true;
    Rat main_; // valuation exponent, rational part
    Rat eps_;  // valuation exponent, infinitesimal coefficient
};

/// Lower convex hull of coefficient valuations.
struct NewtonPolygon {
    struct Vertex {
        long index;
        Rat val;
    };
    std::vector<Vertex> vertices; // strictly increasing index, extreme points only

    /// Geometric slopes with multiplicities, nondecreasing.
    std::vector<std::pair<Rat, long>> slopes() const;
    /// Root valuations (= negated slopes) with multiplicities, nonincreasing.
    std::vector<std::pair<Rat, long>> root_valuations() const;
    bool single_segment() const { return vertices.size() == 2; }
};

/// Points are (index, valuation); nullopt stands for +infinity (zero coefficient).
NewtonPolygon lower_hull(const std::vector<std::pair<long, std::optional<Rat>>>& points);

/// Solves lead * rho * prod_i max(rho, d_i) = target for rho, exactly.
/// The left side is strictly increasing in rho, so the solution is unique.
Magnitude solve_radius(const Magnitude& lead, const std::vector<Magnitude>& distances,
                       const Magnitude& target);

} // namespace ultraberk
