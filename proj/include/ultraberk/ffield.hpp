#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultraberk/rational.hpp"
#include "ultraberk/rng.hpp"

namespace ultraberk {

/// Nested finite-field value. A leaf holds an integer in [0, p); a node at an
/// extension level holds exactly deg coordinates over the level below.
struct FFv {
    Int c;
    std::vector<FFv> sub;
    bool leaf() const { return sub.empty(); }
};

/// A finite field F_p with a chain of monic irreducible extensions on top.
/// Levels: 0 is the prime field, level i is the i-th extension. Construction
/// is single-owner; elements are plain values interpreted against the field.
class FField {
public:
    explicit FField(Int p) : p_(std::move(p)) {}

    /// Appends one extension step. minpoly is monic over the current top level
    /// (dense ascending, values at the current top level). Irreducibility is the
    /// caller's responsibility; use irreducible() to check first.
    void push_extension(std::vector<FFv> minpoly, std::string gen_name);

    int depth() const { return static_cast<int>(exts_.size()); }
    const Int& p() const { return p_; }
    long ext_degree(int level) const { return static_cast<long>(exts_[level - 1].minpoly.size()) - 1; }
    /// [F_level : F_p]
    long dim(int level) const;
    /// Field order p^dim at a level.
    Int order(int level) const;
    const std::string& gen_name(int level) const { return exts_[level - 1].name; }

    FFv zero(int level) const;
    FFv one(int level) const;
    FFv from_int(const Int& n, int level) const;
    bool is_zero(const FFv& a) const;
    bool eq(const FFv& a, const FFv& b) const;

    FFv add(const FFv& a, const FFv& b, int level) const;
    FFv sub(const FFv& a, const FFv& b, int level) const;
    FFv neg(const FFv& a, int level) const;
    FFv mul(const FFv& a, const FFv& b, int level) const;
    FFv inv(const FFv& a, int level) const;
    FFv pow(FFv a, Int e, int level) const;

    /// Pads a level-from value up to level-to coordinates.
    FFv lift(const FFv& a, int from, int to) const;
    /// Generator of the extension at a level, as a value at that same level.
    FFv gen(int level) const;

    void flatten(const FFv& a, int level, std::vector<Int>& out) const;
    FFv unflatten(const std::vector<Int>& coords, int level) const;

    FFv sample(Rng& rng, int level) const;
    std::string str(const FFv& a, int level) const;

    /// Rabin irreducibility test for a monic polynomial over the field at `level`.
    bool irreducible(const std::vector<FFv>& monic_poly, int level) const;

    bool same_structure(const FField& other) const;

private:
    struct Ext {
        std::vector<FFv> minpoly; // values at the level below, monic
        std::string name;
    };
    Int p_;
    std::vector<Ext> exts_;

    // dense polynomial helpers over the field at a level
    using Poly = std::vector<FFv>;
    void trim(Poly& f) const;
    Poly poly_mul(const Poly& f, const Poly& g, int level) const;
    Poly poly_mod(Poly f, const Poly& g, int level) const;
    Poly poly_gcd(Poly f, Poly g, int level) const;
    Poly poly_powmod(const Poly& base, const Int& e, const Poly& mod, int level) const;
};

/// Top-level element with its field; convenience wrapper used at API surfaces.
struct FFElem {
    const FField* F = nullptr;
    FFv v;

    friend bool operator==(const FFElem& a, const FFElem& b) {
        return a.F->same_structure(*b.F) && a.F->eq(a.v, b.v);
    }
    friend bool operator!=(const FFElem& a, const FFElem& b) { return !(a == b); }
    friend FFElem operator+(const FFElem& a, const FFElem& b) {
        return {a.F, a.F->add(a.v, b.v, a.F->depth())};
    }
    friend FFElem operator-(const FFElem& a, const FFElem& b) {
        return {a.F, a.F->sub(a.v, b.v, a.F->depth())};
    }
    friend FFElem operator*(const FFElem& a, const FFElem& b) {
        return {a.F, a.F->mul(a.v, b.v, a.F->depth())};
    }
    FFElem operator-() const { return {F, F->neg(v, F->depth())}; }
    bool is_zero() const { return F->is_zero(v); }
    std::string str() const { return F->str(v, F->depth()); }
};

inline FFElem ub_zero(const FFElem& like) { return {like.F, like.F->zero(like.F->depth())}; }
inline FFElem ub_one(const FFElem& like) { return {like.F, like.F->one(like.F->depth())}; }
inline bool ub_is_zero(const FFElem& a) { return a.is_zero(); }
inline FFElem ub_inv(const FFElem& a) { return {a.F, a.F->inv(a.v, a.F->depth())}; }

/// Gaussian elimination mod p; returns a solution with free variables set to 0,
/// or nullopt when the system is inconsistent.
std::optional<std::vector<Int>> solve_mod_p(std::vector<std::vector<Int>> a, std::vector<Int> b,
                                            const Int& p);

} // namespace ultraberk
