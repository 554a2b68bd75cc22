#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ultraberk/ffield.hpp"
#include "ultraberk/magnitude.hpp"
#include "ultraberk/rational.hpp"
#include "ultraberk/rng.hpp"

namespace ultraberk {

/// Base valued field: exact rationals with the p-adic valuation, or the
/// rational function field over F_q with the t-adic valuation. The trivially
/// valued case is the t_adic kind restricted to constants.
class BaseFieldCfg {
public:
    enum class Kind { p_adic, t_adic };

    static std::shared_ptr<const BaseFieldCfg> p_adic(Int p);
    static std::shared_ptr<const BaseFieldCfg> t_adic(Int p, int qdeg = 1, bool trivial = false);

    Kind kind() const { return kind_; }
    const Int& p() const { return p_; }
    int qdeg() const { return qdeg_; }
    bool trivial() const { return trivial_; }
    std::string uniformizer_symbol() const { return kind_ == Kind::p_adic ? "p" : "t"; }
    /// Residue field of the base (F_p or F_q).
    const FField& residue_field() const { return rf_; }
    int residue_level() const { return rf_.depth(); }

    bool same_as(const BaseFieldCfg& other) const {
        return kind_ == other.kind_ && p_ == other.p_ && qdeg_ == other.qdeg_ &&
               trivial_ == other.trivial_;
    }

private:
    BaseFieldCfg(Kind kind, Int p, int qdeg, bool trivial);
    Kind kind_;
    Int p_;
    int qdeg_;
    bool trivial_;
    FField rf_;
};

using BaseCfgPtr = std::shared_ptr<const BaseFieldCfg>;

/// Element of the base field, in canonical reduced form.
class BaseElem {
public:
    BaseElem() = default;

    static BaseElem from_int(const BaseCfgPtr& cfg, const Int& n);
    static BaseElem from_rat(const BaseCfgPtr& cfg, const Rat& q);
    /// num/den as polynomials in t over F_q (t_adic kind only), dense ascending.
    static BaseElem from_ratfun(const BaseCfgPtr& cfg, std::vector<FFv> num, std::vector<FFv> den);
    static BaseElem uniformizer(const BaseCfgPtr& cfg);
    static BaseElem zero(const BaseCfgPtr& cfg) { return from_int(cfg, 0); }
    static BaseElem one(const BaseCfgPtr& cfg) { return from_int(cfg, 1); }

    const BaseCfgPtr& cfg() const { return cfg_; }
    bool is_zero() const;

    friend BaseElem operator+(const BaseElem& a, const BaseElem& b);
    friend BaseElem operator-(const BaseElem& a, const BaseElem& b);
    friend BaseElem operator*(const BaseElem& a, const BaseElem& b);
    friend BaseElem operator/(const BaseElem& a, const BaseElem& b);
    BaseElem operator-() const;
    friend bool operator==(const BaseElem& a, const BaseElem& b);
    friend bool operator!=(const BaseElem& a, const BaseElem& b) { return !(a == b); }

    BaseElem inverse() const;
    BaseElem pow(long n) const;

    Magnitude val() const;
    /// Image in the residue field; requires |x| <= 1 (0 below the unit sphere).
    FFv residue_integral() const;

    /// A small representative congruent to x modulo pi^m (uniformizer power);
    /// |x - reduce| <= b^-m. Keeps Newton iterates from growing without bound.
    BaseElem reduce_precision(long m) const;

    /// The rational payload (p_adic kind).
    const Rat& rat() const { return q_; }

    std::string str() const;

    BaseElem sample(Rng& rng, long exp_lo, long exp_hi) const; // same cfg, random element

private:
    void normalize();
    BaseCfgPtr cfg_;
    Rat q_;                     // p_adic payload
    std::vector<FFv> num_, den_; // t_adic payload; den monic, gcd(num,den)=1
};

inline BaseElem ub_zero(const BaseElem& like) { return BaseElem::zero(like.cfg()); }
inline BaseElem ub_one(const BaseElem& like) { return BaseElem::one(like.cfg()); }
inline bool ub_is_zero(const BaseElem& a) { return a.is_zero(); }
inline BaseElem ub_inv(const BaseElem& a) { return a.inverse(); }

} // namespace ultraberk
