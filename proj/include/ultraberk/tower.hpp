#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ultraberk/base_field.hpp"
#include "ultraberk/upoly.hpp"

namespace ultraberk {

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

/// Nested tower value: a leaf holds a base element, a node at step level i
/// holds exactly deg_i coordinates over the level below.
struct Nested {
    BaseElem b;
    std::vector<Nested> kids;
    bool leaf() const { return kids.empty(); }
};

enum class StepKind { Unramified, Eisenstein };

struct Step {
    std::string name;
    StepKind kind;
    std::vector<Nested> minpoly; // monic, coefficients at the level below
    long deg;
    Rat slope; // valuation of the step generator (0 for unramified)
};

struct CertifyResult {
    bool accepted = false;
    StepKind kind = StepKind::Unramified;
    std::string reason; // set when rejected
};

class TowerElem;

/// A base field with a chain of certified extension steps. Immutable; extend
/// by with_step, which re-certifies and returns a new tower.
class Tower : public std::enable_shared_from_this<Tower> {
public:
    static TowerPtr base(BaseCfgPtr cfg);
    /// Appends a certified step; declared kind must match the certificate.
    TowerPtr with_step(const std::string& name, StepKind declared, const UPoly<TowerElem>& minpoly) const;

    const BaseCfgPtr& cfg() const { return cfg_; }
    int depth() const { return static_cast<int>(steps_.size()); }
    const Step& step(int i) const { return steps_[i - 1]; } // 1-based
    long ram_index() const { return e_; }
    long res_degree() const { return f_; }
    const FField& residue_field() const { return rf_; }

    bool same_as(const Tower& other) const;
    /// True when this tower's steps extend (prefix-contain) those of t.
    bool extends(const Tower& t) const;

    TowerElem zero() const;
    TowerElem one() const;
    TowerElem from_int(const Int& n) const;
    TowerElem from_rat(const Rat& q) const;
    TowerElem from_base(const BaseElem& b) const;
    TowerElem uniformizer() const;
    TowerElem gen(int i) const; // generator of step i (1-based), at top level
    int find_gen(const std::string& name) const; // -1 when absent

    /// Monomial p^a * prod gen_i^{e_i} realizing the magnitude b^{-w}; the
    /// box exponents 0 <= e_i < deg_i are unique, a is the integer remainder.
    struct SectionExps {
        long a = 0;
        std::vector<long> e; // per step, 0 at unramified steps
    };
    SectionExps section_exponents(const Rat& w) const;
    TowerElem section_element(const Rat& w) const;

    // ---- nested value arithmetic at explicit levels (0 = base) ----
    Nested nzero(int lvl) const;
    Nested none(int lvl) const;
    Nested nfrom_base(const BaseElem& b, int lvl) const;
    Nested nlift(const Nested& a, int from, int to) const;
    bool nis_zero(const Nested& a) const;
    bool neq(const Nested& a, const Nested& b) const;
    Nested nadd(const Nested& a, const Nested& b, int lvl) const;
    Nested nsub(const Nested& a, const Nested& b, int lvl) const;
    Nested nneg(const Nested& a, int lvl) const;
    Nested nmul(const Nested& a, const Nested& b, int lvl) const;
    Nested ninv(const Nested& a, int lvl) const;
    /// Valuation exponent, or nullopt for zero.
    std::optional<Rat> nval(const Nested& a, int lvl) const;
    /// Residue of an integral element (|a| <= 1), at the residue chain level for lvl.
    FFv nresidue(const Nested& a, int lvl) const;
    int rf_level(int lvl) const; // residue chain depth after tower level lvl

    std::string nstr(const Nested& a, int lvl) const;

private:
    Tower(BaseCfgPtr cfg) : cfg_(std::move(cfg)), rf_(cfg_->residue_field()), e_(1), f_(cfg_->qdeg()) {}
    BaseCfgPtr cfg_;
    std::vector<Step> steps_;
    FField rf_;
    long e_, f_;
    mutable std::map<Rat, SectionExps> section_cache_;

    friend CertifyResult certify_step(const TowerPtr& tw, const UPoly<TowerElem>& m);
};

/// Element of a tower; immutable value semantics.
class TowerElem {
public:
    TowerElem() = default;
    TowerElem(TowerPtr tw, Nested v) : tw_(std::move(tw)), v_(std::move(v)) {}

    const TowerPtr& tower() const { return tw_; }
    const Nested& nested() const { return v_; }
    bool is_zero() const { return !tw_ || tw_->nis_zero(v_); }

    friend TowerElem operator+(const TowerElem& a, const TowerElem& b) {
        return {a.tw_, a.tw_->nadd(a.v_, b.v_, a.tw_->depth())};
    }
    friend TowerElem operator-(const TowerElem& a, const TowerElem& b) {
        return {a.tw_, a.tw_->nsub(a.v_, b.v_, a.tw_->depth())};
    }
    friend TowerElem operator*(const TowerElem& a, const TowerElem& b) {
        return {a.tw_, a.tw_->nmul(a.v_, b.v_, a.tw_->depth())};
    }
    friend TowerElem operator/(const TowerElem& a, const TowerElem& b) {
        return {a.tw_, a.tw_->nmul(a.v_, b.tw_->ninv(b.v_, b.tw_->depth()), a.tw_->depth())};
    }
    TowerElem operator-() const { return {tw_, tw_->nneg(v_, tw_->depth())}; }
    friend bool operator==(const TowerElem& a, const TowerElem& b) { return a.tw_->neq(a.v_, b.v_); }
    friend bool operator!=(const TowerElem& a, const TowerElem& b) { return !(a == b); }

    TowerElem inverse() const { return {tw_, tw_->ninv(v_, tw_->depth())}; }
    TowerElem pow(long n) const;

    Magnitude val() const {
        auto w = tw_->nval(v_, tw_->depth());
        return w ? Magnitude::from_exp(*w) : Magnitude::zero();
    }
    /// Residue of an element of the closed unit ball; NotIntegralUnit above it.
    FFElem residue() const;
    /// residue(x / section(|x|)) for nonzero x; the canonical unit part.
    FFElem unit_residue() const;

    /// Re-reads the value in an extension tower k2 (k2 must extend the own tower).
    TowerElem lift_to(const TowerPtr& k2) const;
    /// True when the element lies in the base field (all higher coordinates zero).
    bool in_base() const;
    /// The base payload when in_base().
    BaseElem base_part() const;

    std::string str() const { return tw_->nstr(v_, tw_->depth()); }

private:
    TowerPtr tw_;
    Nested v_;
};

inline TowerElem ub_zero(const TowerElem& like) {
    return like.tower() ? like.tower()->zero() : TowerElem();
}
inline TowerElem ub_one(const TowerElem& like) {
    return like.tower() ? like.tower()->one() : TowerElem();
}
inline bool ub_is_zero(const TowerElem& a) { return a.is_zero(); }
inline TowerElem ub_inv(const TowerElem& a) { return a.inverse(); }

/// Certificate check: Unramified (residually irreducible) or Eisenstein
/// (single Newton segment whose slope has relative denominator exactly deg).
CertifyResult certify_step(const TowerPtr& tw, const UPoly<TowerElem>& m);

/// |g(alpha)| for alpha any root of the certified irreducible m, via
/// |Res(m, g)|^(1/deg m); Galois invariance of the extended absolute value
/// makes the value independent of the root.
Magnitude norm_resultant(const UPoly<TowerElem>& m, const UPoly<TowerElem>& g);

} // namespace ultraberk
