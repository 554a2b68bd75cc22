#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultraberk/approx.hpp"
#include "ultraberk/textio.hpp"

namespace ultraberk {

/// Quantifier-free boolean combination of atoms |P| <= lambda * |Q|.
struct Formula {
    enum class Kind { Atom, And, Or, Not };
    struct AtomData {
        TPoly p, q;
        Magnitude lambda;
    };
    Kind kind = Kind::Atom;
    std::optional<AtomData> atom;
    std::vector<Formula> kids;

    static Formula make_atom(TPoly p, TPoly q, Magnitude lambda) {
        Formula f;
        f.kind = Kind::Atom;
        f.atom = AtomData{std::move(p), std::move(q), std::move(lambda)};
        return f;
    }
    static Formula make_not(Formula a) {
        Formula f;
        f.kind = Kind::Not;
        f.kids.push_back(std::move(a));
        return f;
    }
    static Formula make_and(Formula a, Formula b) {
        Formula f;
        f.kind = Kind::And;
        f.kids.push_back(std::move(a));
        f.kids.push_back(std::move(b));
        return f;
    }
    static Formula make_or(Formula a, Formula b) {
        Formula f;
        f.kind = Kind::Or;
        f.kids.push_back(std::move(a));
        f.kids.push_back(std::move(b));
        return f;
    }
    int nvars() const;
};

/// Atoms `|poly| <= mag` and `|poly| <= mag*|poly|`; connectives &&, ||, !,
/// parentheses. Round-trips with formula_str.
Formula parse_formula(const std::string& text, const PolyContext& ctx);
std::string formula_str(const Formula& f, const PolyContext& ctx);

/// True when every atom bound folds to lambda in {0,1} with a field-realizable
/// scale, i.e. the formula is strictly semi-algebraic. Recomputed, never trusted.
bool is_strict(const Formula& f, const TowerPtr& tower);

bool eval_formula(const Formula& f, const Point& x);

struct FiberResult {
    bool member = false;
    bool hypothesis_ok = false; // conservative |H(x)| = |k| presentation check
    std::string note;
};

/// Membership of x in the fiber of the formula over the rational tuple y
/// (the last y.size() variables of phi are substituted by y).
FiberResult fiber_membership(const Point& x, const Formula& phi, const std::vector<BaseElem>& y);

/// True when the point presentation only involves base value-group data
/// (radii and an unramified tower), the conservative fiber hypothesis.
bool base_group_presentation(const Point& x);

/// |P(sigma_K(x))| for P with coefficients in the certified extension K of
/// x's tower: the same recursive evaluation with the layers read over K.
Magnitude canonical_extension_eval(const TPoly& p_over_k2, const TowerPtr& k2, const Point& x);

/// The point x re-read over the extension tower.
Point lift_point(const Point& x, const TowerPtr& k2);

struct SupnormSample {
    Magnitude value;            // max over the witnesses
    bool equals_source_norm = false; // attained the sup norm over the generating set
};

/// Sampled lower bound of the sup norm of q over S via witness points; every
/// witness must satisfy the defining inequalities of S.
SupnormSample sdk_supnorm_sample(const SdkSet& s, const TPoly& q, std::span<const Point> witnesses);

} // namespace ultraberk
