#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ultraberk/mpoly.hpp"
#include "ultraberk/tower.hpp"

namespace ultraberk {

using TPoly = MPoly<TowerElem>;

/// Mutable refinement cache of a Newton-certified root. Refinement only ever
/// shrinks err; concurrent refiners compute identical data, so last writer
/// agrees with any reader.
struct HenselState {
    TPoly approx;  // polynomial in the variables below the layer
    Magnitude fa;  // |F(approx)| at the partial point
    Magnitude fpa; // |F'(approx)|
    Magnitude err; // fa / fpa, a bound for |approx - root|
    long trunc = 8;
    int refinements = 0;
    mutable std::mutex mu;
};

/// Center of one disc layer: an exact polynomial in the previous variables,
/// or a Newton-refinable root of a defining polynomial.
struct FiberElem {
    bool hensel = false;
    TPoly exact;    // exact center (hensel == false)
    TPoly defining; // uses the layer's own variable as the root variable (hensel == true)
    std::shared_ptr<HenselState> state;
    int budget = 24; // refinement cap

    static FiberElem make_exact(TPoly center) {
        FiberElem f;
        f.exact = std::move(center);
        return f;
    }
    static FiberElem make_hensel(TPoly defining, TPoly approx, int budget = 24);
};

struct Layer {
    FiberElem center;
    Magnitude radius; // ZERO marks a rigid direction
};

enum class PointType { Type1 = 1, Type2 = 2, Type3 = 3 };
enum class Order { Less, Equal, Greater, Incomparable };
enum class SampledOrder { LessEvidence, GreaterEvidence, IncomparableEvidence, Unknown };

/// A point of E^n presented as a tower of discs, one layer per coordinate.
/// Evaluation is a multiplicative ultrametric seminorm extending |.| on the
/// base field; it does not depend on Hensel refinement depth.
class Point {
public:
    Point(TowerPtr tw, std::vector<Layer> layers);

    const TowerPtr& tower() const { return tw_; }
    int dim() const { return static_cast<int>(layers_.size()); }
    const Layer& layer(int i) const { return layers_[i - 1]; } // 1-based
    const std::vector<Layer>& layers() const { return layers_; }

    /// Forces extra Newton refinements on every Hensel layer (testing hook for
    /// precision independence).
    void refine_all(int extra_steps) const;

private:
    TowerPtr tw_;
    std::vector<Layer> layers_;
};

/// The seminorm |P(x)|.
Magnitude eval(const TPoly& p, const Point& x);
/// Seminorm using only the first `upto` layers; p must use only those variables.
Magnitude eval_prefix(const TPoly& p, const Point& x, int upto);

/// Leading form of P at x: value plus the residue coefficients of the terms of
/// maximal magnitude in the shifted-monomial expansion, keyed by the exponents
/// over the positive-radius directions. For P, Q of equal value v the identity
/// |P-Q|(x) < v holds exactly when the forms are equal.
struct GradedResidue {
    Magnitude value;
    std::map<std::vector<long>, FFElem> form;

    friend bool operator==(const GradedResidue& a, const GradedResidue& b) {
        return a.value == b.value && a.form == b.form;
    }
    friend bool operator!=(const GradedResidue& a, const GradedResidue& b) { return !(a == b); }
};

GradedResidue eval_graded(const TPoly& p, const Point& x);

/// Full expansion data at level v (any magnitude); used by the minimization
/// descent. Terms strictly below v are dropped; value is |P(x)|.
GradedResidue eval_graded_at(const TPoly& p, const Point& x, const Magnitude& level);

/// Exact order comparison for dim-1 points sharing a tower.
Order compare_points(const Point& x, const Point& y);
/// Sampled comparison on random polynomials (any dimension).
SampledOrder compare_points_sampled(const Point& x, const Point& y, int samples, std::uint64_t seed);

/// Berkovich type classification by the layer radius (dim 1).
PointType classify(const Point& x);

} // namespace ultraberk
