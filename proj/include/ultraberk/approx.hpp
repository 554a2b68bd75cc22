#pragma once

#include <span>
#include <vector>

#include "ultraberk/point.hpp"

namespace ultraberk {

/// Degree-by-degree approximation chain of a dim-1 point: per degree j the
/// monic minimizer R0_j with r_j = |R0_j(x)| minimal, r_j nonincreasing.
/// After an algebraic hit (r = 0) later entries repeat the hit.
struct Approx1DEntry {
    long degree = 0;
    TPoly r0;       // monic, base-field coefficients, one variable
    Magnitude r;
    bool stabilized = false; // the degree-(j-1) carryover T*R0_{j-1} already attains r_j
};

struct Approx1D {
    std::vector<Approx1DEntry> entries; // entries[j-1] is degree j
};

/// Defining pairs of the degree-d envelope of a finite point set:
/// S = intersection over entries of {|R0_e| <= r_e}, entries ascending.
struct SdkEntry {
    MultiDeg e;
    TPoly r0; // monic of multidegree e
    Magnitude r;
};

struct SdkSet {
    MultiDeg budget;
    std::vector<SdkEntry> entries;
    std::vector<Point> source; // the generating points (sup-norm witnesses)
};

/// Finite search configuration for the independent minimization oracle.
struct LatticeWindow {
    Rat lo = Rat(-6), hi = Rat(6); // exponent range of digit levels
    long den = 1;                  // exponent denominator bound (meets the value group)
    int depth = 6;                 // max nonzero digits per coefficient
    long max_nodes = 2000000;      // search guard
};

struct BestMonic {
    TPoly r0;
    Magnitude r;
    int descent_steps = 0;
    bool algebraic_hit = false;
};

/// Minimizes ||T^d - P||_K over P supported on monomials strictly below d,
/// by an exact-hit linear solve followed by graded-residue descent; the
/// returned polynomial is canonicalized by zeroing removable coefficients in
/// decreasing monomial order.
BestMonic best_monic(std::span<const Point> points, const MultiDeg& d);
BestMonic best_monic(const Point& x, const MultiDeg& d);
/// dim-1 convenience.
BestMonic best_monic_1d(const Point& x, long degree);

Approx1D approximate_1d(const Point& x, long dmax);

/// One defining pair per multidegree 0 < e <= budget, ascending.
SdkSet approximate_nd(std::span<const Point> points, const MultiDeg& budget);
SdkSet approximate_nd_total(std::span<const Point> points, long total_degree, int nvars);

/// sup norm over the generating set.
Magnitude sup_norm(const TPoly& p, std::span<const Point> points);

struct LemmaReport {
    int samples = 0;
    int failures = 0;
    std::string first_failure;
    bool pass() const { return failures == 0; }
};

/// Samples monic polynomials of multidegree e and checks
/// ||R||_K == max(r, ||R - R0||_K) exactly.
LemmaReport lemma_check(std::span<const Point> points, const MultiDeg& e, const TPoly& r0,
                        const Magnitude& r, int samples, std::uint64_t seed);

struct BruteForceResult {
    Magnitude min;
    long nodes = 0;
};

/// Exhaustive minimum of ||T^d - P||_K over coefficients drawn from the
/// truncated digit lattice of the window (branch and bound, exact); always an
/// upper bound for the true minimum and equal to it when the window contains
/// the true minimizer's coefficients.
BruteForceResult brute_force_min(std::span<const Point> points, const MultiDeg& d,
                                 const LatticeWindow& window);

/// Whether every coefficient of r0 below the lead lies in the window's digit lattice.
bool window_contains(const TPoly& r0, const MultiDeg& d, const LatticeWindow& window);

/// Random monic polynomial of multidegree e with digit-lattice coefficients.
TPoly sample_monic(const TowerPtr& tw, const MultiDeg& e, Rng& rng, long exp_lo, long exp_hi);

} // namespace ultraberk
