#include "ultraberk/magnitude.hpp"

#include <algorithm>
#include <cctype>

namespace ultraberk {

namespace {

// Prints the printed-exponent term, i.e. the negated valuation exponent.
std::string exp_term(const Rat& v) { return rat_str(-v); }

} // namespace

std::string Magnitude::str() const {
    if (zero_) return "0";
    if (main_ == 0 && eps_ == 0) return "b^0";
    std::string body;
    Rat pm = -main_; // printed exponent parts
    Rat pe = -eps_;
    if (pe == 0) {
        body = rat_str(pm);
    } else if (pm == 0) {
        body = rat_str(pe) + "e";
    } else {
        body = rat_str(pm);
        if (pe > 0)
            body += " + " + rat_str(pe) + "e";
        else
            body += " - " + rat_str(-pe) + "e";
    }
    return "b^(" + body + ")";
}

Magnitude Magnitude::parse(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s == "0") return zero();
    if (s == "1" || s == "b^0") return one();
    if (s.rfind("b^(", 0) != 0 || s.back() != ')')
        fail(Err::SyntaxError, "bad magnitude literal '" + text + "'");
    std::string body = s.substr(3, s.size() - 4);
    require(!body.empty(), Err::SyntaxError, "empty magnitude exponent");

    // body is one signed rational, optionally followed by a signed rational with 'e' suffix;
    // a single term ending in 'e' is a pure infinitesimal exponent.
    auto split_at = std::string::npos;
    for (size_t i = 1; i < body.size(); ++i) {
        if (body[i] == '+' || body[i] == '-') {
            split_at = i;
            break;
        }
    }
    std::string first = body, second;
    if (split_at != std::string::npos) {
        first = body.substr(0, split_at);
        second = body.substr(split_at); // keeps the sign
    }
    Rat pm(0), pe(0);
    if (second.empty()) {
        if (first.back() == 'e') {
            pe = rat_parse(first.substr(0, first.size() - 1));
        } else {
            pm = rat_parse(first);
        }
    } else {
        require(second.back() == 'e', Err::SyntaxError,
                "magnitude exponent second term must carry 'e'");
        pm = rat_parse(first);
        pe = rat_parse(second.substr(0, second.size() - 1));
    }
    return from_exp(-pm, -pe);
}

std::vector<std::pair<Rat, long>> NewtonPolygon::slopes() const {
    std::vector<std::pair<Rat, long>> out;
    for (size_t i = 0; i + 1 < vertices.size(); ++i) {
        Rat slope = (vertices[i + 1].val - vertices[i].val) / (vertices[i + 1].index - vertices[i].index);
        out.emplace_back(slope, vertices[i + 1].index - vertices[i].index);
    }
    return out;
}

std::vector<std::pair<Rat, long>> NewtonPolygon::root_valuations() const {
    auto s = slopes();
    for (auto& [slope, mult] : s) slope = -slope;
    return s;
}

NewtonPolygon lower_hull(const std::vector<std::pair<long, std::optional<Rat>>>& points) {
    std::vector<NewtonPolygon::Vertex> finite;
    for (const auto& [idx, val] : points)
        if (val) finite.push_back({idx, *val});
    require(!finite.empty(), Err::AllInfinite, "all valuations infinite (zero polynomial)");
    std::sort(finite.begin(), finite.end(),
              [](const auto& a, const auto& b) { return a.index < b.index; });
    for (size_t i = 0; i + 1 < finite.size(); ++i)
        require(finite[i].index != finite[i + 1].index, Err::Validation, "duplicate hull index");

    // Monotone chain, lower hull only. cross <= 0 pops collinear middle points
    // so that vertices are the extreme points.
    std::vector<NewtonPolygon::Vertex> hull;
    for (const auto& p : finite) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            Rat cross = (Rat(b.index - a.index)) * (p.val - a.val) -
                        (b.val - a.val) * Rat(p.index - a.index);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return NewtonPolygon{std::move(hull)};
}

Magnitude solve_radius(const Magnitude& lead, const std::vector<Magnitude>& distances,
                       const Magnitude& target) {
    require(!lead.is_zero(), Err::Validation, "solve_radius needs a nonzero lead");
    if (target.is_zero()) return Magnitude::zero();

    // Work in valuation exponents: v_lead + v_rho + sum_i min(v_rho, v_i) = v_target,
    // with ZERO distances contributing v_rho (max(rho, 0) = rho).
    struct Exp {
        Rat main, eps;
        bool inf;
    };
    auto exp_of = [](const Magnitude& m) {
        return m.is_zero() ? Exp{Rat(0), Rat(0), true} : Exp{m.vmain(), m.veps(), false};
    };
    auto less = [](const Exp& a, const Exp& b) {
        if (a.inf || b.inf) return !a.inf && b.inf;
        if (a.main != b.main) return a.main < b.main;
        return a.eps < b.eps;
    };

    std::vector<Exp> ds;
    ds.reserve(distances.size());
    for (const auto& d : distances) ds.push_back(exp_of(d));
    std::sort(ds.begin(), ds.end(), less);

    const Exp vl = exp_of(lead);
    const Exp vt = exp_of(target);
    const long m = static_cast<long>(ds.size());
    // Bracket scan: with v_1 <= ... <= v_m (ascending exponents = descending magnitudes),
    // assume exactly the first k distances satisfy v_i <= v_rho.
    for (long k = 0; k <= m; ++k) {
        Rat sum_main = vt.main - vl.main;
        Rat sum_eps = vt.eps - vl.eps;
        bool skip = false;
        for (long i = 0; i < k; ++i) {
            if (ds[i].inf) {
                skip = true; // infinite exponent can never be <= a finite v_rho
                break;
            }
            sum_main -= ds[i].main;
            sum_eps -= ds[i].eps;
        }
        if (skip) break;
        long div = m - k + 1;
        Rat vr_main = sum_main / div;
        Rat vr_eps = sum_eps / div;
        Exp vr{vr_main, vr_eps, false};
        bool lo_ok = (k == 0) || !less(vr, ds[k - 1]);
        bool hi_ok = (k == m) || !less(ds[k], vr);
        if (lo_ok && hi_ok) return Magnitude::from_exp(vr_main, vr_eps);
    }
    fail(Err::Internal, "solve_radius bracket scan found no solution");
}

} // namespace ultraberk
