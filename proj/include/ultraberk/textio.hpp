#pragma once

#include <string>
#include <vector>

#include "ultraberk/point.hpp"

namespace ultraberk {

/// Names available to the polynomial grammar: point variables plus, implicitly,
/// the base uniformizer symbol and the tower generator names.
struct PolyContext {
    TowerPtr tower;
    std::vector<std::string> vars;

    int var_index(const std::string& name) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return static_cast<int>(i);
        if (vars.size() == 1 && (name == "T" || name == "T1")) return 0;
        return -1;
    }
    static std::vector<std::string> default_vars(int n, const std::string& stem = "T") {
        std::vector<std::string> v;
        for (int i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
        return v;
    }
};

/// Grammar: sum of terms; term = factors joined by * and / (division by
/// coefficient-only factors); factor = integer | name | (expr), optional
/// ^exponent. Names resolve to point variables, tower generators, or the
/// uniformizer symbol.
TPoly parse_poly(const std::string& text, const PolyContext& ctx);

std::string poly_str(const TPoly& p, const PolyContext& ctx);

/// Coefficient-only expression (no point variables).
TowerElem parse_coeff(const std::string& text, const TowerPtr& tower);

} // namespace ultraberk
