#include "ultraberk/semialg.hpp"

#include <cctype>

namespace ultraberk {

int Formula::nvars() const {
    if (kind == Kind::Atom) return atom->p.nvars;
    return kids.empty() ? 0 : kids[0].nvars();
}

namespace {

struct FLexer {
    std::string s;
    size_t pos = 0;
    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    bool accept(const std::string& tok) {
        skip_ws();
        if (s.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    std::string until(char stop) {
        size_t start = pos;
        while (pos < s.size() && s[pos] != stop) ++pos;
        require(pos < s.size(), Err::SyntaxError,
                "unterminated segment starting at " + std::to_string(start) + " in '" + s + "'");
        std::string out = s.substr(start, pos - start);
        ++pos; // consume the stop character
        return out;
    }
};

struct FParser {
    FLexer lex;
    const PolyContext& ctx;

    FParser(const std::string& text, const PolyContext& c) : lex{text, 0}, ctx(c) {}

    Formula parse() {
        Formula f = or_expr();
        require(lex.eof(), Err::SyntaxError,
                "trailing input at position " + std::to_string(lex.pos) + " in '" + lex.s + "'");
        return f;
    }

    Formula or_expr() {
        Formula f = and_expr();
        while (lex.accept("||")) f = Formula::make_or(std::move(f), and_expr());
        return f;
    }

    Formula and_expr() {
        Formula f = unary();
        while (lex.accept("&&")) f = Formula::make_and(std::move(f), unary());
        return f;
    }

    Formula unary() {
        if (lex.accept("!")) return Formula::make_not(unary());
        if (lex.peek() == '(') {
            lex.accept("(");
            Formula f = or_expr();
            require(lex.accept(")"), Err::SyntaxError,
                    "expected ')' at position " + std::to_string(lex.pos));
            return f;
        }
        return atom();
    }

    Formula atom() {
        require(lex.accept("|"), Err::SyntaxError,
                "expected an atom '|P| <= ...' at position " + std::to_string(lex.pos));
        TPoly p = parse_poly(lex.until('|'), ctx);
        require(lex.accept("<="), Err::SyntaxError,
                "expected '<=' at position " + std::to_string(lex.pos));
        // bound: mag, mag*|poly|, or |poly|
        Magnitude lambda = Magnitude::one();
        TPoly q = TPoly::constant(static_cast<int>(ctx.vars.size()), ctx.tower->one());
        if (lex.peek() == '|') {
            lex.accept("|");
            q = parse_poly(lex.until('|'), ctx);
        } else {
            // magnitude literal up to an optional '*'
            lex.skip_ws();
            size_t start = lex.pos;
            int depth = 0;
            while (lex.pos < lex.s.size()) {
                char c = lex.s[lex.pos];
                if (c == '(') ++depth;
                if (c == ')') {
                    if (depth == 0) break;
                    --depth;
                }
                if (depth == 0 && (c == '*' || c == '&' || c == '|' || c == '!')) break;
                ++lex.pos;
            }
            lambda = Magnitude::parse(lex.s.substr(start, lex.pos - start));
            if (lex.accept("*")) {
                require(lex.accept("|"), Err::SyntaxError,
                        "expected '|poly|' after '*' at position " + std::to_string(lex.pos));
                q = parse_poly(lex.until('|'), ctx);
            }
        }
        return Formula::make_atom(std::move(p), std::move(q), std::move(lambda));
    }
};

} // namespace

Formula parse_formula(const std::string& text, const PolyContext& ctx) {
    FParser p(text, ctx);
    return p.parse();
}

std::string formula_str(const Formula& f, const PolyContext& ctx) {
    switch (f.kind) {
        case Formula::Kind::Atom: {
            std::string out = "|" + poly_str(f.atom->p, ctx) + "| <= ";
            bool q_is_one = f.atom->q.t.size() == 1 &&
                            f.atom->q.coeff(std::vector<long>(f.atom->q.nvars, 0)) ==
                                ctx.tower->one();
            if (q_is_one) return out + f.atom->lambda.str();
            if (f.atom->lambda.is_one()) return out + "|" + poly_str(f.atom->q, ctx) + "|";
            return out + f.atom->lambda.str() + "*|" + poly_str(f.atom->q, ctx) + "|";
        }
        case Formula::Kind::Not:
            return "!(" + formula_str(f.kids[0], ctx) + ")";
        case Formula::Kind::And:
            return "(" + formula_str(f.kids[0], ctx) + " && " + formula_str(f.kids[1], ctx) + ")";
        case Formula::Kind::Or:
            return "(" + formula_str(f.kids[0], ctx) + " || " + formula_str(f.kids[1], ctx) + ")";
    }
    return "";
}

bool is_strict(const Formula& f, const TowerPtr& tower) {
    if (f.kind == Formula::Kind::Atom) {
        const Magnitude& l = f.atom->lambda;
        if (l.is_zero() || l.is_one()) return true;
        if (tower->cfg()->trivial()) return false;
        // lambda realizable by a field element folds into Q
        return l.veps() == 0 && is_integer(l.vmain());
    }
    for (const auto& k : f.kids)
        if (!is_strict(k, tower)) return false;
    return true;
}

bool eval_formula(const Formula& f, const Point& x) {
    switch (f.kind) {
        case Formula::Kind::Atom:
            return eval(f.atom->p, x) <= f.atom->lambda * eval(f.atom->q, x);
        case Formula::Kind::Not:
            return !eval_formula(f.kids[0], x);
        case Formula::Kind::And:
            return eval_formula(f.kids[0], x) && eval_formula(f.kids[1], x);
        case Formula::Kind::Or:
            return eval_formula(f.kids[0], x) || eval_formula(f.kids[1], x);
    }
    return false;
}

namespace {

TPoly shrink_arity(const TPoly& p, int new_n) {
    require(p.max_var() < new_n, Err::ArityMismatch, "polynomial still uses substituted variables");
    TPoly out(new_n, p.z);
    for (const auto& [e, v] : p.t) {
        std::vector<long> f(e.begin(), e.begin() + new_n);
        out.add_term(f, v);
    }
    return out;
}

Formula substitute_tail(const Formula& f, int n, const std::vector<BaseElem>& y,
                        const TowerPtr& tw) {
    if (f.kind == Formula::Kind::Atom) {
        TPoly p = f.atom->p;
        TPoly q = f.atom->q;
        for (size_t j = 0; j < y.size(); ++j) {
            TPoly c = TPoly::constant(p.nvars, tw->from_base(y[j]));
            p = substitute_var(p, n + static_cast<int>(j), c);
            q = substitute_var(q, n + static_cast<int>(j), c);
        }
        return Formula::make_atom(shrink_arity(p, n), shrink_arity(q, n), f.atom->lambda);
    }
    Formula out;
    out.kind = f.kind;
    for (const auto& k : f.kids) out.kids.push_back(substitute_tail(k, n, y, tw));
    return out;
}

} // namespace

bool base_group_presentation(const Point& x) {
    if (x.tower()->ram_index() != 1) return false;
    const bool trivial = x.tower()->cfg()->trivial();
    for (int i = 1; i <= x.dim(); ++i) {
        const Magnitude& r = x.layer(i).radius;
        if (r.is_zero()) continue;
        if (r.veps() != 0) return false;
        if (trivial ? r.vmain() != 0 : !is_integer(r.vmain())) return false;
    }
    return true;
}

FiberResult fiber_membership(const Point& x, const Formula& phi, const std::vector<BaseElem>& y) {
    const int total = phi.nvars();
    const int n = x.dim();
    require(total == n + static_cast<int>(y.size()), Err::ArityMismatch,
            "formula arity must be dim(x) + |y|");
    FiberResult out;
    out.hypothesis_ok = base_group_presentation(x);
    if (!out.hypothesis_ok)
        out.note = "presentation leaves the base value group; evaluation only, fiber hypothesis unmet";
    Formula restricted = y.empty() ? phi : substitute_tail(phi, n, y, x.tower());
    out.member = eval_formula(restricted, x);
    return out;
}

Point lift_point(const Point& x, const TowerPtr& k2) {
    require(k2->extends(*x.tower()), Err::UncertifiedExtension,
            "extension does not contain the point's tower");
    auto lift_poly = [&](const TPoly& p) {
        TPoly out(p.nvars, k2->zero());
        for (const auto& [e, v] : p.t) out.add_term(e, v.lift_to(k2));
        return out;
    };
    std::vector<Layer> layers;
    for (int i = 1; i <= x.dim(); ++i) {
        const Layer& l = x.layer(i);
        Layer nl;
        nl.radius = l.radius;
        if (!l.center.hensel) {
            nl.center = FiberElem::make_exact(lift_poly(l.center.exact));
        } else {
            TPoly approx;
            {
                std::lock_guard<std::mutex> lock(l.center.state->mu);
                approx = l.center.state->approx;
            }
            nl.center = FiberElem::make_hensel(lift_poly(l.center.defining), lift_poly(approx),
                                               l.center.budget);
        }
        layers.push_back(std::move(nl));
    }
    return Point(k2, std::move(layers));
}

Magnitude canonical_extension_eval(const TPoly& p_over_k2, const TowerPtr& k2, const Point& x) {
    require(k2->extends(*x.tower()), Err::UncertifiedExtension,
            "coefficients live outside a certified extension of the point's tower");
    Point lifted = lift_point(x, k2);
    return eval(p_over_k2, lifted);
}

SupnormSample sdk_supnorm_sample(const SdkSet& s, const TPoly& q, std::span<const Point> witnesses) {
    for (const auto& w : witnesses)
        for (const auto& entry : s.entries)
            require(eval(entry.r0, w) <= entry.r, Err::WitnessOutsideS,
                    "witness violates |" + std::to_string(entry.e.total()) + "|-entry bound");
    SupnormSample out;
    out.value = Magnitude::zero();
    for (const auto& w : witnesses) out.value = Magnitude::max(out.value, eval(q, w));
    Magnitude source = sup_norm(q, std::span<const Point>(s.source.data(), s.source.size()));
    out.equals_source_norm = (out.value == source);
    return out;
}

} // namespace ultraberk
