#include "ultraberk/textio.hpp"

#include <cctype>

namespace ultraberk {

namespace {

struct Lexer {
    std::string s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        require(accept(c), Err::SyntaxError,
                std::string("expected '") + c + "' at position " + std::to_string(pos) + " in '" + s + "'");
    }
    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '~'))
            ++pos;
        return s.substr(start, pos - start);
    }
    Int integer() {
        skip_ws();
        size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        require(pos > start && std::isdigit(static_cast<unsigned char>(s[pos - 1])), Err::SyntaxError,
                "expected integer at position " + std::to_string(start) + " in '" + s + "'");
        return Int(s.substr(start, pos - start));
    }
};

struct Parser {
    Lexer lex;
    const PolyContext& ctx;
    int nvars;

    Parser(const std::string& text, const PolyContext& c)
        : lex{text, 0}, ctx(c), nvars(static_cast<int>(c.vars.size())) {}

    TPoly parse() {
        TPoly out = expr();
        require(lex.eof(), Err::SyntaxError,
                "trailing input at position " + std::to_string(lex.pos) + " in '" + lex.s + "'");
        return out;
    }

    TPoly expr() {
        bool neg = false;
        if (lex.accept('-'))
            neg = true;
        else
            lex.accept('+');
        TPoly acc = term();
        if (neg) acc = -acc;
        for (;;) {
            if (lex.accept('+'))
                acc = acc + term();
            else if (lex.accept('-'))
                acc = acc - term();
            else
                break;
        }
        return acc;
    }

    TPoly term() {
        TPoly acc = factor();
        for (;;) {
            if (lex.accept('*')) {
                acc = acc * factor();
            } else if (lex.accept('/')) {
                TPoly d = factor();
                require(d.max_var() < 0 && !d.is_zero(), Err::SyntaxError,
                        "division requires a nonzero coefficient divisor");
                TowerElem c = d.coeff(std::vector<long>(nvars, 0));
                acc = c.inverse() * acc;
            } else {
                break;
            }
        }
        return acc;
    }

    TPoly factor() {
        TPoly b = base();
        if (lex.accept('^')) {
            Int e = lex.integer();
            long k = to_long(e);
            if (k >= 0) return b.pow(k);
            require(b.max_var() < 0 && !b.is_zero(), Err::SyntaxError,
                    "negative power of a non-coefficient");
            TowerElem c = b.coeff(std::vector<long>(nvars, 0));
            return TPoly::constant(nvars, c.pow(k));
        }
        return b;
    }

    TPoly base() {
        if (lex.accept('(')) {
            TPoly e = expr();
            lex.expect(')');
            return e;
        }
        char c = lex.peek();
        if (c == '-') {
            lex.accept('-');
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return TPoly::constant(nvars, ctx.tower->from_int(lex.integer()));
        std::string name = lex.ident();
        require(!name.empty(), Err::SyntaxError,
                "unexpected character at position " + std::to_string(lex.pos) + " in '" + lex.s + "'");
        int vi = ctx.var_index(name);
        if (vi >= 0) return TPoly::variable(nvars, vi, ctx.tower->one());
        if (name == ctx.tower->cfg()->uniformizer_symbol())
            return TPoly::constant(nvars, ctx.tower->uniformizer());
        int gi = ctx.tower->find_gen(name);
        require(gi >= 1, Err::SyntaxError, "unknown name '" + name + "'");
        return TPoly::constant(nvars, ctx.tower->gen(gi));
    }
};

bool needs_parens(const std::string& s) { return s.find_first_of("+-/ ") != std::string::npos; }

} // namespace

TPoly parse_poly(const std::string& text, const PolyContext& ctx) {
    require(ctx.tower != nullptr, Err::Internal, "parse context without a tower");
    Parser p(text, ctx);
    return p.parse();
}

TowerElem parse_coeff(const std::string& text, const TowerPtr& tower) {
    PolyContext ctx{tower, {}};
    TPoly p = parse_poly(text, ctx);
    return p.coeff({});
}

std::string poly_str(const TPoly& p, const PolyContext& ctx) {
    if (p.is_zero()) return "0";
    // terms in decreasing multidegree order
    std::vector<const std::pair<const std::vector<long>, TowerElem>*> terms;
    for (const auto& kv : p.t) terms.push_back(&kv);
    std::sort(terms.begin(), terms.end(), [](const auto* a, const auto* b) {
        return multideg_cmp(MultiDeg(a->first), MultiDeg(b->first)) > 0;
    });
    std::string out;
    bool first = true;
    for (const auto* kv : terms) {
        const auto& [e, c] = *kv;
        std::string mono;
        for (int i = 0; i < p.nvars; ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ctx.vars[i];
            if (e[i] >= 2) mono += "^" + std::to_string(e[i]);
        }
        std::string cs = c.str();
        bool negated = false;
        if (!cs.empty() && cs[0] == '-' && cs.find_first_of("+- ", 1) == std::string::npos) {
            negated = true;
            cs = cs.substr(1);
        }
        std::string body;
        if (mono.empty()) {
            body = needs_parens(cs) && !first ? "(" + cs + ")" : cs;
        } else if (cs == "1") {
            body = mono;
        } else {
            body = (needs_parens(cs) ? "(" + cs + ")" : cs) + "*" + mono;
        }
        if (first) {
            out = negated ? "-" + body : body;
            first = false;
        } else {
            out += negated ? " - " + body : " + " + body;
        }
    }
    return out;
}

} // namespace ultraberk
