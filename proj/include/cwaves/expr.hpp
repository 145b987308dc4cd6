#pragma once

// Small closed-form expression grammar over (x, u):
//   expr := term (('+'|'-') term)*
//   term := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?          right associative
//   unary := '-' unary | primary
//   primary := number | 'x' | 'u' | 'pi' | fn '(' expr ')' | '(' expr ')'
// Functions: exp, tanh, arctan (alias atan), sech.
// Used for potentials, nonlinearities and their declared bound fields.

#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwaves/errors.hpp"

namespace cwaves {

enum class expr_fn { exp_fn, tanh_fn, arctan_fn, sech_fn };

struct expr_node;
using expr_ptr = std::shared_ptr<const expr_node>;

struct expr_node {
    enum class kind { number, var_x, var_u, add, sub, mul, div, pow, neg, call };

    kind k;
    double value = 0.0;           // number
    expr_fn fn = expr_fn::exp_fn; // call
    expr_ptr lhs, rhs;            // binary; unary/call use lhs only

    static expr_ptr num(double v) {
        auto n = std::make_shared<expr_node>();
        n->k = kind::number;
        n->value = v;
        return n;
    }
    static expr_ptr make(kind k, expr_ptr a, expr_ptr b = nullptr) {
        auto n = std::make_shared<expr_node>();
        n->k = k;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }
    static expr_ptr call(expr_fn f, expr_ptr a) {
        auto n = std::make_shared<expr_node>();
        n->k = kind::call;
        n->fn = f;
        n->lhs = std::move(a);
        return n;
    }
};

inline double eval_expr(const expr_node& n, double x, double u) {
    using K = expr_node::kind;
    switch (n.k) {
        case K::number: return n.value;
        case K::var_x: return x;
        case K::var_u: return u;
        case K::add: return eval_expr(*n.lhs, x, u) + eval_expr(*n.rhs, x, u);
        case K::sub: return eval_expr(*n.lhs, x, u) - eval_expr(*n.rhs, x, u);
        case K::mul: return eval_expr(*n.lhs, x, u) * eval_expr(*n.rhs, x, u);
        case K::div: return eval_expr(*n.lhs, x, u) / eval_expr(*n.rhs, x, u);
        case K::pow: return std::pow(eval_expr(*n.lhs, x, u), eval_expr(*n.rhs, x, u));
        case K::neg: return -eval_expr(*n.lhs, x, u);
        case K::call: {
            double a = eval_expr(*n.lhs, x, u);
            switch (n.fn) {
                case expr_fn::exp_fn: return std::exp(a);
                case expr_fn::tanh_fn: return std::tanh(a);
                case expr_fn::arctan_fn: return std::atan(a);
                case expr_fn::sech_fn: return 1.0 / std::cosh(a);
            }
        }
    }
    return 0.0;
}

namespace detail {

struct expr_parser {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;

    explicit expr_parser(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw config_error("expression: " + msg, line, col);
    }

    void advance(size_t n = 1) {
        for (size_t i = 0; i < n && pos < src.size(); ++i) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) advance();
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            advance();
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    expr_ptr parse() {
        auto e = parse_expr();
        skip_ws();
        if (pos != src.size()) fail("unexpected trailing input");
        return e;
    }

    expr_ptr parse_expr() {
        auto e = parse_term();
        for (;;) {
            if (eat('+'))
                e = expr_node::make(expr_node::kind::add, e, parse_term());
            else if (eat('-'))
                e = expr_node::make(expr_node::kind::sub, e, parse_term());
            else
                return e;
        }
    }

    expr_ptr parse_term() {
        auto e = parse_factor();
        for (;;) {
            if (eat('*'))
                e = expr_node::make(expr_node::kind::mul, e, parse_factor());
            else if (eat('/'))
                e = expr_node::make(expr_node::kind::div, e, parse_factor());
            else
                return e;
        }
    }

    expr_ptr parse_factor() {
        if (eat('-')) return expr_node::make(expr_node::kind::neg, parse_factor());
        auto base = parse_primary();
        if (eat('^')) return expr_node::make(expr_node::kind::pow, base, parse_factor());
        return base;
    }

    expr_ptr parse_primary() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of expression");
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        if (c == '(') {
            advance();
            auto e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    expr_ptr parse_number() {
        size_t start = pos;
        while (pos < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
            advance();
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            size_t save = pos;
            advance();
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) advance();
            if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
                    advance();
            } else {
                pos = save; // 'e' was not an exponent
            }
        }
        std::string tok = src.substr(start, pos - start);
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) fail("bad number '" + tok + "'");
        return expr_node::num(v);
    }

    expr_ptr parse_ident() {
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            advance();
        std::string id = src.substr(start, pos - start);
        if (id == "x") return expr_node::make(expr_node::kind::var_x, nullptr);
        if (id == "u") return expr_node::make(expr_node::kind::var_u, nullptr);
        if (id == "pi") return expr_node::num(3.14159265358979323846);
        std::optional<expr_fn> fn;
        if (id == "exp") fn = expr_fn::exp_fn;
        if (id == "tanh") fn = expr_fn::tanh_fn;
        if (id == "arctan" || id == "atan") fn = expr_fn::arctan_fn;
        if (id == "sech") fn = expr_fn::sech_fn;
        if (!fn) fail("unknown identifier '" + id + "'");
        if (!eat('(')) fail("expected '(' after function name");
        auto arg = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return expr_node::call(*fn, arg);
    }
};

inline bool depends_on_u(const expr_node& n) {
    using K = expr_node::kind;
    switch (n.k) {
        case K::var_u: return true;
        case K::number:
        case K::var_x: return false;
        case K::neg:
        case K::call: return depends_on_u(*n.lhs);
        default: return depends_on_u(*n.lhs) || depends_on_u(*n.rhs);
    }
}

// Flattens top-level sums, distributing products over parenthesized sums once.
inline void flatten_sum(const expr_ptr& n, double sign, std::vector<std::pair<expr_ptr, double>>& out) {
    using K = expr_node::kind;
    if (n->k == K::add) {
        flatten_sum(n->lhs, sign, out);
        flatten_sum(n->rhs, sign, out);
    } else if (n->k == K::sub) {
        flatten_sum(n->lhs, sign, out);
        flatten_sum(n->rhs, -sign, out);
    } else if (n->k == K::neg) {
        flatten_sum(n->lhs, -sign, out);
    } else if (n->k == K::mul &&
               (n->lhs->k == K::add || n->lhs->k == K::sub || n->rhs->k == K::add ||
                n->rhs->k == K::sub)) {
        // single distribution pass: p*(a±b) -> p*a ± p*b
        const bool left_sum = (n->lhs->k == K::add || n->lhs->k == K::sub);
        const expr_ptr& s = left_sum ? n->lhs : n->rhs;
        const expr_ptr& p = left_sum ? n->rhs : n->lhs;
        std::vector<std::pair<expr_ptr, double>> parts;
        flatten_sum(s, 1.0, parts);
        for (auto& [term, sgn] : parts)
            flatten_sum(expr_node::make(K::mul, p, term), sign * sgn, out);
    } else {
        out.emplace_back(n, sign);
    }
}

// One multiplicative term decomposed as (u-free factors) * phi(u), where phi is
// a primitive-friendly shape: u^k, arctan(u) or tanh(u).
struct u_term {
    std::vector<expr_ptr> x_factors;
    double coeff = 1.0;
    int u_power = 0;
    std::optional<expr_fn> u_call; // arctan or tanh of plain u

    bool closed_form() const {
        if (u_call) return u_power == 0;
        return true;
    }
};

inline bool collect_factors(const expr_ptr& n, u_term& t) {
    using K = expr_node::kind;
    if (!depends_on_u(*n)) {
        t.x_factors.push_back(n);
        return true;
    }
    switch (n->k) {
        case K::var_u: t.u_power += 1; return true;
        case K::mul: return collect_factors(n->lhs, t) && collect_factors(n->rhs, t);
        case K::neg: t.coeff = -t.coeff; return collect_factors(n->lhs, t);
        case K::pow:
            if (n->lhs->k == K::var_u && n->rhs->k == K::number) {
                double e = n->rhs->value;
                if (e == std::floor(e) && e >= 0 && e < 64) {
                    t.u_power += static_cast<int>(e);
                    return true;
                }
            }
            return false;
        case K::call:
            if ((n->fn == expr_fn::arctan_fn || n->fn == expr_fn::tanh_fn) &&
                n->lhs->k == K::var_u && !t.u_call) {
                t.u_call = n->fn;
                return true;
            }
            return false;
        default: return false;
    }
}

} // namespace detail

/// Immutable parsed expression of (x, u).
class expr {
public:
    expr() = default;
    explicit expr(std::string text) : text_(std::move(text)) {
        detail::expr_parser p(text_);
        root_ = p.parse();
    }

    bool empty() const { return !root_; }
    const std::string& text() const { return text_; }

    double operator()(double x, double u = 0.0) const { return eval_expr(*root_, x, u); }

    bool depends_on_u() const { return root_ && detail::depends_on_u(*root_); }

    /// Antiderivative in u from 0 to v, when the grammar yields a closed form.
    /// Terms are g(x)*u^k, g(x)*arctan(u), g(x)*tanh(u) and sums thereof.
    std::optional<double> primitive(double x, double v) const {
        if (!root_) return std::nullopt;
        std::vector<std::pair<expr_ptr, double>> terms;
        detail::flatten_sum(root_, 1.0, terms);
        double total = 0.0;
        for (auto& [node, sign] : terms) {
            detail::u_term t;
            if (!detail::collect_factors(node, t) || !t.closed_form()) return std::nullopt;
            double g = t.coeff * sign;
            for (auto& f : t.x_factors) g *= eval_expr(*f, x, 0.0);
            if (t.u_call) {
                if (*t.u_call == expr_fn::arctan_fn)
                    total += g * (v * std::atan(v) - 0.5 * std::log1p(v * v));
                else // tanh: log cosh, computed overflow-safe
                    total += g * (std::abs(v) + std::log1p(std::exp(-2.0 * std::abs(v))) -
                                  std::log(2.0));
            } else {
                total += g * std::pow(v, t.u_power + 1) / (t.u_power + 1);
            }
        }
        return total;
    }

private:
    std::string text_;
    expr_ptr root_;
};

} // namespace cwaves
