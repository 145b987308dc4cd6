#pragma once

// Declarative run configuration: nested key/value blocks with expressions of
// the grammar in expr.hpp quoted as strings. The serializer emits a canonical
// form so parse(serialize(c)) reproduces c exactly.
//
//   grid { L = 20 M = 1601 }
//   potential { V_inf = "0" V_0 = "-6*sech(x)^2" p = 2 }
//   nonlinearity { f = "exp(-x^2)*arctan(u)" l_0 = "exp(-x^2)" r = 2 }
//   lambda = -4
//   scenario = "resonant_plain"
//   solver { dt = 0.01 seed = 42 }
//   output_dir = "out"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cwaves/errors.hpp"
#include "cwaves/expr.hpp"
#include "cwaves/grid.hpp"
#include "cwaves/io.hpp"
#include "cwaves/nonlinear.hpp"
#include "cwaves/potential.hpp"
#include "cwaves/verdicts.hpp"

namespace cwaves {

namespace cfg {

struct value {
    enum class kind { number, boolean, string, list } k = kind::number;
    double num = 0.0;
    bool b = false;
    std::string str;
    std::vector<value> list;

    static value of(double v) { return value{kind::number, v, false, {}, {}}; }
    static value of(bool v) { return value{kind::boolean, 0.0, v, {}, {}}; }
    static value of(std::string v) { return value{kind::string, 0.0, false, std::move(v), {}}; }
};

struct block {
    std::map<std::string, value> values;
    std::map<std::string, block> blocks;

    bool has(const std::string& key) const { return values.count(key) > 0; }
};

struct parser {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit parser(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) const { throw config_error(msg, line, col); }

    void advance() {
        if (pos < src.size()) {
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
        for (;;) {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
                advance();
            if (pos < src.size() && src[pos] == '#') {
                while (pos < src.size() && src[pos] != '\n') advance();
                continue;
            }
            return;
        }
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        if (pos >= src.size() || (!std::isalpha(static_cast<unsigned char>(src[pos])) && src[pos] != '_'))
            fail("expected identifier");
        std::string out;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
            out += src[pos];
            advance();
        }
        return out;
    }

    value parse_value() {
        skip_ws();
        if (pos >= src.size()) fail("expected value");
        const char c = src[pos];
        if (c == '"') {
            advance();
            std::string s;
            while (pos < src.size() && src[pos] != '"') {
                s += src[pos];
                advance();
            }
            if (pos >= src.size()) fail("unterminated string");
            advance();
            return value::of(std::move(s));
        }
        if (c == '[') {
            advance();
            value v;
            v.k = value::kind::list;
            if (peek() != ']')
                for (;;) {
                    v.list.push_back(parse_value());
                    if (eat(',')) continue;
                    break;
                }
            if (!eat(']')) fail("expected ']'");
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string id = ident();
            if (id == "true") return value::of(true);
            if (id == "false") return value::of(false);
            fail("unexpected word '" + id + "' (strings must be quoted)");
        }
        // number
        std::string tok;
        while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(src[pos])) ||
                                    src[pos] == '.' || src[pos] == '-' || src[pos] == '+' ||
                                    src[pos] == 'e' || src[pos] == 'E')) {
            tok += src[pos];
            advance();
        }
        char* end = nullptr;
        const double num = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size()) fail("bad number '" + tok + "'");
        return value::of(num);
    }

    block parse_block(bool top) {
        block b;
        for (;;) {
            skip_ws();
            if (pos >= src.size()) {
                if (!top) fail("unexpected end of file inside block");
                return b;
            }
            if (src[pos] == '}') {
                if (top) fail("unmatched '}'");
                advance();
                return b;
            }
            std::string key = ident();
            skip_ws();
            if (pos < src.size() && src[pos] == '{') {
                advance();
                if (!b.blocks.emplace(key, parse_block(false)).second)
                    fail("duplicate block '" + key + "'");
            } else if (eat('=')) {
                if (!b.values.emplace(key, parse_value()).second)
                    fail("duplicate key '" + key + "'");
            } else {
                fail("expected '=' or '{' after '" + key + "'");
            }
        }
    }
};

} // namespace cfg

// ---- the run configuration ---------------------------------------------------------

struct RunConfig {
    // grid
    double L = 10.0;
    long long M = 401;
    // potential
    std::string v_inf_expr = "0";
    std::string v_0_expr = "0";
    double p = 2.0;
    std::optional<double> rho_declared;
    // nonlinearity
    std::string f_expr = "0";
    std::string l_inf_expr = "0";
    std::string l_0_expr = "0";
    double r = 2.0;
    std::optional<std::string> m_expr;
    std::optional<std::string> a_inf_expr;
    std::vector<std::string> a_0_exprs;
    std::vector<double> a_0_ps;
    std::optional<std::string> alpha_inf_expr, alpha_0_expr;
    double alpha_r = 2.0;
    std::optional<std::string> omega_inf_expr, omega_0_expr;
    double omega_r = 2.0;
    // scalar problem data
    double lambda = 0.0;
    std::string scenario = "nonresonant";
    // solver policies
    double dt = 0.01;
    double T = 10.0;
    double t_max = 40.0;
    long long record_stride = 10;
    double newton_tol = 1e-10;
    double switch_tol = 1e-3;
    double h1_ceiling = 1e6;
    double orbit_tol = 1e-3;
    double orbit_t_max = 200.0;
    double orbit_delta = 1e-4;
    double s_max = 1e3;
    long long eigen_k = 10;
    double tau_ker = 0.0; // 0 = derive from the computed window
    bool snap_lambda = true;
    bool realize = true;
    bool want_orbit = false;
    std::uint64_t seed = 12345;
    std::string u0_expr = "0";
    std::vector<long long> tail_track;
    double fit_lo = 0.0, fit_hi = 0.0; // 0,0 = defaults from L
    // sweep
    std::vector<double> sweep_lambdas;
    // output
    std::string output_dir = "out";

    std::string serialize() const;
    static RunConfig parse(const std::string& text);
    static RunConfig parse_file(const std::string& path);

    grid_ptr make_grid() const { return build_grid(L, static_cast<std::size_t>(M)); }

    PotentialSpec make_potential() const {
        PotentialSpec V;
        expr vi(v_inf_expr), v0(v_0_expr);
        V.v_inf = [vi](double x) { return vi(x); };
        V.v_0 = [v0](double x) { return v0(x); };
        V.p = p;
        V.rho_declared = rho_declared;
        return V;
    }

    NonlinearitySpec make_nonlinearity() const {
        NonlinearitySpec s = nonlinearity_from_expr(expr(f_expr));
        expr li(l_inf_expr), l0(l_0_expr);
        s.l_inf = [li](double x) { return li(x); };
        s.l_0 = [l0](double x) { return l0(x); };
        s.r = r;
        if (m_expr) {
            expr me(*m_expr);
            s.m = [me](double x) { return me(x); };
        }
        if (a_inf_expr || !a_0_exprs.empty()) {
            s.a.emplace();
            if (a_inf_expr) {
                expr ae(*a_inf_expr);
                s.a->a_inf = [ae](double x) { return ae(x); };
            } else {
                s.a->a_inf = [](double) { return 0.0; };
            }
            for (std::size_t i = 0; i < a_0_exprs.size(); ++i) {
                expr comp(a_0_exprs[i]);
                const double cp = i < a_0_ps.size() ? a_0_ps[i] : p;
                s.a->a_0.push_back({[comp](double x) { return comp(x); }, cp});
            }
        }
        auto limit = [](const std::optional<std::string>& inf_e,
                        const std::optional<std::string>& dec_e, double rr)
            -> std::optional<LimitPotential> {
            if (!inf_e && !dec_e) return std::nullopt;
            LimitPotential lp;
            if (inf_e) {
                expr e(*inf_e);
                lp.bounded = [e](double x) { return e(x); };
            } else {
                lp.bounded = [](double) { return 0.0; };
            }
            if (dec_e) {
                expr e(*dec_e);
                lp.decaying = [e](double x) { return e(x); };
            } else {
                lp.decaying = [](double) { return 0.0; };
            }
            lp.r = rr;
            return lp;
        };
        s.alpha = limit(alpha_inf_expr, alpha_0_expr, alpha_r);
        s.omega = limit(omega_inf_expr, omega_0_expr, omega_r);
        return s;
    }

    scenario_kind scenario_tag() const {
        if (scenario == "nonresonant") return scenario_kind::nonresonant;
        if (scenario == "resonant_plain") return scenario_kind::resonant_plain;
        if (scenario == "resonant_trivial_solution")
            return scenario_kind::resonant_trivial_solution;
        throw config_error("unknown scenario '" + scenario + "'");
    }

    CheckOptions check_options() const {
        CheckOptions o;
        o.eigen_k = static_cast<std::size_t>(eigen_k);
        o.tau_ker = tau_ker > 0.0 ? tau_ker : -1.0;
        o.snap_lambda = snap_lambda;
        o.realize = realize;
        o.want_orbit = want_orbit;
        o.eq_policy.dt = dt;
        o.eq_policy.t_max = t_max;
        o.eq_policy.switch_tol = switch_tol;
        o.eq_policy.newton_tol = newton_tol;
        o.eq_policy.h1_ceiling = h1_ceiling;
        o.orbit_policy.dt = dt;
        o.orbit_policy.t_max = orbit_t_max;
        o.orbit_policy.orbit_tol = orbit_tol;
        o.orbit_policy.delta = orbit_delta;
        o.orbit_policy.h1_ceiling = h1_ceiling;
        o.s_max = s_max;
        o.seed = seed;
        return o;
    }

    std::string config_hash() const { return hex64(fnv1a64(serialize())); }
};

namespace cfg {

inline std::string quote_str(const std::string& s) { return '"' + s + '"'; }

inline void emit_kv(std::ostringstream& o, int indent, const std::string& k,
                    const std::string& v) {
    o << std::string(indent, ' ') << k << " = " << v << "\n";
}

inline std::string num_list(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fmt17(xs[i]);
    }
    return out + "]";
}

inline std::string int_list(const std::vector<long long>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(xs[i]);
    }
    return out + "]";
}

inline std::string str_list(const std::vector<std::string>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += quote_str(xs[i]);
    }
    return out + "]";
}

} // namespace cfg

inline std::string RunConfig::serialize() const {
    std::ostringstream o;
    o << "grid {\n";
    cfg::emit_kv(o, 2, "L", fmt17(L));
    cfg::emit_kv(o, 2, "M", std::to_string(M));
    o << "}\n";
    o << "potential {\n";
    cfg::emit_kv(o, 2, "V_inf", cfg::quote_str(v_inf_expr));
    cfg::emit_kv(o, 2, "V_0", cfg::quote_str(v_0_expr));
    cfg::emit_kv(o, 2, "p", fmt17(p));
    if (rho_declared) cfg::emit_kv(o, 2, "rho_declared", fmt17(*rho_declared));
    o << "}\n";
    o << "nonlinearity {\n";
    cfg::emit_kv(o, 2, "f", cfg::quote_str(f_expr));
    cfg::emit_kv(o, 2, "l_inf", cfg::quote_str(l_inf_expr));
    cfg::emit_kv(o, 2, "l_0", cfg::quote_str(l_0_expr));
    cfg::emit_kv(o, 2, "r", fmt17(r));
    if (m_expr) cfg::emit_kv(o, 2, "m", cfg::quote_str(*m_expr));
    if (a_inf_expr) cfg::emit_kv(o, 2, "a_inf", cfg::quote_str(*a_inf_expr));
    if (!a_0_exprs.empty()) {
        cfg::emit_kv(o, 2, "a_0", cfg::str_list(a_0_exprs));
        cfg::emit_kv(o, 2, "a_p", cfg::num_list(a_0_ps));
    }
    if (alpha_inf_expr) cfg::emit_kv(o, 2, "alpha_inf", cfg::quote_str(*alpha_inf_expr));
    if (alpha_0_expr) cfg::emit_kv(o, 2, "alpha_0", cfg::quote_str(*alpha_0_expr));
    if (alpha_inf_expr || alpha_0_expr) cfg::emit_kv(o, 2, "alpha_r", fmt17(alpha_r));
    if (omega_inf_expr) cfg::emit_kv(o, 2, "omega_inf", cfg::quote_str(*omega_inf_expr));
    if (omega_0_expr) cfg::emit_kv(o, 2, "omega_0", cfg::quote_str(*omega_0_expr));
    if (omega_inf_expr || omega_0_expr) cfg::emit_kv(o, 2, "omega_r", fmt17(omega_r));
    o << "}\n";
    cfg::emit_kv(o, 0, "lambda", fmt17(lambda));
    cfg::emit_kv(o, 0, "scenario", cfg::quote_str(scenario));
    o << "solver {\n";
    cfg::emit_kv(o, 2, "dt", fmt17(dt));
    cfg::emit_kv(o, 2, "T", fmt17(T));
    cfg::emit_kv(o, 2, "t_max", fmt17(t_max));
    cfg::emit_kv(o, 2, "record_stride", std::to_string(record_stride));
    cfg::emit_kv(o, 2, "newton_tol", fmt17(newton_tol));
    cfg::emit_kv(o, 2, "switch_tol", fmt17(switch_tol));
    cfg::emit_kv(o, 2, "h1_ceiling", fmt17(h1_ceiling));
    cfg::emit_kv(o, 2, "orbit_tol", fmt17(orbit_tol));
    cfg::emit_kv(o, 2, "orbit_t_max", fmt17(orbit_t_max));
    cfg::emit_kv(o, 2, "orbit_delta", fmt17(orbit_delta));
    cfg::emit_kv(o, 2, "s_max", fmt17(s_max));
    cfg::emit_kv(o, 2, "eigen_k", std::to_string(eigen_k));
    cfg::emit_kv(o, 2, "tau_ker", fmt17(tau_ker));
    cfg::emit_kv(o, 2, "snap_lambda", snap_lambda ? "true" : "false");
    cfg::emit_kv(o, 2, "realize", realize ? "true" : "false");
    cfg::emit_kv(o, 2, "want_orbit", want_orbit ? "true" : "false");
    cfg::emit_kv(o, 2, "seed", std::to_string(seed));
    cfg::emit_kv(o, 2, "u0", cfg::quote_str(u0_expr));
    if (!tail_track.empty()) cfg::emit_kv(o, 2, "tail_track", cfg::int_list(tail_track));
    if (fit_lo != 0.0 || fit_hi != 0.0) {
        cfg::emit_kv(o, 2, "fit_lo", fmt17(fit_lo));
        cfg::emit_kv(o, 2, "fit_hi", fmt17(fit_hi));
    }
    o << "}\n";
    if (!sweep_lambdas.empty()) {
        o << "sweep {\n";
        cfg::emit_kv(o, 2, "lambdas", cfg::num_list(sweep_lambdas));
        o << "}\n";
    }
    cfg::emit_kv(o, 0, "output_dir", cfg::quote_str(output_dir));
    return o.str();
}

namespace cfg {

inline double need_num(const block& b, const std::string& key, const std::string& where) {
    auto it = b.values.find(key);
    if (it == b.values.end()) throw config_error("missing key '" + key + "' in " + where);
    if (it->second.k != value::kind::number)
        throw config_error("key '" + key + "' in " + where + " must be a number");
    return it->second.num;
}

inline double opt_num(const block& b, const std::string& key, double fallback) {
    auto it = b.values.find(key);
    if (it == b.values.end()) return fallback;
    if (it->second.k != value::kind::number)
        throw config_error("key '" + key + "' must be a number");
    return it->second.num;
}

inline bool opt_bool(const block& b, const std::string& key, bool fallback) {
    auto it = b.values.find(key);
    if (it == b.values.end()) return fallback;
    if (it->second.k != value::kind::boolean)
        throw config_error("key '" + key + "' must be true or false");
    return it->second.b;
}

inline std::string need_str(const block& b, const std::string& key, const std::string& where) {
    auto it = b.values.find(key);
    if (it == b.values.end()) throw config_error("missing key '" + key + "' in " + where);
    if (it->second.k != value::kind::string)
        throw config_error("key '" + key + "' in " + where + " must be a quoted string");
    return it->second.str;
}

inline std::optional<std::string> opt_str(const block& b, const std::string& key) {
    auto it = b.values.find(key);
    if (it == b.values.end()) return std::nullopt;
    if (it->second.k != value::kind::string)
        throw config_error("key '" + key + "' must be a quoted string");
    return it->second.str;
}

} // namespace cfg

inline RunConfig RunConfig::parse(const std::string& text) {
    cfg::parser p(text);
    cfg::block top = p.parse_block(true);
    RunConfig c;

    auto gi = top.blocks.find("grid");
    if (gi == top.blocks.end()) throw config_error("missing 'grid' block");
    c.L = cfg::need_num(gi->second, "L", "grid");
    c.M = static_cast<long long>(cfg::need_num(gi->second, "M", "grid"));
    if (c.L <= 0.0) throw config_error("grid.L must be positive");
    if (c.M < 3) throw config_error("grid.M must be at least 3");

    auto pi = top.blocks.find("potential");
    if (pi == top.blocks.end()) throw config_error("missing 'potential' block");
    c.v_inf_expr = cfg::need_str(pi->second, "V_inf", "potential");
    c.v_0_expr = cfg::need_str(pi->second, "V_0", "potential");
    c.p = cfg::opt_num(pi->second, "p", 2.0);
    if (pi->second.has("rho_declared"))
        c.rho_declared = cfg::need_num(pi->second, "rho_declared", "potential");

    if (auto ni = top.blocks.find("nonlinearity"); ni != top.blocks.end()) {
        const auto& nb = ni->second;
        c.f_expr = cfg::need_str(nb, "f", "nonlinearity");
        c.l_inf_expr = cfg::opt_str(nb, "l_inf").value_or("0");
        c.l_0_expr = cfg::opt_str(nb, "l_0").value_or("0");
        c.r = cfg::opt_num(nb, "r", 2.0);
        c.m_expr = cfg::opt_str(nb, "m");
        c.a_inf_expr = cfg::opt_str(nb, "a_inf");
        if (auto it = nb.values.find("a_0"); it != nb.values.end()) {
            if (it->second.k != cfg::value::kind::list)
                throw config_error("nonlinearity.a_0 must be a list of expressions");
            for (const auto& v : it->second.list) {
                if (v.k != cfg::value::kind::string)
                    throw config_error("nonlinearity.a_0 entries must be quoted strings");
                c.a_0_exprs.push_back(v.str);
            }
        }
        if (auto it = nb.values.find("a_p"); it != nb.values.end()) {
            if (it->second.k != cfg::value::kind::list)
                throw config_error("nonlinearity.a_p must be a list of numbers");
            for (const auto& v : it->second.list) c.a_0_ps.push_back(v.num);
        }
        if (c.a_0_ps.size() != c.a_0_exprs.size() && !c.a_0_ps.empty())
            throw config_error("nonlinearity.a_p must match a_0 in length");
        c.alpha_inf_expr = cfg::opt_str(nb, "alpha_inf");
        c.alpha_0_expr = cfg::opt_str(nb, "alpha_0");
        c.alpha_r = cfg::opt_num(nb, "alpha_r", 2.0);
        c.omega_inf_expr = cfg::opt_str(nb, "omega_inf");
        c.omega_0_expr = cfg::opt_str(nb, "omega_0");
        c.omega_r = cfg::opt_num(nb, "omega_r", 2.0);
    }

    c.lambda = cfg::opt_num(top, "lambda", 0.0);
    if (auto s = cfg::opt_str(top, "scenario")) c.scenario = *s;

    if (auto si = top.blocks.find("solver"); si != top.blocks.end()) {
        const auto& sb = si->second;
        c.dt = cfg::opt_num(sb, "dt", c.dt);
        c.T = cfg::opt_num(sb, "T", c.T);
        c.t_max = cfg::opt_num(sb, "t_max", c.t_max);
        c.record_stride = static_cast<long long>(cfg::opt_num(sb, "record_stride", 10));
        c.newton_tol = cfg::opt_num(sb, "newton_tol", c.newton_tol);
        c.switch_tol = cfg::opt_num(sb, "switch_tol", c.switch_tol);
        c.h1_ceiling = cfg::opt_num(sb, "h1_ceiling", c.h1_ceiling);
        c.orbit_tol = cfg::opt_num(sb, "orbit_tol", c.orbit_tol);
        c.orbit_t_max = cfg::opt_num(sb, "orbit_t_max", c.orbit_t_max);
        c.orbit_delta = cfg::opt_num(sb, "orbit_delta", c.orbit_delta);
        c.s_max = cfg::opt_num(sb, "s_max", c.s_max);
        c.eigen_k = static_cast<long long>(cfg::opt_num(sb, "eigen_k", 10));
        c.tau_ker = cfg::opt_num(sb, "tau_ker", 0.0);
        c.snap_lambda = cfg::opt_bool(sb, "snap_lambda", true);
        c.realize = cfg::opt_bool(sb, "realize", true);
        c.want_orbit = cfg::opt_bool(sb, "want_orbit", false);
        c.seed = static_cast<std::uint64_t>(cfg::opt_num(sb, "seed", 12345));
        if (auto u = cfg::opt_str(sb, "u0")) c.u0_expr = *u;
        if (auto it = sb.values.find("tail_track"); it != sb.values.end()) {
            if (it->second.k != cfg::value::kind::list)
                throw config_error("solver.tail_track must be a list");
            for (const auto& v : it->second.list)
                c.tail_track.push_back(static_cast<long long>(v.num));
        }
        c.fit_lo = cfg::opt_num(sb, "fit_lo", 0.0);
        c.fit_hi = cfg::opt_num(sb, "fit_hi", 0.0);
        for (double tol : {c.dt, c.newton_tol, c.switch_tol, c.orbit_tol})
            if (!(tol > 0.0)) throw config_error("solver tolerances must be positive");
    }

    if (auto wi = top.blocks.find("sweep"); wi != top.blocks.end()) {
        if (auto it = wi->second.values.find("lambdas"); it != wi->second.values.end()) {
            if (it->second.k != cfg::value::kind::list)
                throw config_error("sweep.lambdas must be a list");
            for (const auto& v : it->second.list) c.sweep_lambdas.push_back(v.num);
        }
    }
    if (auto od = cfg::opt_str(top, "output_dir")) c.output_dir = *od;

    // expressions must parse now, with positions pointing at this config
    try {
        expr(c.v_inf_expr);
        expr(c.v_0_expr);
        expr(c.f_expr);
        expr(c.l_inf_expr);
        expr(c.l_0_expr);
        expr(c.u0_expr);
        if (c.m_expr) expr(*c.m_expr);
        if (c.a_inf_expr) expr(*c.a_inf_expr);
        for (const auto& ae : c.a_0_exprs) (void)expr{ae};
        if (c.alpha_inf_expr) expr(*c.alpha_inf_expr);
        if (c.alpha_0_expr) expr(*c.alpha_0_expr);
        if (c.omega_inf_expr) expr(*c.omega_inf_expr);
        if (c.omega_0_expr) expr(*c.omega_0_expr);
    } catch (const config_error& e) {
        throw config_error(std::string("while validating expressions: ") + e.what());
    }
    return c;
}

inline RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse(text);
}

} // namespace cwaves
