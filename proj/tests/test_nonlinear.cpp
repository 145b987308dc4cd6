#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cwaves/nonlinear.hpp"
#include "support/oracles.hpp"

using namespace cwaves;

namespace {

NonlinearitySpec linear_spec(double a) {
    NonlinearitySpec s;
    s.f = [a](double, double u) { return a * u; };
    s.l_inf = [a](double) { return std::abs(a); };
    s.l_0 = [](double) { return 0.0; };
    return s;
}

NonlinearitySpec arctan_spec(double eps = 1.0) {
    NonlinearitySpec s;
    s.f = [eps](double x, double u) { return eps * std::exp(-x * x) * std::atan(u); };
    s.l_inf = [](double) { return 0.0; };
    s.l_0 = [eps](double x) { return eps * std::exp(-x * x); };
    s.m = [eps](double x) { return eps * std::exp(-x * x) * 1.5707963267948966; };
    return s;
}

NonlinearitySpec saturating_spec(double c = 1.0) {
    NonlinearitySpec s;
    s.f = [c](double x, double u) {
        const double sh = 1.0 / std::cosh(x);
        return c * sh * sh * u / (1.0 + u * u);
    };
    s.l_inf = [](double) { return 0.0; };
    s.l_0 = [c](double x) {
        const double sh = 1.0 / std::cosh(x);
        return std::abs(c) * sh * sh;
    };
    s.m = [c](double x) {
        const double sh = 1.0 / std::cosh(x);
        return 0.5 * std::abs(c) * sh * sh;
    };
    return s;
}

} // namespace

TEST_CASE("nemytskii pointwise application") {
    auto g = build_grid(5.0, 101);
    auto s = linear_spec(2.5);
    Field u = oracles::random_field(g, 3);
    Field fu = nemytskii(s, u);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(fu[i] == Catch::Approx(2.5 * u[i]));

    // u = 0 gives the c(x) samples
    NonlinearitySpec with_c;
    with_c.f = [](double x, double u) { return std::exp(-x * x) + x * u; };
    Field c = nemytskii(with_c, Field::zero(g));
    for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(c[i] == Catch::Approx(std::exp(-g->node(i) * g->node(i))));

    // tanh saturation
    NonlinearitySpec th;
    th.f = [](double x, double u) { return std::exp(-x * x) * std::tanh(u); };
    Field ten = Field::sample(g, [](double) { return 10.0; });
    Field r = nemytskii(th, ten);
    const std::size_t mid = g->points() / 2;
    CHECK(r[mid] == Catch::Approx(std::tanh(10.0)).epsilon(1e-12));
}

TEST_CASE("lipschitz and growth bounds") {
    auto g = build_grid(10.0, 801);
    auto one = linear_spec(1.0);
    auto gb = lipschitz_growth_bounds(one, g);
    CHECK(gb.lipschitz == Catch::Approx(1.0));
    CHECK(gb.c_l2 == 0.0);

    auto zero = linear_spec(0.0);
    CHECK(lipschitz_growth_bounds(zero, g).lipschitz == Catch::Approx(0.0));

    // l_0 = sech^2 x with r = 2: ||l_0||_2 = sqrt(4/3)
    NonlinearitySpec s;
    s.f = [](double, double u) { return u; };
    s.l_inf = [](double) { return 0.0; };
    s.l_0 = [](double x) {
        const double c = 1.0 / std::cosh(x);
        return c * c;
    };
    s.r = 2.0;
    CHECK(lipschitz_growth_bounds(s, g).lipschitz ==
          Catch::Approx(std::sqrt(4.0 / 3.0)).margin(1e-6));
}

TEST_CASE("certify accepts honest bounds and rejects broken ones") {
    auto g = build_grid(8.0, 201);
    auto good = arctan_spec();
    good.a.emplace();
    good.a->a_inf = [](double) { return 0.0; };
    good.a->a_0.push_back({[](double x) { return std::exp(-x * x); }, 2.0});
    auto rep = certify(good, g);
    CHECK(rep.all_ok());

    auto bad = arctan_spec();
    bad.l_0 = [](double x) { return 0.1 * std::exp(-x * x); }; // too small
    CHECK_FALSE(certify(bad, g).lipschitz_ok);

    auto bad_m = arctan_spec();
    bad_m.m = [](double x) { return 0.5 * std::exp(-x * x); }; // below the arctan range
    CHECK_FALSE(certify(bad_m, g).m_ok);
}

TEST_CASE("nemytskii respects the certified Lipschitz bound") {
    auto g = build_grid(10.0, 401);
    auto s = arctan_spec(0.8);
    const double lf = lipschitz_growth_bounds(s, g).lipschitz;
    for (std::uint64_t k = 1; k <= 20; ++k) {
        Field u = oracles::random_smooth_field(g, 2 * k, 2.0);
        Field v = oracles::random_smooth_field(g, 2 * k + 1, 2.0);
        const double lhs = l2_norm(nemytskii(s, u) - nemytskii(s, v));
        CHECK(lhs <= lf * h1_norm(u - v) * (1.0 + 1e-9));
    }
}

TEST_CASE("uniform bound propagates to the Nemytskii image") {
    auto g = build_grid(10.0, 401);
    auto s = arctan_spec(1.3);
    Field m = Field::sample(g, [&](double x) { return (*s.m)(x); });
    const double m_l2 = l2_norm(m);
    for (std::uint64_t k = 1; k <= 10; ++k) {
        Field u = oracles::random_field(g, k, 30.0);
        CHECK(l2_norm(nemytskii(s, u)) <= m_l2 * (1.0 + 1e-9));
    }
}

TEST_CASE("limit potential checks") {
    auto g = build_grid(6.0, 121);

    // exactly linear: zero discrepancy at every rung
    auto lin = linear_spec(0.7);
    lin.alpha = LimitPotential{[](double) { return 0.7; }, {}, 2.0};
    auto lc = limit_potential_check(lin, limit_kind::zero, g);
    CHECK(lc.converged);
    for (double d : lc.discrepancy) CHECK(d < 1e-12);

    // saturating: alpha = sech^2, omega = 0
    auto sat = saturating_spec(1.0);
    sat.alpha = LimitPotential{[](double) { return 0.0; },
                               [](double x) {
                                   const double c = 1.0 / std::cosh(x);
                                   return c * c;
                               },
                               2.0};
    sat.omega = LimitPotential{[](double) { return 0.0; }, {}, 2.0};
    auto lc0 = limit_potential_check(sat, limit_kind::zero, g);
    CHECK(lc0.converged);
    CHECK(lc0.monotone);
    auto lci = limit_potential_check(sat, limit_kind::infinity, g);
    CHECK(lci.converged);
    CHECK(lci.monotone);

    CHECK_THROWS_AS(limit_potential_check(linear_spec(1.0), limit_kind::zero, g),
                    std::invalid_argument);
}

TEST_CASE("resonance conditions: Landesman-Lazer plus and minus") {
    auto g = build_grid(8.0, 161);
    auto s = arctan_spec(1.0);
    auto rep = resonance_conditions(s, g, 1e3);
    CHECK(rep.ll_plus);
    CHECK_FALSE(rep.ll_minus);
    // s arctan(s) >= 0 with diverging products: the sign condition holds too
    CHECK(rep.sr_plus);
    CHECK_FALSE(rep.sr_minus);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.witness_weight > 0.0);

    NonlinearitySpec neg = s;
    neg.f = [](double x, double u) { return -std::exp(-x * x) * std::atan(u); };
    auto rep2 = resonance_conditions(neg, g, 1e3);
    CHECK(rep2.ll_minus);
    CHECK_FALSE(rep2.ll_plus);
}

TEST_CASE("resonance conditions: sign conditions") {
    auto g = build_grid(8.0, 161);
    NonlinearitySpec s;
    s.f = [](double x, double u) { return std::exp(-x * x) * u / (1.0 + u * u); };
    auto rep = resonance_conditions(s, g, 1e3);
    CHECK(rep.sr_plus);
    CHECK_FALSE(rep.sr_minus);
    CHECK_FALSE(rep.ll_plus);

    NonlinearitySpec n;
    n.f = [](double x, double u) { return -std::exp(-x * x) * u / (1.0 + u * u); };
    auto rep2 = resonance_conditions(n, g, 1e3);
    CHECK(rep2.sr_minus);
    CHECK_FALSE(rep2.sr_plus);

    // identically zero product: degenerate, both sign witnesses empty
    NonlinearitySpec z;
    z.f = [](double, double) { return 0.0; };
    auto rep3 = resonance_conditions(z, g, 1e3);
    CHECK(rep3.degenerate);
    CHECK_FALSE(rep3.sr_plus);
    CHECK_FALSE(rep3.sr_minus);
}

TEST_CASE("resonance report stable under window growth") {
    auto g = build_grid(8.0, 161);
    auto s = arctan_spec(1.0);
    auto a = resonance_conditions(s, g, 1e3);
    auto b = resonance_conditions(s, g, 2e3);
    CHECK(a.ll_plus == b.ll_plus);
    CHECK(a.ll_minus == b.ll_minus);
    CHECK(a.sr_plus == b.sr_plus);
    CHECK(a.sr_minus == b.sr_minus);
}

TEST_CASE("primitive evaluation: closed form vs quadrature") {
    // expression-backed primitive (closed form) against the generic Simpson path
    expr rule("0.5*exp(-x^2)*arctan(u)");
    auto spec_expr = nonlinearity_from_expr(rule);
    REQUIRE(spec_expr.primitive_fn);

    NonlinearitySpec spec_quad;
    spec_quad.f = spec_expr.f;
    for (double x : {0.0, 0.7, -1.3})
        for (double v : {0.5, 2.0, -3.0})
            CHECK(spec_expr.primitive(x, v) ==
                  Catch::Approx(spec_quad.primitive(x, v)).margin(1e-9));
}
