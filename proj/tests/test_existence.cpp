#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cwaves/existence.hpp"
#include "cwaves/verdicts.hpp"
#include "support/oracles.hpp"

using namespace cwaves;

namespace {

PotentialSpec poschl_teller(double strength = 6.0) {
    PotentialSpec V;
    V.v_inf = [](double) { return 0.0; };
    V.v_0 = [strength](double x) {
        const double s = 1.0 / std::cosh(x);
        return -strength * s * s;
    };
    V.rho_declared = 0.0;
    return V;
}

PotentialSpec free_potential() {
    return PotentialSpec::bounded_only([](double) { return 0.0; });
}

// saturating well nonlinearity: f = c sech^2(x) u / (1 + u^2)
NonlinearitySpec saturating(double c) {
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
    s.a.emplace();
    s.a->a_inf = [](double) { return 0.0; };
    s.a->a_0.push_back({[c](double x) {
                            const double sh = 1.0 / std::cosh(x);
                            return std::max(c, 0.0) * sh * sh;
                        },
                        2.0});
    s.alpha = LimitPotential{[](double) { return 0.0; },
                             [c](double x) {
                                 const double sh = 1.0 / std::cosh(x);
                                 return c * sh * sh;
                             },
                             2.0};
    s.omega = LimitPotential{[](double) { return 0.0; }, {}, 2.0};
    return s;
}

} // namespace

TEST_CASE("q_bound arithmetic") {
    const double pi = 3.14159265358979323846;
    // closed form of the half-power integral: rho = pi gives sqrt(pi/rho) = 1
    CHECK(q_bound(1.0, 1.0, pi, 2.0) == Catch::Approx(1.1 * (2.0 + 1.0)));
    CHECK(q_bound(0.0, 3.0, 1.0, 1.0) == 0.0);
    CHECK(q_bound(1.0, 1.0, pi, 1.0, /*x_minus_trivial=*/true) == Catch::Approx(2.2));
    CHECK_THROWS_AS(q_bound(1.0, 1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(q_bound(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("newton: linear nonresonant problem has only the zero equilibrium") {
    auto g = build_grid(12.0, 401);
    auto V = free_potential();
    auto op = assemble(g, V, -1.0); // A = -Delta + 1 invertible
    NonlinearitySpec lin;
    lin.f = [](double x, double u) { return 0.3 * std::exp(-x * x) * u; };
    lin.l_inf = [](double) { return 0.3; };
    lin.l_0 = [](double) { return 0.0; };
    EquilibriumPolicy pol;
    for (std::uint64_t s : {1ull, 5ull, 9ull}) {
        Field seed = oracles::random_smooth_field(g, s, 1.0);
        auto eq = newton_polish(op, lin, seed, pol, 1e-8);
        REQUIRE(eq.converged);
        CHECK(l2_norm(eq.u) < 1e-8);
        CHECK(eq.residual <= 1e-10);
    }
}

TEST_CASE("newton: zero seed with c = 0 returns the exact zero equilibrium") {
    auto g = build_grid(10.0, 201);
    auto op = assemble(g, poschl_teller(), -2.0);
    auto f = saturating(6.0);
    EquilibriumPolicy pol;
    auto eq = newton_polish(op, f, Field::zero(g), pol, 1e-8);
    CHECK(eq.converged);
    CHECK(eq.residual == 0.0);
    CHECK(l2_norm(eq.u) == 0.0);
}

TEST_CASE("nonresonant scenario: counts differ, wave and orbit realized") {
    auto g = build_grid(16.0, 641);
    auto V = free_potential();
    auto f = saturating(6.0);
    const double lambda = -2.0;

    CheckOptions opts;
    opts.realize = true;
    opts.want_orbit = true;
    opts.eq_policy.dt = 0.02;
    opts.eq_policy.t_max = 60.0;
    opts.orbit_policy.dt = 0.02;
    opts.orbit_policy.t_max = 200.0;

    auto v = check_nonresonant(V, f, lambda, g, opts);
    REQUIRE(v.hypotheses_met);
    CHECK(*v.d_minus_alpha == 1); // -Delta - 6 sech^2: level -4 below -2
    CHECK(*v.d_minus_omega == 0); // -Delta: nothing below -2
    bool found_nonzero = false;
    for (std::size_t i = 0; i < v.equilibria.size(); ++i) {
        CHECK(v.equilibria[i].residual <= 1e-10);
        if (v.equilibrium_labels[i] != "zero") {
            found_nonzero = true;
            CHECK(l2_norm(v.equilibria[i].u) > 0.1);
        }
    }
    CHECK(found_nonzero);

    bool found_orbit = false;
    for (const auto& orb : v.orbits) {
        if (!orb.found) continue;
        found_orbit = true;
        CHECK(orb.endpoint_distance < 1e-3);
        CHECK(orb.energy_start > orb.energy_end); // strict drop away from zero
    }
    CHECK(found_orbit);
}

TEST_CASE("nonresonant scenario: equal limits produce a negative verdict") {
    auto g = build_grid(12.0, 321);
    auto V = free_potential();
    NonlinearitySpec f;
    f.f = [](double x, double u) { return 0.5 * std::exp(-x * x) * u; };
    f.l_inf = [](double) { return 0.0; };
    f.l_0 = [](double x) { return 0.5 * std::exp(-x * x) + 1e-3; };
    f.a.emplace();
    f.a->a_inf = [](double) { return 0.0; };
    f.a->a_0.push_back({[](double x) { return 0.5 * std::exp(-x * x); }, 2.0});
    auto same = LimitPotential{[](double) { return 0.0; },
                               [](double x) { return 0.5 * std::exp(-x * x); }, 2.0};
    f.alpha = same;
    f.omega = same;
    CheckOptions opts;
    opts.realize = false;
    auto v = check_nonresonant(V, f, -1.0, g, opts);
    CHECK_FALSE(v.prediction_positive);
    CHECK(*v.d_minus_alpha == *v.d_minus_omega);
}

TEST_CASE("nonresonant scenario: lambda above the bottom is rejected") {
    auto g = build_grid(12.0, 321);
    auto v = check_nonresonant(free_potential(), saturating(6.0), 0.5, g, CheckOptions{});
    CHECK_FALSE(v.hypotheses_met);
    CHECK(v.conclusion.find("essential bottom") != std::string::npos);
}

TEST_CASE("geometric margin: signs on the kernel sphere") {
    auto g = build_grid(16.0, 641);
    auto V = poschl_teller();
    auto sd0 = eigen_lowest(assemble(g, V, 0.0), 3);
    auto sd = eigen_lowest(assemble(g, V, sd0.eigenvalues[0]), 3);
    auto split = projections(sd);
    REQUIRE(split.dim_x0() == 1);

    // Landesman-Lazer plus nonlinearity: <v, F(v)> > 0 for both poles
    NonlinearitySpec ll;
    ll.f = [](double x, double u) { return std::exp(-x * x) * std::atan(u); };
    ll.l_inf = [](double) { return 0.0; };
    ll.l_0 = [](double x) { return std::exp(-x * x); };
    auto margin = geometric_margin(ll, split, {}, 8.0, +1, {0.0, 0.5, 1.0});
    CHECK(margin.alpha_geo > 0.0);
    // flipped sign: negative control
    auto flipped = geometric_margin(ll, split, {}, 8.0, -1, {0.0, 0.5, 1.0});
    CHECK(flipped.alpha_geo < 0.0);

    // odd sign-condition nonlinearity: symmetric positive margin
    auto sr = saturating(7.0);
    auto msr = geometric_margin(sr, split, {}, 8.0, +1, {0.0, 1.0});
    CHECK(msr.alpha_geo > 0.0);

    CHECK_THROWS_AS(geometric_margin(ll, split, {}, 8.0, 2, {0.0}), std::invalid_argument);
}

TEST_CASE("r0 doubling search finds a certified radius") {
    auto g = build_grid(16.0, 641);
    auto V = poschl_teller();
    auto sd0 = eigen_lowest(assemble(g, V, 0.0), 3);
    auto sd = eigen_lowest(assemble(g, V, sd0.eigenvalues[0]), 3);
    auto split = projections(sd);
    NonlinearitySpec ll;
    ll.f = [](double x, double u) { return std::exp(-x * x) * std::atan(u); };
    ll.l_inf = [](double) { return 0.0; };
    ll.l_0 = [](double x) { return std::exp(-x * x); };
    auto r0s = find_r0(ll, split, {}, +1, 0.25);
    CHECK(r0s.found);
    CHECK(r0s.margin.alpha_geo > 0.0);
}

TEST_CASE("isolating neighborhood membership") {
    auto g = build_grid(16.0, 641);
    auto V = poschl_teller();
    auto sd0 = eigen_lowest(assemble(g, V, 0.0), 3);
    auto sd = eigen_lowest(assemble(g, V, sd0.eigenvalues[0]), 3);
    auto split = projections(sd);
    auto nbhd = isolating_neighborhood(5.0, 0.3, 2.0);

    CHECK(nbhd.contains(Field::zero(g), split)); // origin inside
    Field big = Field::zero(g);
    axpy(4.0, split.kernel_basis[0], big); // ||P u|| = 4 = 2 R0
    CHECK_FALSE(nbhd.contains(big, split));

    CHECK_THROWS_AS(isolating_neighborhood(1.0, -0.1, 1.0), std::invalid_argument);
}

TEST_CASE("orbit detection degenerates gracefully") {
    auto g = build_grid(10.0, 201);
    // stable operator, no unstable directions at zero
    auto op = assemble(g, free_potential(), -1.0);
    auto f = std::make_shared<NonlinearitySpec>();
    f->f = [](double, double) { return 0.0; };
    f->l_inf = [](double) { return 0.0; };
    f->l_0 = [](double) { return 0.0; };
    auto flow = make_plain_flow(op, f);
    auto reports = detect_connecting_orbit(flow, Field::zero(g), "zero",
                                           {{"zero", Field::zero(g)}}, OrbitPolicy{},
                                           free_potential());
    REQUIRE(reports.size() == 1);
    CHECK_FALSE(reports[0].found);
    CHECK(reports[0].message.find("no unstable direction") != std::string::npos);
}

TEST_CASE("connecting orbit: two-equilibria gradient flow") {
    // -u'' + 2u = 6 sech^2 x u/(1+u^2): zero is a saddle, +-wave attract
    auto g = build_grid(16.0, 641);
    auto V = free_potential();
    auto f = std::make_shared<NonlinearitySpec>(saturating(6.0));
    auto op = assemble(g, V, -2.0);
    auto flow = make_plain_flow(op, f);

    EquilibriumPolicy ep;
    ep.dt = 0.02;
    ep.t_max = 80.0;
    // reach the nonzero wave by following the unstable direction from zero
    auto lin0 = eigen_lowest(assemble(g, subtract_limit_potential(V, *f->alpha), -2.0), 1);
    Field seed = Field::zero(g);
    axpy(0.5, lin0.eigenfields[0], seed);
    auto wave = find_equilibrium(flow, seed, ep, 1e-8);
    REQUIRE(wave.converged);
    REQUIRE(l2_norm(wave.u) > 0.1);
    CHECK(wave.residual <= 1e-10);

    OrbitPolicy op_pol;
    op_pol.dt = 0.02;
    op_pol.t_max = 300.0;
    op_pol.delta = 1e-4;
    auto reports = detect_connecting_orbit(flow, Field::zero(g), "zero",
                                           {{"zero", Field::zero(g)}, {"wave", wave.u}},
                                           op_pol, V);
    bool hit = false;
    for (const auto& r : reports) {
        if (!r.found) continue;
        hit = true;
        CHECK(r.to == "wave");
        CHECK(r.endpoint_distance < 1e-3);
        // energy decreases strictly along the connection
        CHECK(r.energy_start > r.energy_end);
        bool monotone = true;
        for (std::size_t j = 1; j < r.trajectory.energies.size(); ++j)
            if (r.trajectory.energies[j] >
                r.trajectory.energies[j - 1] + 1e-8 * (1.0 + std::abs(r.trajectory.energies[j])))
                monotone = false;
        CHECK(monotone);
    }
    CHECK(hit);
}

TEST_CASE("resonant scenario (LL+, nonvanishing c): wave found at the snapped level") {
    auto g = build_grid(16.0, 641);
    auto V = poschl_teller();
    NonlinearitySpec f;
    f.f = [](double x, double u) { return 0.5 * std::exp(-x * x) * (std::atan(u) + 0.3); };
    f.l_inf = [](double) { return 0.0; };
    f.l_0 = [](double x) { return 0.5 * std::exp(-x * x); };
    f.m = [](double x) { return 0.5 * std::exp(-x * x) * (1.5707963267948966 + 0.3); };

    CheckOptions opts;
    opts.realize = true;
    opts.eq_policy.dt = 0.02;
    auto v = check_resonant(V, f, -4.0, g, scenario_kind::resonant_plain, opts);
    REQUIRE(v.hypotheses_met);
    CHECK(v.resonance_condition == "LL+");
    CHECK(*v.d_minus == 0);
    CHECK(*v.dim_x0 == 1);
    CHECK(*v.k_inf == 1);
    CHECK(std::abs(v.lambda_used + 4.0) < 1e-2); // snapped near the analytic level

    REQUIRE_FALSE(v.equilibria.empty());
    bool nonzero = false;
    for (std::size_t i = 0; i < v.equilibria.size(); ++i) {
        CHECK(v.equilibria[i].residual <= 1e-10);
        if (v.equilibrium_labels[i] != "zero") nonzero = true;
    }
    CHECK(nonzero); // c != 0, so every equilibrium is nonzero
    REQUIRE(v.alpha_geo.has_value());
    CHECK(*v.alpha_geo > 0.0);
    REQUIRE(v.r_inf.has_value());
    CHECK(*v.r_inf > 0.0);
}

TEST_CASE("resonant scenario without any certified condition is rejected") {
    auto g = build_grid(12.0, 321);
    auto V = poschl_teller();
    NonlinearitySpec f;
    // sign-indefinite, oscillatory at infinity: no condition certifiable
    f.f = [](double x, double u) { return std::exp(-x * x) * std::sin(u); };
    f.l_inf = [](double) { return 0.0; };
    f.l_0 = [](double x) { return std::exp(-x * x); };
    f.m = [](double x) { return std::exp(-x * x); };
    auto v = check_resonant(V, f, -4.0, g, scenario_kind::resonant_plain, CheckOptions{});
    CHECK_FALSE(v.hypotheses_met);
    CHECK(v.conclusion.find("no resonance condition") != std::string::npos);
}

TEST_CASE("corollary clause detection with constant alpha") {
    // f = abar w tanh(u/w) + w arctan(u^3), w = sech x: the slope at zero is
    // the constant abar while the envelope w keeps every bound in L2
    auto g = build_grid(14.0, 561);
    auto V = poschl_teller();
    NonlinearitySpec f;
    const double abar = -0.5;
    f.f = [abar](double x, double u) {
        if (u == 0.0) return 0.0;
        const double w = 1.0 / std::cosh(x);
        return abar * w * std::tanh(u / w) + w * std::atan(u * u * u);
    };
    f.l_inf = [abar](double) { return std::abs(abar); };
    f.l_0 = [](double x) { return 1.59 / std::cosh(x); };
    f.m = [abar](double x) {
        return (std::abs(abar) + 1.5707963267948966) / std::cosh(x);
    };
    f.a.emplace();
    f.a->a_inf = [](double) { return 0.0; };
    f.a->a_0.push_back({[](double x) { return 1.5707963267948966 / std::cosh(x); }, 2.0});
    f.alpha = LimitPotential{[abar](double) { return abar; }, {}, 2.0};

    CheckOptions opts;
    opts.realize = false;
    auto v = check_resonant(V, f, -4.0, g, scenario_kind::resonant_trivial_solution, opts);
    // (LL)+ with constant alpha = -0.5 < 0: clause (i)
    CHECK(v.resonance_condition == "LL+");
    REQUIRE(v.alpha_bar.has_value());
    CHECK(*v.alpha_bar == Catch::Approx(-0.5));
    REQUIRE(v.corollary_clause.has_value());
    CHECK(*v.corollary_clause == 1);
    // clause (i) chain: d^-(V, alpha+lambda) <= d^-(V,lambda) < k_inf
    CHECK(*v.d_minus_alpha <= *v.d_minus);
    CHECK(*v.d_minus < *v.k_inf);
    CHECK(v.hypotheses_met);
}
