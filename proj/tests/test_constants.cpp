#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "heislab/constants.hpp"

using namespace heislab;

TEST_CASE("ratio condition threshold (Q+3)/(Q+1)") {
    // n = 1: threshold 7/5
    CHECK(check_cordes_landis(1.0, 1.3, 1));
    CHECK_FALSE(check_cordes_landis(1.0, 1.5, 1));
    CHECK(check_cordes_landis(2.0, 2.0, 1));
    CHECK(check_cordes_landis(1.0, 1.0, 3));
    // n = 2: threshold 9/7
    CHECK(check_cordes_landis(1.0, 1.25, 2));
    CHECK_FALSE(check_cordes_landis(1.0, 1.3, 2));
    CHECK_THROWS_AS(check_cordes_landis(-1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("admissible exponent window") {
    auto r = admissible_alpha_range(1.0, 1.2, 1);
    CHECK_FALSE(r.empty);
    CHECK(r.min == Catch::Approx(0.75));
    CHECK(r.max == Catch::Approx(1.0));

    auto iso = admissible_alpha_range(1.0, 1.0, 1);
    CHECK(iso.min == Catch::Approx(0.5));  // 4*alpha = Q - 2 at the left endpoint
    CHECK(iso.max == Catch::Approx(1.0));

    // exactly at the threshold ratio the window closes
    const double Q = 4.0;
    auto edge = admissible_alpha_range(1.0, (Q + 3.0) / (Q + 1.0), 1);
    CHECK(edge.empty);

    CHECK(r.lipschitz_choice == Catch::Approx(1.0));
    CHECK(r.exp_barrier_choice == Catch::Approx(25.0 / 8.0 * 1.2));
}

TEST_CASE("sigma quadrature matches the radial integral") {
    // Radial (polar) reduction over the gauge ball: the integral of rho^{-p}
    // over B_1 equals Q |B_1| / (Q - p), so sigma = Q / (Q - p).
    for (double a4 : {1.0, 2.0, 3.0, 3.5}) {
        SingularQuad q = sigma_quadrature(a4);
        REQUIRE(q.converged);
        const double exact = 4.0 / (4.0 - a4);
        CHECK(q.value == Catch::Approx(exact).epsilon(6e-3));
    }
}

TEST_CASE("sigma quadrature diverges at the integrability edge") {
    // At 4 alpha = Q the tail bound never becomes negligible and the partial
    // totals keep growing: doubling the nesting depth doubles the value.
    SingularQuad q8 = sigma_quadrature(4.0, 32, 0.0, 8);
    SingularQuad q16 = sigma_quadrature(4.0, 32, 0.0, 16);
    CHECK_FALSE(q8.converged);
    CHECK_FALSE(q16.converged);
    CHECK(q16.value / q8.value > 1.8);
    CHECK(std::isinf(q8.tail_bound));

    // just inside the window the same probe settles
    SingularQuad c8 = sigma_quadrature(3.0, 32, 0.0, 8);
    SingularQuad c16 = sigma_quadrature(3.0, 32, 0.0, 16);
    CHECK(c16.value / c8.value < 1.05);
}

TEST_CASE("growth constants satisfy their ordering for several ratios") {
    for (double ratio : {1.0, 1.1, 1.3}) {
        const auto ar = admissible_alpha_range(1.0, ratio, 1);
        REQUIRE_FALSE(ar.empty);
        const auto c = compute_growth_constants(1.0, ratio, 1, ar.min);
        INFO("ratio " << ratio << " tau " << c.tau);
        CHECK(c.tau >= 4.0);
        CHECK(2.0 * c.C1 <= c.C3);
        CHECK(c.C3 < 2.0 * c.C2);
        CHECK((c.eta > 0.0 && c.eta < 1.0));
        CHECK((c.mu > 0.0 && c.mu < 1.0));
        CHECK((c.delta > 0.0 && c.delta < 1.0));
        CHECK(c.delta == Catch::Approx(std::min(0.25, 1.0 / (10.0 * ratio))));
    }
    CHECK_THROWS_AS(compute_growth_constants(1.0, 1.3, 1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(compute_growth_constants(1.0, 1.3, 1, 1.0), std::invalid_argument);
}

TEST_CASE("boundary growth factors land in (0,1)") {
    // containment branch with theta = 1: 1 - (2^{-4a} - 3^{-4a})/(1 - 3^{-4a})
    for (double alpha : {0.5, 0.875, 1.5}) {
        auto g = boundary_growth_ball(1.0, alpha);
        const double a4 = 4.0 * alpha;
        const double expect =
            1.0 - (std::pow(2.0, -a4) - std::pow(3.0, -a4)) / (1.0 - std::pow(3.0, -a4));
        CHECK(g.gamma == Catch::Approx(expect));
        CHECK((g.gamma > 0.0 && g.gamma < 1.0));
        CHECK(g.beta_sup > 0.0);
    }
    // monotone in theta: smaller exterior ball => weaker contraction
    CHECK(boundary_growth_ball(0.25, 0.875).gamma > boundary_growth_ball(0.5, 0.875).gamma);
    CHECK(boundary_growth_ball(0.5, 0.875).gamma > boundary_growth_ball(1.0, 0.875).gamma);

    // density branch: gamma = 1 - eta theta0
    StructuralConstants c;
    c.eta = 0.5;
    c.tau = 4.0;
    CHECK(boundary_growth_density(1.0, c).gamma == Catch::Approx(0.5));
    c.eta = 0.01;
    CHECK(boundary_growth_density(1e-6, c).gamma == Catch::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(boundary_growth_ball(0.0, 0.5), std::invalid_argument);
}

TEST_CASE("holder constant uses a midpoint interpolation parameter") {
    auto g = boundary_growth_ball(0.5, 0.875);
    const double beta = 0.5 * g.beta_sup;
    auto h = boundary_holder_constant(g, beta, 0.5, 2.0, 1, 1.0);
    CHECK(h.C > 0.0);
    CHECK(h.eps < 1.0);
    // the convexity combination stays below one, at the midpoint
    const double comb = g.gamma * std::pow(g.tau, beta) + (1.0 - g.gamma) * h.eps_pow_beta;
    CHECK(comb < 1.0);
    CHECK(comb == Catch::Approx(0.5 * (1.0 + g.gamma * std::pow(g.tau, beta))).epsilon(1e-9));
    CHECK_THROWS_AS(boundary_holder_constant(g, g.beta_sup * 1.1, 0.5, 2.0, 1, 1.0),
                    std::invalid_argument);
}

TEST_CASE("lipschitz constants: degenerate data, scaling, positivity") {
    auto zero = lipschitz_constants(0.5, 1.0, 1.2, 1, 0.0, 0.0);
    CHECK(zero.M == 0.0);
    CHECK(zero.C == 0.0);

    // doubling r0 with only source data multiplies M by 4
    auto a = lipschitz_constants(0.5, 1.0, 1.2, 1, 0.0, 2.0);
    auto b = lipschitz_constants(1.0, 1.0, 1.2, 1, 0.0, 2.0);
    CHECK(b.M == Catch::Approx(4.0 * a.M));

    // monotone in both norms
    auto lo = lipschitz_constants(0.5, 1.0, 1.2, 1, 1.0, 1.0);
    auto hi = lipschitz_constants(0.5, 1.0, 1.2, 1, 2.0, 3.0);
    CHECK(hi.M >= lo.M);
    CHECK(hi.C >= lo.C);

    CHECK_THROWS_AS(lipschitz_constants(0.5, 1.0, 1.2, 1, 1.0, 1.0, 0.75),
                    std::invalid_argument);  // not strictly above the threshold
}

TEST_CASE("linear growth constants") {
    auto c = linear_growth_constants(0.5, 1.0, 1.0, 1, 1.0, 0.0);
    // alpha0 = 3/4, 4 alpha0 = 3: C0 = max{(3/(1-1/8)) 27/64, 8/3} = 8/3
    CHECK(c.alpha0 == Catch::Approx(0.75));
    CHECK(c.C0 == Catch::Approx(8.0 / 3.0));
    CHECK(c.alpha1 == Catch::Approx(25.0 / 8.0));
    CHECK(c.C1 >= 2.0 * c.C0);
    CHECK(c.M1 == Catch::Approx(c.C1));  // data = max{1, 0}
    // zero data
    auto z = linear_growth_constants(0.5, 1.0, 1.0, 1, 0.0, 0.0);
    CHECK(z.M0 == 0.0);
    CHECK(z.M1 == 0.0);
}
