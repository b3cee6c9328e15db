#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "heislab/domain.hpp"
#include "heislab/group.hpp"

using namespace heislab;

namespace {

GroupPoint random_point(Rng& rng, int n, double scale = 2.0) {
    GroupPoint z = GroupPoint::zero(n);
    for (double& v : z.x) v = rng.uniform(-scale, scale);
    z.t = rng.uniform(-scale * scale, scale * scale);
    return z;
}

}  // namespace

TEST_CASE("composition law on hand-evaluated points") {
    // (1,0|0) o (0,1|0): J(1,0) = (0,1), so the vertical part is 2<(0,1),(0,1)> = 2.
    GroupPoint a = compose(pt(1, 0, 0), pt(0, 1, 0));
    CHECK(a.x[0] == Catch::Approx(1.0));
    CHECK(a.x[1] == Catch::Approx(1.0));
    CHECK(a.t == Catch::Approx(2.0));

    // reversed order flips the sign: non-commutative
    GroupPoint b = compose(pt(0, 1, 0), pt(1, 0, 0));
    CHECK(b.t == Catch::Approx(-2.0));

    // identity element
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        GroupPoint z = random_point(rng, 1);
        GroupPoint w = compose(z, GroupPoint::zero(1));
        CHECK(w.x[0] == z.x[0]);
        CHECK(w.t == z.t);
    }
}

TEST_CASE("composition rejects dimension mismatch") {
    CHECK_THROWS_AS(compose(pt(1, 0, 0), GroupPoint::zero(2)), std::invalid_argument);
    CHECK_THROWS_AS(dist(pt(1, 0, 0), GroupPoint::zero(2)), std::invalid_argument);
}

TEST_CASE("inverse composes to the identity") {
    CHECK(inverse(GroupPoint({1, 2}, 3)).x[0] == -1.0);
    CHECK(inverse(GroupPoint({1, 2}, 3)).t == -3.0);
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + (i % 3);
        GroupPoint z = random_point(rng, n);
        GroupPoint e = compose(inverse(z), z);
        for (double v : e.x) CHECK(std::abs(v) < 1e-12);
        CHECK(std::abs(e.t) < 1e-12 * (1.0 + std::abs(z.t)));
    }
}

TEST_CASE("associativity on random triples") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const int n = 1 + (i % 2);
        GroupPoint a = random_point(rng, n), b = random_point(rng, n), c = random_point(rng, n);
        GroupPoint lhs = compose(compose(a, b), c);
        GroupPoint rhs = compose(a, compose(b, c));
        for (int k = 0; k < 2 * n; ++k)
            CHECK(lhs.x[k] == Catch::Approx(rhs.x[k]).margin(1e-12));
        CHECK(lhs.t == Catch::Approx(rhs.t).epsilon(1e-12).margin(1e-12));
    }
}

TEST_CASE("dilations scale the gauge with degree one") {
    CHECK_THROWS_AS(dilate(0.0, pt(1, 0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(dilate(-2.0, pt(1, 0, 0)), std::invalid_argument);

    GroupPoint z = dilate(2.0, pt(1, 0, 1));
    CHECK(z.x[0] == Catch::Approx(2.0));
    CHECK(z.t == Catch::Approx(4.0));

    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        GroupPoint w = random_point(rng, 1);
        if (rho(w) < 1e-6) continue;
        CHECK(rho(dilate(3.0, w)) / rho(w) == Catch::Approx(3.0).epsilon(1e-12));
        // semigroup property
        GroupPoint a = dilate(2.0, dilate(0.7, w));
        GroupPoint b = dilate(1.4, w);
        CHECK(a.x[1] == Catch::Approx(b.x[1]).margin(1e-14));
        CHECK(a.t == Catch::Approx(b.t).margin(1e-13));
        // dilations are automorphisms: delta_r(z o w) = delta_r z o delta_r w
        GroupPoint u = random_point(rng, 1);
        GroupPoint lhs = dilate(2.0, compose(w, u));
        GroupPoint rhs = compose(dilate(2.0, w), dilate(2.0, u));
        CHECK(lhs.t == Catch::Approx(rhs.t).margin(1e-12));
    }
}

TEST_CASE("gauge norm and metric basics") {
    CHECK(rho(pt(1, 0, 0)) == Catch::Approx(1.0));
    CHECK(rho(pt(0, 0, 4)) == Catch::Approx(2.0));
    // vertical axis: d((0,0),(0,t)) = |t|^{1/2}
    for (double t : {0.25, 1.0, 9.0})
        CHECK(dist(GroupPoint::zero(1), pt(0, 0, t)) == Catch::Approx(std::sqrt(t)));
    CHECK(dist(pt(1, 2, 3), pt(1, 2, 3)) == 0.0);
}

TEST_CASE("metric is left-invariant and dilation-homogeneous") {
    Rng rng(19);
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + (i % 2);
        GroupPoint g = random_point(rng, n), z = random_point(rng, n), w = random_point(rng, n);
        const double d0 = dist(z, w);
        const double d1 = dist(compose(g, z), compose(g, w));
        CHECK(d1 == Catch::Approx(d0).epsilon(1e-12).margin(1e-12));
        const double r = 0.5 + rng.uniform();
        CHECK(dist(dilate(r, z), dilate(r, w)) == Catch::Approx(r * d0).epsilon(1e-11).margin(1e-12));
    }
}

TEST_CASE("unit ball volume: quadrature is stable and matches the radial integral") {
    // Reducing the indicator integral over {|x|^4 + t^2 < 1} to polar
    // coordinates in x gives 4*pi*int_0^1 s sqrt(1-s^4) ds = pi^2/2 for n=1.
    const double exact = M_PI * M_PI / 2.0;
    const double v160 = detail::unit_ball_volume_quadrature(1, 160);
    const double v320 = detail::unit_ball_volume_quadrature(1, 320);
    CHECK(std::abs(v320 - exact) / exact < 5e-3);
    // stable to ~3 digits under refinement
    CHECK(std::abs(v320 - v160) / exact < 5e-3);

    CHECK(ball_volume(2.0, 1) / ball_volume(1.0, 1) == Catch::Approx(std::pow(2.0, 4)));
    CHECK(ball_volume(2.0, 2, 32) / ball_volume(1.0, 2, 32) == Catch::Approx(std::pow(2.0, 6)));
    CHECK(ball_volume(0.5, 1) < ball_volume(0.75, 1));
    CHECK(ball_volume(0.75, 1) < ball_volume(1.5, 1));
    CHECK_THROWS_AS(ball_volume(0.0, 1), std::invalid_argument);
}

TEST_CASE("grid-count volume of B_r converges to r^Q vol(B_1) at first order") {
    const double exact = M_PI * M_PI / 2.0;
    const double r = 1.3;
    auto counted = [&](int m) {
        // midpoint count over the bounding box of B_r
        const double hx = 2.0 * r / m, ht = 2.0 * r * r / m;
        double cnt = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int k = 0; k < m; ++k) {
                    const double x1 = -r + (i + 0.5) * hx, x2 = -r + (j + 0.5) * hx,
                                 t = -r * r + (k + 0.5) * ht;
                    const double xs = x1 * x1 + x2 * x2;
                    if (xs * xs + t * t < std::pow(r, 4)) cnt += 1.0;
                }
        return cnt * hx * hx * ht;
    };
    const double target = std::pow(r, 4) * exact;
    const double e1 = std::abs(counted(40) - target);
    const double e2 = std::abs(counted(80) - target);
    const double e3 = std::abs(counted(160) - target);
    // slope of log2(e) vs level should be around -1 (first-order indicator quadrature)
    const double slope = 0.5 * (std::log2(e1 / e2) + std::log2(e2 / e3));
    CHECK(slope > 0.6);
}

TEST_CASE("symplectic structure") {
    Symplectic J(2);
    const auto m = J.matrix();
    // antisymmetric and J^2 = -I
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(m[i * 4 + j] == -m[j * 4 + i]);
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += m[i * 4 + k] * m[k * 4 + j];
            CHECK(s == Catch::Approx(i == j ? -1.0 : 0.0).margin(1e-15));
        }
    Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> x(4);
        for (double& v : x) v = rng.uniform(-1, 1);
        CHECK(norm_sq(J.apply(x)) == Catch::Approx(norm_sq(x)));
    }
    CHECK_THROWS_AS(Symplectic(0), std::invalid_argument);
}

TEST_CASE("domain membership and boundary classification") {
    Domain ball = make_gauge_ball(GroupPoint::zero(1), 1.0);
    CHECK(ball.contains(pt(0.3, 0.2, 0.1)));
    CHECK_FALSE(ball.contains(pt(1.2, 0, 0)));
    auto c = ball.classify(dilate(0.5, pt(1, 0, 0)));
    CHECK(c.region == Region::Interior);

    // gauge sphere: poles (x = center_x) are characteristic
    auto pole = ball.classify(pt(0, 0, 1), 1e-9);
    CHECK(pole.region == Region::Boundary);
    CHECK(pole.characteristic == CharFlag::Yes);
    auto eq = ball.classify(pt(1, 0, 0), 1e-9);
    CHECK(eq.region == Region::Boundary);
    CHECK(eq.characteristic == CharFlag::No);

    Domain half = make_half_space(1);
    auto origin = half.classify(GroupPoint::zero(1), 1e-9);
    CHECK(origin.region == Region::Boundary);
    CHECK(origin.characteristic == CharFlag::Yes);
    auto off = half.classify(pt(0.5, 0, 0), 1e-9);
    CHECK(off.region == Region::Boundary);
    CHECK(off.characteristic == CharFlag::No);
    CHECK(half.classify(pt(0, 0, 0.5)).region == Region::Interior);
    CHECK(half.classify(pt(0, 0, -0.5)).region == Region::Exterior);

    Domain par = make_paraboloid(2.0, 1);
    CHECK(par.contains(pt(0.1, 0.1, 1.0)));
    CHECK_FALSE(par.contains(pt(1.0, 0.0, 1.0)));
    CHECK(par.classify(GroupPoint::zero(1), 1e-9).characteristic == CharFlag::Yes);

    Domain rect = make_rectangle(1.0, 0.1, 1);
    CHECK(rect.contains(pt(0.5, 0, 0.05)));
    CHECK_FALSE(rect.contains(pt(0.5, 0, 0.2)));
    CHECK(rect.classify(pt(0, 0, 0), 1e-9).characteristic == CharFlag::Yes);
    CHECK(rect.classify(pt(0.5, 0, 0), 1e-9).characteristic == CharFlag::No);
    CHECK_THROWS_AS(make_rectangle(1.0, 1.5, 1), std::invalid_argument);

    Domain inter = make_intersection({half, ball});
    CHECK(inter.contains(pt(0.2, 0.1, 0.3)));
    CHECK_FALSE(inter.contains(pt(0.2, 0.1, -0.3)));
    CHECK(inter.classify(pt(0.4, 0, 0), 1e-9).characteristic == CharFlag::Unknown);

    // p0 override: characteristic flag from the touching-ball weight
    GroupPoint p0 = pt(0, 0, -1);
    auto with_p0 = half.classify(GroupPoint::zero(1), 1e-9, &p0);
    CHECK(with_p0.characteristic == CharFlag::Yes);
    GroupPoint p1 = pt(0.5, 0, -1);
    CHECK(half.classify(GroupPoint::zero(1), 1e-9, &p1).characteristic == CharFlag::No);
}

TEST_CASE("half-space admits the vertical touching ball at the origin") {
    for (double r0 : {0.5, 1.0, 2.0}) {
        GroupPoint p0 = pt(0, 0, -r0 * r0);
        CHECK(dist(GroupPoint::zero(1), p0) == Catch::Approx(r0));
        for (int i = 0; i < 2000; ++i) {
            GroupPoint s = halton_box_point(i, 1);
            if (rho(s) >= 1.0) continue;
            GroupPoint z = compose(p0, dilate(r0, s));
            CHECK(z.t < 0.0);
        }
    }
}

TEST_CASE("exterior ball of a truncated cone") {
    // witness on the negative vertical axis: the ball slides down the axis
    ConeSpec cone{GroupPoint::zero(1), pt(0, 0, -1), 0.5};
    const double span = 0.5 + 1.0;
    CHECK_THROWS_AS(exterior_ball_for_cone(cone, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(exterior_ball_for_cone(cone, 0.0), std::invalid_argument);

    auto eb = exterior_ball_for_cone(cone, span);
    CHECK(eb.radius == Catch::Approx(0.5 / span * span));
    auto eb2 = exterior_ball_for_cone(cone, 0.75);
    CHECK(eb2.center.x[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(eb2.center.x[1] == Catch::Approx(0.0).margin(1e-15));
    CHECK(eb2.center.t < 0.0);
    CHECK(eb2.radius == Catch::Approx(0.75 * 0.5 / span));

    // triangle-inequality containment certificate on sampled boundary points
    for (double r : {0.3, 0.75, 1.2}) {
        auto b = exterior_ball_for_cone(cone, r);
        CHECK(dist(GroupPoint::zero(1), b.center) + b.radius <= r * (1.0 + 1e-12));
        CHECK(check_ball_in_ball(b, GroupPoint::zero(1), r, 10000));
    }
}

TEST_CASE("domain serialization is a readable flat schema") {
    Domain ball = make_gauge_ball(pt(0.5, -1.0, 2.0), 1.25);
    const std::string s = domain_to_config(ball);
    CHECK(s.find("kind = gauge_ball") != std::string::npos);
    CHECK(s.find("radius = 1.25") != std::string::npos);
    Domain box = make_box({-1, -1, 0}, {1, 1, 0.5});
    CHECK(domain_to_config(box).find("kind = box") != std::string::npos);
}
