#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "heislab/calculus.hpp"
#include "heislab/catalog.hpp"
#include "heislab/constants.hpp"

using namespace heislab;

namespace {

GroupPoint sample_point(Rng& rng, int n, double lo = 0.3, double hi = 2.0) {
    // random point with gauge norm in [lo, hi]
    for (;;) {
        GroupPoint z = GroupPoint::zero(n);
        for (double& v : z.x) v = rng.uniform(-hi, hi);
        z.t = rng.uniform(-hi * hi, hi * hi);
        const double r = rho(z);
        if (r >= lo && r <= hi) return z;
    }
}

// slope of max-error decay over h, h/2, h/4
double richardson_slope(const std::vector<double>& errs) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) s += std::log2(errs[i] / errs[i + 1]);
    return s / (errs.size() - 1);
}

}  // namespace

TEST_CASE("vector fields read off the drift: X_1 t = -2 x_2") {
    ScalarField t = field_t(1);
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        GroupPoint z = sample_point(rng, 1);
        CHECK(apply_vector_field(0, t, z) == Catch::Approx(-2.0 * z.x[1]).margin(1e-14));
        CHECK(apply_vector_field(1, t, z) == Catch::Approx(2.0 * z.x[0]).margin(1e-14));
    }
    CHECK_THROWS_AS(apply_vector_field(2, t, pt(0, 0, 0)), std::invalid_argument);
}

TEST_CASE("gradient of the gauge quartic") {
    for (int n : {1, 2}) {
        ScalarField phi = field_phi(n);
        Rng rng(2 + n);
        for (int i = 0; i < 50; ++i) {
            GroupPoint z = sample_point(rng, n);
            const Vec g = phi.grad(z);
            Vec jx(2 * n);
            symplectic_apply(z.x, jx);
            const double xs = norm_sq(z.x);
            for (int j = 0; j < 2 * n; ++j)
                CHECK(g[j] == Catch::Approx(4.0 * z.x[j] * xs + 4.0 * z.t * jx[j]).margin(1e-12));
        }
    }
}

TEST_CASE("squared gradient identity |grad phi|^2 = 16 |x|^2 phi") {
    for (int n : {1, 2}) {
        ScalarField phi = field_phi(n);
        Rng rng(5 + n);
        for (int i = 0; i < 200; ++i) {
            GroupPoint z = sample_point(rng, n);
            const double lhs = norm_sq(phi.grad(z));
            const double rhs = 16.0 * norm_sq(z.x) * phi.value(z);
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("hessian of the gauge quartic matches its entrywise formula") {
    ScalarField phi = field_phi(1);
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        GroupPoint z = sample_point(rng, 1);
        const Mat m = phi.hess(z);
        Vec jx(2);
        symplectic_apply(z.x, jx);
        const double xs = norm_sq(z.x);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double expect =
                    4.0 * (a == b ? xs : 0.0) + 8.0 * z.x[a] * z.x[b] + 8.0 * jx[a] * jx[b];
                CHECK(at(m, 2, a, b) == Catch::Approx(expect).margin(1e-12));
            }
    }
}

TEST_CASE("finite differences converge to closed forms at second order") {
    ScalarField phi = field_phi(1);
    Rng rng(11);
    std::vector<GroupPoint> pts;
    for (int i = 0; i < 100; ++i) pts.push_back(sample_point(rng, 1));

    std::vector<double> errs;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
        double e = 0.0;
        for (const auto& z : pts)
            for (int j = 0; j < 2; ++j)
                e = std::max(e, std::abs(fd_vector_field(j, phi.value, z, h) - phi.grad(z)[j]));
        errs.push_back(e);
    }
    CHECK(richardson_slope(errs) > 1.7);
}

TEST_CASE("the operator annihilates t for every coefficient field") {
    ScalarField t = field_t(1);
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        CoefficientField A = coeff_constant(random_coeff_matrix_2x2(rng, 1.0, 1.3), 1, 1.0, 1.3);
        GroupPoint z = sample_point(rng, 1);
        CHECK(apply_LA(A, t, z) == 0.0);
        const Mat m = horizontal_hessian(t, z);
        for (double v : m) CHECK(v == 0.0);
    }
}

TEST_CASE("quartic horizontal polynomial contracts to 4|x|^2 tr A + 8 <Ax, x>") {
    ScalarField x4 = field_x_quartic(1);
    Rng rng(17);
    for (int i = 0; i < 50; ++i) {
        CoefficientField A = coeff_constant(random_coeff_matrix_2x2(rng, 0.5, 2.0), 1, 0.5, 2.0);
        GroupPoint z = sample_point(rng, 1);
        const Mat a = A.eval(z);
        const double expect = 4.0 * norm_sq(z.x) * trace(a, 2) + 8.0 * quad_form(a, 2, z.x);
        CHECK(apply_LA(A, x4, z) == Catch::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("sub-Laplacian of psi_alpha and the fundamental exponent") {
    CoefficientField I = coeff_identity(1);
    Rng rng(19);
    for (double alpha : {0.6, 0.875, 1.2}) {
        ScalarField psi = field_psi_alpha(alpha, 1);
        for (int i = 0; i < 40; ++i) {
            GroupPoint z = sample_point(rng, 1);
            const double phi = std::pow(rho(z), 4);
            const double expect =
                4.0 * alpha * (4.0 * alpha - 2.0) * norm_sq(z.x) * std::pow(phi, -alpha - 1.0);
            const double got = apply_LA(I, psi, z);
            const double scale = 4.0 * alpha * (4.0 * alpha + 2.0) * norm_sq(z.x) *
                                 std::pow(phi, -alpha - 1.0) + 1e-300;
            CHECK(std::abs(got - expect) / scale < 1e-12);
        }
    }
    // alpha = (Q-2)/4 kills the sub-Laplacian away from the pole
    ScalarField fund = field_fundamental(1);
    for (int i = 0; i < 100; ++i) {
        GroupPoint z = sample_point(rng, 1, 0.2, 3.0);
        const double got = apply_LA(I, fund, z);
        const Mat h = fund.hess(z);
        double scale = 0.0;
        for (int k = 0; k < 2; ++k) scale += std::abs(at(h, 2, k, k));
        CHECK(std::abs(got) <= 1e-10 * (scale + 1e-300));
    }
    CHECK_THROWS_AS(fund.value(GroupPoint::zero(1)), std::domain_error);
    CHECK_THROWS_AS(fund.hess(GroupPoint::zero(1)), std::domain_error);
}

TEST_CASE("manufactured family: sub-Laplacian closed form and FD cross-check") {
    const double q = 0.75, eps = 1.0;
    const int n = 1;
    ScalarField u = field_u_eps(q, eps, n);
    ScalarField f = field_u_eps_source(q, eps, n);
    CoefficientField I = coeff_identity(n);
    Rng rng(23);

    std::vector<GroupPoint> pts;
    for (int i = 0; i < 100; ++i) {
        GroupPoint z = sample_point(rng, n, 0.2, 2.0);
        z.t = std::abs(z.t);  // stay in the upper half-space
        pts.push_back(z);
    }

    // closed-form trace against the displayed source formula
    for (const auto& z : pts) {
        const double got = apply_LA(I, u, z);
        CHECK(got == Catch::Approx(f.value(z)).epsilon(1e-11).margin(1e-13));
    }

    // FD Hessian trace converges with slope >= 1.7
    std::vector<double> errs;
    for (double h : {1e-2, 5e-3, 2.5e-3}) {
        double e = 0.0;
        for (const auto& z : pts) {
            const Mat m = fd_hessian(u.value, z, h);
            const double fd = at(m, 2, 0, 0) + at(m, 2, 1, 1);
            e = std::max(e, std::abs(fd - f.value(z)));
        }
        errs.push_back(e);
    }
    CHECK(richardson_slope(errs) > 1.7);

    // boundary values and vertical derivative at 0
    for (double x1 : {0.0, 0.5, -1.2}) CHECK(u.value(pt(x1, 0.3, 0.0)) == 0.0);
    CHECK(u.dt(GroupPoint::zero(1)) == Catch::Approx(std::pow(eps, 2.0 * q)));
}

TEST_CASE("coordinate form: block matrix, quadratic identity, one-dimensional kernel") {
    Rng rng(29);
    for (int i = 0; i < 50; ++i) {
        CoefficientField A = coeff_constant(random_coeff_matrix_2x2(rng, 1.0, 1.4), 1, 1.0, 1.4);
        GroupPoint z = sample_point(rng, 1);
        const Mat big = coordinate_matrix(A, z);

        // quadratic form identity <A_coord zeta, zeta> = <A (xi + 2 tau Jx), ...>
        for (int k = 0; k < 20; ++k) {
            Vec zeta{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const double lhs = quad_form(big, 3, zeta);
            Vec jx(2);
            symplectic_apply(z.x, jx);
            Vec w{zeta[0] + 2.0 * zeta[2] * jx[0], zeta[1] + 2.0 * zeta[2] * jx[1]};
            const double rhs = quad_form(A.eval(z), 2, w);
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12).margin(1e-12));
        }

        // kernel vector (-2 Jx, 1)
        Vec jx(2);
        symplectic_apply(z.x, jx);
        Vec ker{-2.0 * jx[0], -2.0 * jx[1], 1.0};
        const Vec img = mat_vec(big, 3, ker);
        for (double v : img) CHECK(std::abs(v) < 1e-12 * (1.0 + norm_sq(z.x)));

        // exactly one vanishing eigenvalue
        const auto ev = sym_eigenvalues(big, 3);
        CHECK(std::abs(ev[0]) < 1e-10);
        CHECK(ev[1] > 0.1);
    }

    // at x = 0 the matrix is block diagonal with e_t in the kernel
    CoefficientField I = coeff_identity(1);
    const Mat m0 = coordinate_matrix(I, pt(0, 0, 0.7));
    CHECK(at(m0, 3, 0, 2) == 0.0);
    CHECK(at(m0, 3, 2, 2) == 0.0);
    CHECK(at(m0, 3, 0, 0) == 1.0);
}

TEST_CASE("commutator defects vanish at the right rate") {
    ScalarField t = field_t(1);
    ScalarField x1 = [] {
        ScalarField f;
        f.n = 1;
        f.name = "x1";
        f.value = [](const GroupPoint& z) { return z.x[0]; };
        return f;
    }();
    Rng rng(31);
    for (int i = 0; i < 20; ++i) {
        GroupPoint z = sample_point(rng, 1);
        // [X_1, X_2] t = 4 and dt t = 1: defect cancels exactly for polynomials
        CHECK(commutator_defect(0, 1, t, z, 1e-3) == Catch::Approx(0.0).margin(1e-9));
        CHECK(commutator_defect(1, 0, t, z, 1e-3) == Catch::Approx(0.0).margin(1e-9));
        CHECK(commutator_defect(0, 1, x1, z, 1e-3) == Catch::Approx(0.0).margin(1e-9));
    }
    // for the quartic the h^2 terms cancel under antisymmetrization: the
    // defect is roundoff-small at any step
    ScalarField phi = field_phi(1);
    std::vector<GroupPoint> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(sample_point(rng, 1));
    for (const auto& z : pts)
        CHECK(std::abs(commutator_defect(0, 1, phi, z, 5e-3)) < 1e-7 * (1.0 + phi.value(z)));

    // a non-polynomial field shows the genuine O(h^2) rate
    ScalarField phi32;
    phi32.n = 1;
    phi32.value = [&](const GroupPoint& z) { return std::pow(phi.value(z), 1.5); };
    std::vector<double> errs;
    for (double h : {2e-2, 1e-2, 5e-3}) {
        double e = 0.0;
        for (const auto& z : pts) e = std::max(e, std::abs(commutator_defect(0, 1, phi32, z, h)));
        errs.push_back(e);
    }
    CHECK(richardson_slope(errs) > 1.5);
}

TEST_CASE("left invariance and dilation covariance of the catalog") {
    ScalarField phi = field_phi(1);
    Rng rng(37);
    for (int i = 0; i < 30; ++i) {
        GroupPoint g = sample_point(rng, 1), z = sample_point(rng, 1);
        ScalarField tr = translated(phi, g);
        // closed forms translate exactly
        const Vec lhs = tr.grad(z);
        const Vec rhs = phi.grad(compose(g, z));
        CHECK(lhs[0] == rhs[0]);
        CHECK(lhs[1] == rhs[1]);

        // FD on the translated value agrees to O(h^2)
        std::vector<double> errs;
        for (double h : {2e-2, 1e-2}) {
            double e = 0.0;
            for (int j = 0; j < 2; ++j)
                e = std::max(e, std::abs(fd_vector_field(j, tr.value, z, h) - rhs[j]));
            errs.push_back(e);
        }
        CHECK(errs[1] < 0.3 * errs[0] + 1e-12);

        // dilation covariance: X_j (u o delta_r) = r (X_j u)(delta_r z)
        const double r = 0.5 + rng.uniform();
        ScalarField dil = dilated(phi, r);
        const Vec gd = dil.grad(z);
        const Vec ge = phi.grad(dilate(r, z));
        for (int j = 0; j < 2; ++j) CHECK(gd[j] == Catch::Approx(r * ge[j]).epsilon(1e-13));
    }
}

TEST_CASE("squared horizontal distance has operator bound 4 n lambda") {
    Rng rng(41);
    ScalarField sq = field_sq_dist_horizontal({0.3, -0.2});
    for (int i = 0; i < 50; ++i) {
        const double lam = 0.5 + rng.uniform(), Lam = lam + rng.uniform();
        CoefficientField A = coeff_constant(random_coeff_matrix_2x2(rng, lam, Lam), 1, lam, Lam);
        GroupPoint z = sample_point(rng, 1);
        CHECK(apply_LA(A, sq, z) >= 4.0 * 1 * lam - 1e-12);
    }
}

TEST_CASE("weighted sup norms, including the unbounded case") {
    ScalarField xsq = field_x_sq(1);
    std::vector<GroupPoint> sample;
    Rng rng(43);
    for (int i = 0; i < 200; ++i) sample.push_back(sample_point(rng, 1));
    CHECK(weighted_sup_norm(xsq, sample, xsq) == Catch::Approx(1.0));

    ScalarField one = field_constant(1.0, 1);
    std::vector<GroupPoint> with_axis = sample;
    with_axis.push_back(pt(0, 0, 0.5));
    CHECK(std::isinf(weighted_sup_norm(one, with_axis, xsq)));
    CHECK_FALSE(std::isinf(weighted_sup_norm(one, sample, xsq)));

    // both zero at a point: no constraint from that point
    CHECK(weighted_sup_norm(xsq, {pt(0, 0, 0.3)}, xsq) == 0.0);
    CHECK_THROWS_AS(weighted_sup_norm(one, {}, xsq), std::invalid_argument);
}

TEST_CASE("counterexample family: plain norm bounded, weighted norm blows up") {
    const double q = 0.05;
    const int n = 1;
    // sample of B_4 in the upper half-space, plus points hugging the vertical axis
    std::vector<GroupPoint> sample;
    for (int i = 0; i < 4000; ++i) {
        GroupPoint z = halton_box_point(i, 1, 2.0);
        z.t = std::abs(z.t);
        if (rho(z) < 4.0 && z.t > 0.0) sample.push_back(z);
    }
    for (int k = 1; k <= 40; ++k) {
        sample.push_back(pt(1e-6, 0.0, std::pow(2.0, -k)));
        sample.push_back(pt(1e-3, 0.0, std::pow(2.0, -k)));
    }

    ScalarField xsq = field_x_sq(1);
    ScalarField one = field_constant(1.0, 1);
    double prev_weighted = 0.0;
    for (int j = 0; j <= 6; ++j) {
        const double eps = std::pow(2.0, -j);
        ScalarField f = field_u_eps_source(q, eps, n);
        ScalarField phiq = [&] {
            ScalarField g;
            g.n = 1;
            g.value = [=](const GroupPoint& z) {
                const double xs = norm_sq(z.x);
                const double s = z.t + eps;
                return std::pow(xs * xs + s * s, q);
            };
            return g;
        }();
        // plain sup norm bounded by 4 q (2q + n + 2) sup phi^q, uniformly in eps
        const double plain = weighted_sup_norm(f, sample, one);
        double sup_phiq = 0.0;
        for (const auto& z : sample) sup_phiq = std::max(sup_phiq, phiq.value(z));
        CHECK(plain <= 4.0 * q * (2.0 * q + n + 2.0) * sup_phiq * (1.0 + 1e-12));

        // weighted norm grows as eps -> 0 (factor 2^{1-2q} per halving)
        const double weighted = weighted_sup_norm(f, sample, xsq);
        if (j > 0) CHECK(weighted > 1.75 * prev_weighted);
        prev_weighted = weighted;
    }
}

TEST_CASE("ellipticity checker accepts generators and rejects spectrum leaks") {
    Rng rng(47);
    std::vector<GroupPoint> sample;
    for (int i = 0; i < 50; ++i) sample.push_back(sample_point(rng, 1));
    CHECK(check_ellipticity(coeff_identity(1), sample));
    CHECK(check_ellipticity(coeff_diagonal(1.0, 1.3), sample));
    CHECK(check_ellipticity(coeff_rotating(1.0, 1.3, 2.0), sample));

    CoefficientField lying = coeff_diagonal(1.0, 1.5);
    lying.Lambda = 1.2;  // declared bound tighter than the actual spectrum
    CHECK_FALSE(check_ellipticity(lying, sample));
}

TEST_CASE("relaxed coefficient condition holds for near-isotropic fields") {
    Rng rng(53);
    std::vector<GroupPoint> sample;
    for (int i = 0; i < 30; ++i) sample.push_back(sample_point(rng, 1));
    // tr A + 4 max_eig <= (Q+4) min_eig <=> 2n Lambda + 4 Lambda < 8 lambda for constants
    CHECK(check_relaxed_landis(coeff_identity(1), sample));
    CHECK(check_relaxed_landis(coeff_rotating(1.0, 1.3, 1.0), sample));
    CHECK_FALSE(check_relaxed_landis(coeff_diagonal(1.0, 1.45), sample));
}
