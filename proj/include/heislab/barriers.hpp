#pragma once

// Barrier catalog: the named barriers assembled from the closed-form fields,
// the singular potential U_E, and pointwise subsolution/supersolution
// verification over deterministic samples.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heislab/catalog.hpp"
#include "heislab/constants.hpp"
#include "heislab/quadrature.hpp"

namespace heislab {

// U_E(z) = int_E d(z, zeta)^{-4 alpha} d zeta for E = B_r(center), n = 1.
inline double potential_UE(const GroupPoint& center, double r, double alpha, const GroupPoint& z,
                           int m = 32, double tail_frac = 1e-3) {
    if (z.n() != 1 || center.n() != 1)
        throw std::invalid_argument("potential_UE: n = 1 only");
    const double a4 = 4.0 * alpha;
    if (a4 >= homogeneous_dimension(1))
        throw std::invalid_argument("potential_UE: needs 4 alpha < Q");
    const double cx1 = center.x[0], cx2 = center.x[1], ct = center.t;
    auto member = [&](double x1, double x2, double t) {
        const std::array<double, 2> cx{cx1, cx2};
        const std::array<double, 2> zx{x1, x2};
        return dist_raw(cx, ct, zx, t) < r;
    };
    const double wx = std::max(std::abs(center.x[0] - z.x[0]), std::abs(center.x[1] - z.x[1])) + r;
    const double wt = std::abs(center.t - z.t) + r * r +
                      2.0 * r * std::sqrt(norm_sq(center.x));
    const double W = std::max({wx, std::sqrt(wt), 1e-3 * r});
    const double clearance = std::max(0.0, dist(z, center) - r);
    SingularQuad q = integrate_gauge_power(z, a4, member, W, m, tail_frac, 60, clearance);
    if (!q.converged)
        throw std::runtime_error("potential_UE: quadrature did not converge");
    return q.value;
}

// Evaluable (quadrature-backed) potential field; no closed derivatives.
inline ScalarField field_potential_UE(GroupPoint center, double r, double alpha, int m = 32) {
    ScalarField f;
    f.n = 1;
    f.name = "potential_ue";
    f.value = [=](const GroupPoint& z) { return potential_UE(center, r, alpha, z, m); };
    return f;
}

struct BarrierSpec {
    std::string name;  // psi_alpha | potential_ue | growth_w | lipschitz_w | linear_growth_w |
                       // exponential_w | phi1 | phi2 | rectangle_beta
    int n = 1;
    GroupPoint pole = GroupPoint::zero(1);  // pole of psi_alpha / ball center p0 or z0
    Vec x0;                                 // horizontal center of the exponential barrier
    double alpha = 0.0;
    double r0 = 0.0, r = 0.0;
    double delta = 0.0;
    double M = 0.0, F = 0.0, m_coef = 0.0;
    double lambda = 1.0, Lambda = 1.0;
    double sup_u = 0.0;
};

// w = M (r0^{-4a} - psi_a(p0^{-1} o z)) / (r0^{-4a} - (2 r0)^{-4a})
inline ScalarField barrier_lipschitz_w(const GroupPoint& p0, double r0, double alpha, double M) {
    if (!(r0 > 0.0 && alpha > 0.0))
        throw std::invalid_argument("lipschitz_w: need r0 > 0 and alpha > 0");
    const double a4 = 4.0 * alpha;
    const double denom = std::pow(r0, -a4) - std::pow(2.0 * r0, -a4);
    ScalarField psi = translated(field_psi_alpha(alpha, p0.n()), inverse(p0));
    ScalarField f = field_sum({{M * std::pow(r0, -a4) / denom, field_constant(1.0, p0.n())},
                               {-M / denom, psi}});
    f.name = "lipschitz_w";
    return f;
}

inline ScalarField make_barrier(const BarrierSpec& s) {
    if (s.name == "psi_alpha") {
        if (!(s.alpha > 0.0)) throw std::invalid_argument("psi_alpha: alpha > 0 required");
        ScalarField f = translated(field_psi_alpha(s.alpha, s.n), inverse(s.pole));
        f.name = "psi_alpha";
        return f;
    }
    if (s.name == "potential_ue") {
        if (!(s.r > 0.0)) throw std::invalid_argument("potential_ue: r > 0 required");
        return field_potential_UE(s.pole, s.r, s.alpha);
    }
    if (s.name == "growth_w") {
        // w = sup_u [1 - r^{4a} / (C2 |B_r|) (U_E - C1 r^{-4a} |E|)], E = B_r(pole)
        const StructuralConstants c = compute_growth_constants(s.lambda, s.Lambda, s.n, s.alpha);
        const double a4 = 4.0 * s.alpha;
        const double volE = ball_volume(s.r, s.n);
        ScalarField ue = field_potential_UE(s.pole, s.r, s.alpha);
        const double sup_u = s.sup_u;
        const double r = s.r, C1 = c.C1, C2 = c.C2;
        ScalarField f;
        f.n = s.n;
        f.name = "growth_w";
        f.value = [=](const GroupPoint& z) {
            return sup_u * (1.0 - std::pow(r, a4) / (C2 * volE) *
                                      (ue.value(z) - C1 * std::pow(r, -a4) * volE));
        };
        return f;
    }
    if (s.name == "lipschitz_w") return barrier_lipschitz_w(s.pole, s.r0, s.alpha, s.M);
    if (s.name == "linear_growth_w") {
        // one-point barrier at p0 = (0, -r^2), r = (4/3) r0, fixed alpha
        const double Q = homogeneous_dimension(s.n);
        const double alpha = ((Q + 1.0) * s.Lambda / s.lambda - 2.0) / 4.0;
        const double r = 4.0 / 3.0 * s.r0;
        const double a4 = 4.0 * alpha;
        const double M = std::max(s.sup_u, (std::pow(2.0, a4) - 1.0) * 4.0 * std::pow(r, 4) *
                                               s.F / (a4 * s.lambda));
        GroupPoint p0 = GroupPoint::zero(s.n);
        p0.t = -r * r;
        ScalarField f = barrier_lipschitz_w(p0, r, alpha, M);
        f.name = "linear_growth_w";
        return f;
    }
    if (s.name == "exponential_w") return field_exp_barrier(s.x0, s.r0, s.alpha, s.M);
    if (s.name == "phi1") return field_phi1(s.r, s.delta, s.n);
    if (s.name == "phi2") return field_phi2(s.r, s.delta, s.n);
    if (s.name == "rectangle_beta") {
        ScalarField f = field_sum({{s.m_coef, field_phi1(s.r, s.delta, s.n)},
                                   {s.F / (8.0 * s.lambda), field_phi2(s.r, s.delta, s.n)}});
        f.name = "rectangle_beta";
        return f;
    }
    throw std::invalid_argument(
        "unknown barrier '" + s.name +
        "'; valid names: psi_alpha, potential_ue, growth_w, lipschitz_w, linear_growth_w, "
        "exponential_w, phi1, phi2, rectangle_beta");
}

// ---- pointwise verification ----

struct SubsolutionReport {
    double min_residual = 0.0;         // min of L_A w - bound over the sample
    double min_scaled_residual = 0.0;  // residual / local magnitude scale
    GroupPoint argmin;
    int violations = 0;  // points with scaled residual below -tol
    bool pass = false;
};

// Checks L_A barrier >= bound on the sample. The tolerance is relative to the
// local magnitude of the trace terms (closed forms carry roundoff at the
// scale of the summands, not of the cancellation).
inline SubsolutionReport verify_subsolution(const CoefficientField& A, const ScalarField& barrier,
                                            const std::vector<GroupPoint>& sample,
                                            const ScalarField& bound, double tol = 1e-10) {
    if (sample.empty()) throw std::invalid_argument("verify_subsolution: empty sample");
    SubsolutionReport rep;
    rep.min_residual = std::numeric_limits<double>::infinity();
    rep.min_scaled_residual = std::numeric_limits<double>::infinity();
    const int d = 2 * A.n;
    for (const auto& z : sample) {
        const Mat a = A.eval(z);
        const Mat h = horizontal_hessian(barrier, z);
        double lau = 0.0, mag = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double term = at(a, d, i, j) * at(h, d, j, i);
                lau += term;
                mag += std::abs(term);
            }
        const double b = bound.value(z);
        const double res = lau - b;
        const double scale = mag + std::abs(b) + 1e-300;
        const double scaled = res / scale;
        if (scaled < rep.min_scaled_residual) {
            rep.min_scaled_residual = scaled;
            rep.min_residual = res;
            rep.argmin = z;
        }
        if (scaled < -tol) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    return rep;
}

}  // namespace heislab
