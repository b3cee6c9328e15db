#pragma once

// Structural constants: the Cordes-Landis ratio test, the admissible exponent
// window for the subsolution family psi_alpha, the growth-machinery constants
// (tau, C1, C2, C3, eta, mu), the rectangle aspect delta, boundary growth
// factors gamma with their Holder windows, and the explicit barrier constants
// for the Lipschitz and linear-growth estimates.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heislab/linalg.hpp"
#include "heislab/quadrature.hpp"

namespace heislab {

// Lambda/lambda < (Q+3)/(Q+1)
inline bool check_cordes_landis(double lambda, double Lambda, int n) {
    if (!(0.0 < lambda && lambda <= Lambda))
        throw std::invalid_argument("check_cordes_landis: need 0 < lambda <= Lambda");
    const double Q = homogeneous_dimension(n);
    return Lambda / lambda < (Q + 3.0) / (Q + 1.0);
}

struct AlphaRange {
    bool empty = true;
    double min = 0.0;       // ((Q+1) Lambda/lambda - 3) / 4, admissible inclusively
    double max = 0.0;       // Q/4, exclusive (integrability of psi_alpha)
    double strict_min = 0.0;       // same value as min; derivative estimates need strict >
    double lipschitz_choice = 0.0; // ((Q+1) Lambda/lambda - 2) / 4
    double exp_barrier_choice = 0.0;  // (25 n / 8) Lambda/lambda
};

inline AlphaRange admissible_alpha_range(double lambda, double Lambda, int n) {
    const double Q = homogeneous_dimension(n);
    const double ratio = Lambda / lambda;
    AlphaRange r;
    r.min = ((Q + 1.0) * ratio - 3.0) / 4.0;
    r.max = Q / 4.0;
    r.strict_min = r.min;
    r.lipschitz_choice = ((Q + 1.0) * ratio - 2.0) / 4.0;
    r.exp_barrier_choice = 25.0 * n / 8.0 * ratio;
    r.empty = !(check_cordes_landis(lambda, Lambda, n) && r.min < r.max);
    return r;
}

struct StructuralConstants {
    int n = 1;
    double Q = 4.0;
    double lambda = 1.0, Lambda = 1.0;
    double alpha = 0.5;
    double sigma = 0.0;  // (1/|B_1|) int_{B_1} rho^{-4 alpha}
    double tau = 4.0;
    double C1 = 0.0, C2 = 0.0, C3 = 0.0;
    double eta = 0.0;    // C3 / (2 C2)
    double mu = 0.0;     // (1 - eta/2) / (1 - eta/4)
    double delta = 0.0;  // min{1/(2n+2), lambda/(10 Lambda)}
};

// tau is searched on the half-integer grid {4, 4.5, 5, ...}: smallest value
// satisfying (tau-1)^{-4a} <= 2^{-4a-1} and sigma (tau+1)^{Q-4a} > 2^{-4a-1}.
inline StructuralConstants compute_growth_constants(double lambda, double Lambda, int n,
                                                    double alpha) {
    if (n != 1)
        throw std::invalid_argument("compute_growth_constants: sigma quadrature covers n = 1");
    const AlphaRange ar = admissible_alpha_range(lambda, Lambda, n);
    if (ar.empty || alpha < ar.min - 1e-12 || alpha >= ar.max)
        throw std::invalid_argument("compute_growth_constants: alpha outside the admissible range");
    StructuralConstants c;
    c.n = n;
    c.Q = homogeneous_dimension(n);
    c.lambda = lambda;
    c.Lambda = Lambda;
    c.alpha = alpha;
    const double a4 = 4.0 * alpha;
    c.sigma = sigma_value(a4);
    const double half_c3 = std::pow(2.0, -a4 - 1.0);
    bool found = false;
    for (double tau = 4.0; tau <= 1e4; tau += 0.5) {
        if (std::pow(tau - 1.0, -a4) <= half_c3 &&
            c.sigma * std::pow(tau + 1.0, c.Q - a4) > half_c3) {
            c.tau = tau;
            found = true;
            break;
        }
    }
    if (!found)
        throw std::runtime_error(
            "constants-search-failure: no feasible tau <= 1e4 (quadrature problem)");
    c.C1 = std::pow(c.tau - 1.0, -a4);
    c.C2 = c.sigma * std::pow(c.tau + 1.0, c.Q - a4);
    c.C3 = std::pow(2.0, -a4);
    c.eta = c.C3 / (2.0 * c.C2);
    c.mu = (1.0 - c.eta / 2.0) / (1.0 - c.eta / 4.0);
    c.delta = std::min(1.0 / (2.0 * n + 2.0), lambda / (10.0 * Lambda));
    return c;
}

inline double rectangle_delta(double lambda, double Lambda, int n) {
    return std::min(1.0 / (2.0 * n + 2.0), lambda / (10.0 * Lambda));
}

// ---- boundary growth factor ----

struct BoundaryGrowth {
    double gamma = 0.0;     // contraction factor, in (0,1)
    double tau = 4.0;       // scale ratio the factor is quoted at
    double beta_sup = 0.0;  // admissible Holder window is (0, beta_sup)
};

// Exterior ball containment with relative radius theta: works for any
// ellipticity ratio, any alpha >= strict threshold, and any tau >= 4.
inline BoundaryGrowth boundary_growth_ball(double theta, double alpha, double tau = 4.0) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("boundary_growth_ball: theta in (0,1]");
    BoundaryGrowth g;
    const double a4 = 4.0 * alpha;
    g.gamma = 1.0 - (std::pow(2.0, -a4) - std::pow(3.0, -a4)) /
                        (std::pow(theta, -a4) - std::pow(3.0, -a4));
    g.tau = tau;
    g.beta_sup = std::min(std::log(1.0 / g.gamma) / std::log(tau), 1.0);
    return g;
}

// Positive exterior density theta0 under the ratio restriction: factor
// 1 - eta * theta0 at the scale ratio tau of the growth constants.
inline BoundaryGrowth boundary_growth_density(double theta0, const StructuralConstants& c) {
    if (!(theta0 > 0.0 && theta0 <= 1.0))
        throw std::invalid_argument("boundary_growth_density: theta0 in (0,1]");
    BoundaryGrowth g;
    g.gamma = 1.0 - c.eta * theta0;
    g.tau = c.tau;
    g.beta_sup = std::min(std::log(1.0 / g.gamma) / std::log(c.tau), 1.0);
    return g;
}

// Boundary Holder constant for exponent beta < beta_sup. The interpolation
// parameter is placed so that gamma tau^beta + (1-gamma) eps^beta lands at the
// midpoint (1 + gamma tau^beta)/2 < 1.
struct HolderConstant {
    double beta = 0.0;
    double eps = 0.0;           // may underflow for very small beta; eps_pow_beta is exact
    double eps_pow_beta = 0.0;  // (1 - gamma tau^beta) / (2 (1 - gamma)), capped below 1
    double C = 0.0;
};

inline HolderConstant boundary_holder_constant(const BoundaryGrowth& g, double beta, double r0,
                                               double R0, int n, double lambda) {
    if (!(beta > 0.0 && beta < g.beta_sup))
        throw std::invalid_argument("boundary_holder_constant: beta outside (0, beta_sup)");
    HolderConstant h;
    h.beta = beta;
    const double gt = g.gamma * std::pow(g.tau, beta);
    h.eps_pow_beta = std::min((1.0 - gt) / (2.0 * (1.0 - g.gamma)), 1.0 - 1e-12);
    h.eps = std::pow(h.eps_pow_beta, 1.0 / beta);
    const double denom = 1.0 - gt - (1.0 - g.gamma) * h.eps_pow_beta;
    h.C = std::max(g.tau * g.tau * std::pow(r0, 2.0 - beta) / denom,
                   R0 * R0 / std::pow(r0, beta)) /
          (4.0 * n * lambda);
    return h;
}

// ---- boundary Lipschitz constants ----
//
// M = max{ sup u^+, (2^{4a}-1) r0^2 ||f^-||_w / (lambda a (4a + 3 - (Q+1) L/l)) }
// C = a 2^{4a+3} / (1 - 2^{-4a}) * M / r0

struct LipschitzConstants {
    double alpha = 0.0;
    double M = 0.0;
    double C = 0.0;
};

inline LipschitzConstants lipschitz_constants(double r0, double lambda, double Lambda, int n,
                                              double sup_u_plus, double weighted_f_norm,
                                              std::optional<double> alpha_opt = {}) {
    const double Q = homogeneous_dimension(n);
    const double threshold = ((Q + 1.0) * Lambda / lambda - 3.0) / 4.0;
    const double alpha = alpha_opt.value_or(((Q + 1.0) * Lambda / lambda - 2.0) / 4.0);
    if (!(alpha > threshold))
        throw std::invalid_argument("lipschitz_constants: alpha must exceed the strict threshold");
    const double a4 = 4.0 * alpha;
    const double margin = a4 + 3.0 - (Q + 1.0) * Lambda / lambda;
    LipschitzConstants out;
    out.alpha = alpha;
    out.M = std::max(sup_u_plus,
                     (std::pow(2.0, a4) - 1.0) * r0 * r0 * weighted_f_norm / (lambda * alpha * margin));
    out.C = alpha * std::pow(2.0, a4 + 3.0) / (1.0 - std::pow(2.0, -a4)) * out.M / r0;
    return out;
}

// ---- linear-growth constants (half-space) ----
//
// C0 = max{ (4a0/(1 - 2^{-4a0})) (27/64), 2^{4a0}/3 } with a0 = ((Q+1)L/l - 2)/4;
// M0 = C0 max{ sup u^+, r0^4 ||f^-||_{|x|^2} / lambda }.
// C1 = max{ 2 C0, (11^2 (11^2+10^2)/10^4) a1 C0 / (1 - e^{-a1/100}),
//           e^{61 a1/50} / ((Q-2) L/l) } with a1 = (25 n / 8) L/l;
// M1 = C1 max{ sup u^+, r0^4 ||f^-||_{|x|^2} / lambda }.

struct LinearGrowthConstants {
    double alpha0 = 0.0, alpha1 = 0.0;
    double C0 = 0.0, C1 = 0.0;
    double M0 = 0.0, M1 = 0.0;
};

inline LinearGrowthConstants linear_growth_constants(double r0, double lambda, double Lambda,
                                                     int n, double sup_u_plus,
                                                     double weighted_f_norm) {
    const double Q = homogeneous_dimension(n);
    const double ratio = Lambda / lambda;
    LinearGrowthConstants c;
    c.alpha0 = ((Q + 1.0) * ratio - 2.0) / 4.0;
    c.alpha1 = 25.0 * n / 8.0 * ratio;
    const double a40 = 4.0 * c.alpha0;
    c.C0 = std::max(a40 / (1.0 - std::pow(2.0, -a40)) * 27.0 / 64.0, std::pow(2.0, a40) / 3.0);
    const double geom = 121.0 * (121.0 + 100.0) / 1e4;
    c.C1 = std::max({2.0 * c.C0,
                     geom * c.alpha1 * c.C0 / (1.0 - std::exp(-c.alpha1 / 100.0)),
                     std::exp(61.0 * c.alpha1 / 50.0) / ((Q - 2.0) * ratio)});
    const double data = std::max(sup_u_plus, std::pow(r0, 4) * weighted_f_norm / lambda);
    c.M0 = c.C0 * data;
    c.M1 = c.C1 * data;
    return c;
}

// Relaxed Landis-type coefficient condition:
// sup_z (tr A(z) + 4 max_eig A(z)) / min_eig A(z) < Q + 4.
// Checked over a sample; no estimate in this laboratory is driven by it.
template <typename CoeffField>
inline bool check_relaxed_landis(const CoeffField& A, const std::vector<GroupPoint>& sample) {
    const double Q = homogeneous_dimension(A.n);
    for (const auto& z : sample) {
        const auto m = A.eval(z);
        const auto ev = sym_eigenvalues(m, 2 * A.n);
        double tr = 0.0;
        for (int i = 0; i < 2 * A.n; ++i) tr += m[i * 2 * A.n + i];
        if ((tr + 4.0 * ev.back()) / ev.front() >= Q + 4.0) return false;
    }
    return true;
}

}  // namespace heislab
