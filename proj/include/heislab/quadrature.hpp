#pragma once

// Quadrature of d(pole, .)^{-p} over bounded sets. The pole neighborhood is
// resolved by nested gauge boxes (x-width halving, t-width quartering) whose
// inner exclusion regions are cell-aligned, so no midpoint cell straddles a
// nesting interface. The innermost neighborhood is never integrated; it is
// bounded analytically by dyadic vol-scaling and the nesting deepens until
// that bound is below a fraction of the running total. The bound is finite
// exactly when p < Q, which makes the divergence at p = Q observable.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>

#include "heislab/group.hpp"

namespace heislab {

struct SingularQuad {
    double value = 0.0;        // quadrature over the resolved region
    double tail_bound = 0.0;   // analytic bound on the neglected pole neighborhood
    int levels = 0;
    bool converged = false;
};

namespace detail {

// Dyadic-shell bound for int_{rho < eps} rho^{-p}: sum over shells of
// (eps 2^{-j-1})^{-p} |B_{eps 2^{-j}}| = |B_1| 2^p eps^{Q-p} / (1 - 2^{p-Q}).
inline double pole_tail_bound(double eps, double p, int n) {
    const double Q = homogeneous_dimension(n);
    if (p >= Q) return std::numeric_limits<double>::infinity();
    return unit_ball_volume(n) * std::pow(2.0, p) * std::pow(eps, Q - p) /
           (1.0 - std::pow(2.0, p - Q));
}

}  // namespace detail

// Integral of d(pole, zeta)^{-p} * indicator(zeta) over the pole-centered
// gauge box of half-widths (W, W, W^2). n = 1 kernels (three coordinates).
// clearance: gauge distance from the pole below which the indicator is known
// to vanish (e.g. the pole lies outside the integration set); once the
// excluded neighborhood fits inside it, the tail is exactly zero.
inline SingularQuad integrate_gauge_power(
    const GroupPoint& pole, double p, const std::function<bool(double, double, double)>& member,
    double W, int m = 32, double tail_frac = 1e-3, int max_levels = 60, double clearance = 0.0) {
    if (pole.n() != 1) throw std::invalid_argument("integrate_gauge_power: n = 1 only");
    if (m % 4 != 0) throw std::invalid_argument("integrate_gauge_power: m must be divisible by 4");
    const double px1 = pole.x[0], px2 = pole.x[1], pt_ = pole.t;
    const std::array<double, 2> px{px1, px2};

    SingularQuad out;
    double wl = W;
    for (int level = 0; level < max_levels; ++level) {
        const double hx = 2.0 * wl / m;
        const double ht = 2.0 * wl * wl / m;
        const double cell = hx * hx * ht;
        // inner exclusion: central m/2 cells in x, central m/4 cells in t
        const int xlo = m / 4, xhi = 3 * m / 4;          // [xlo, xhi)
        const int tlo = 3 * m / 8, thi = 5 * m / 8;      // width m/4
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double x1 = px1 - wl + (i + 0.5) * hx;
            for (int j = 0; j < m; ++j) {
                const double x2 = px2 - wl + (j + 0.5) * hx;
                const bool in_x = (i >= xlo && i < xhi) && (j >= xlo && j < xhi);
                for (int k = 0; k < m; ++k) {
                    if (in_x && k >= tlo && k < thi) continue;  // next level's cells
                    const double t = pt_ - wl * wl + (k + 0.5) * ht;
                    if (!member(x1, x2, t)) continue;
                    const std::array<double, 2> zx{x1, x2};
                    const double d = dist_raw(px, pt_, zx, t);
                    acc += std::pow(d, -p) * cell;
                }
            }
        }
        out.value += acc;
        out.levels = level + 1;
        // circumscribing gauge radius of the excluded box (x-half wl/2, t-half wl^2/4):
        // rho^4 <= (2 (wl/2)^2)^2 + (wl^2/4)^2 = wl^4 * 5/16
        const double eps = wl * std::pow(5.0 / 16.0, 0.25);
        out.tail_bound = eps <= clearance ? 0.0 : detail::pole_tail_bound(eps, p, 1);
        if (out.tail_bound <= tail_frac * out.value &&
            (out.tail_bound == 0.0 || out.value > 0.0)) {
            out.converged = true;
            break;
        }
        wl *= 0.5;
    }
    return out;
}

// sigma(alpha, n=1) = (1/|B_1|) int_{B_1} rho^{-4 alpha}; quadrature value,
// cached. Diverges (tail bound stays infinite) when 4 alpha >= Q.
inline SingularQuad sigma_quadrature(double four_alpha, int m = 32, double tail_frac = 1e-3,
                                     int max_levels = 60) {
    const GroupPoint origin = GroupPoint::zero(1);
    auto in_b1 = [](double x1, double x2, double t) {
        const double xs = x1 * x1 + x2 * x2;
        return xs * xs + t * t < 1.0;
    };
    SingularQuad q = integrate_gauge_power(origin, four_alpha, in_b1, 1.0, m, tail_frac, max_levels);
    const double v = unit_ball_volume(1);
    q.value /= v;
    q.tail_bound /= v;
    return q;
}

inline double sigma_value(double four_alpha) {
    static std::mutex mu;
    static std::map<long long, double> cache;
    const long long key = static_cast<long long>(std::llround(four_alpha * 1e12));
    {
        std::scoped_lock lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    SingularQuad q = sigma_quadrature(four_alpha);
    if (!q.converged)
        throw std::runtime_error("sigma quadrature did not converge (4*alpha >= Q?)");
    std::scoped_lock lock(mu);
    cache[key] = q.value;
    return q.value;
}

}  // namespace heislab
