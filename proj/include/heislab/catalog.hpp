#pragma once

// Closed-form catalog: the gauge quartic phi, its negative powers psi_alpha,
// the coordinate functions, the rectangle barriers, the exponential barrier
// and the manufactured family u_eps = t phi^q(x, t+eps). Every field carries
// exact horizontal gradient/Hessian and vertical derivative; the catalog is
// addressable by name + parameters (see docs/formats.md).

#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heislab/calculus.hpp"

namespace heislab {

namespace detail {

inline Vec jx_of(const GroupPoint& z) {
    Vec j(2 * z.n());
    symplectic_apply(z.x, j);
    return j;
}

// D^2_X of t*g given grad/hess of g: (X_i t)(X_j g) + (X_j t)(X_i g) + t X_ij g.
inline Mat hess_t_times(const GroupPoint& z, const Vec& grad_g, const Mat& hess_g) {
    const int d = 2 * z.n();
    const Vec jx = jx_of(z);
    Mat m(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            at(m, d, i, j) = 2.0 * jx[i] * grad_g[j] + 2.0 * jx[j] * grad_g[i] +
                             z.t * at(hess_g, d, i, j);
    return m;
}

}  // namespace detail

inline ScalarField field_constant(double c, int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "constant";
    f.value = [c](const GroupPoint&) { return c; };
    f.grad = [n](const GroupPoint&) { return Vec(2 * n, 0.0); };
    f.hess = [n](const GroupPoint&) { return Mat(4 * n * n, 0.0); };
    f.dt = [](const GroupPoint&) { return 0.0; };
    return f;
}

// t: the L_A-harmonic coordinate (D^2_X t = 0 identically).
inline ScalarField field_t(int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "t";
    f.value = [](const GroupPoint& z) { return z.t; };
    f.grad = [](const GroupPoint& z) {
        Vec g = detail::jx_of(z);
        for (double& v : g) v *= 2.0;
        return g;
    };
    f.hess = [n](const GroupPoint&) { return Mat(4 * n * n, 0.0); };
    f.dt = [](const GroupPoint&) { return 1.0; };
    return f;
}

// |x|^2
inline ScalarField field_x_sq(int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "x_sq";
    f.value = [](const GroupPoint& z) { return norm_sq(z.x); };
    f.grad = [](const GroupPoint& z) {
        Vec g(z.x);
        for (double& v : g) v *= 2.0;
        return g;
    };
    f.hess = [n](const GroupPoint&) { return identity(2 * n, 2.0); };
    f.dt = [](const GroupPoint&) { return 0.0; };
    return f;
}

// |x - x0|^2 (horizontal displacement)
inline ScalarField field_sq_dist_horizontal(Vec x0) {
    const int n = static_cast<int>(x0.size() / 2);
    ScalarField f;
    f.n = n;
    f.name = "sq_dist_horizontal";
    f.value = [x0](const GroupPoint& z) {
        double s = 0.0;
        for (std::size_t i = 0; i < x0.size(); ++i) {
            const double d = z.x[i] - x0[i];
            s += d * d;
        }
        return s;
    };
    f.grad = [x0](const GroupPoint& z) {
        Vec g(x0.size());
        for (std::size_t i = 0; i < x0.size(); ++i) g[i] = 2.0 * (z.x[i] - x0[i]);
        return g;
    };
    f.hess = [n](const GroupPoint&) { return identity(2 * n, 2.0); };
    f.dt = [](const GroupPoint&) { return 0.0; };
    return f;
}

// |x|^4, with X_j |x|^4 = 4 x_j |x|^2 and X_ij = 4 delta_ij |x|^2 + 8 x_i x_j.
inline ScalarField field_x_quartic(int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "x_quartic";
    f.value = [](const GroupPoint& z) {
        const double s = norm_sq(z.x);
        return s * s;
    };
    f.grad = [](const GroupPoint& z) {
        const double s = norm_sq(z.x);
        Vec g(z.x);
        for (double& v : g) v *= 4.0 * s;
        return g;
    };
    f.hess = [](const GroupPoint& z) {
        const int d = 2 * z.n();
        const double s = norm_sq(z.x);
        Mat m(d * d, 0.0);
        for (int i = 0; i < d; ++i) {
            at(m, d, i, i) = 4.0 * s;
            for (int j = 0; j < d; ++j) at(m, d, i, j) += 8.0 * z.x[i] * z.x[j];
        }
        return m;
    };
    f.dt = [](const GroupPoint&) { return 0.0; };
    return f;
}

namespace detail {

// Gradient/Hessian of phi_s(z) = |x|^4 + s^2 evaluated with s = t + shift;
// the vertical shift is central, so these are the translated closed forms.
inline Vec grad_phi_shift(const GroupPoint& z, double shift) {
    const double s = z.t + shift;
    const double xs = norm_sq(z.x);
    Vec g = jx_of(z);
    for (int i = 0; i < 2 * z.n(); ++i) g[i] = 4.0 * z.x[i] * xs + 4.0 * s * g[i];
    return g;
}

inline Mat hess_phi_shift(const GroupPoint& z, double /*shift*/) {
    const int d = 2 * z.n();
    const double xs = norm_sq(z.x);
    const Vec jx = jx_of(z);
    Mat m(d * d, 0.0);
    for (int i = 0; i < d; ++i) {
        at(m, d, i, i) = 4.0 * xs;
        for (int j = 0; j < d; ++j)
            at(m, d, i, j) += 8.0 * z.x[i] * z.x[j] + 8.0 * jx[i] * jx[j];
    }
    return m;
}

}  // namespace detail

// phi = rho^4 = |x|^4 + t^2
inline ScalarField field_phi(int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "phi";
    f.value = [](const GroupPoint& z) {
        const double xs = norm_sq(z.x);
        return xs * xs + z.t * z.t;
    };
    f.grad = [](const GroupPoint& z) { return detail::grad_phi_shift(z, 0.0); };
    f.hess = [](const GroupPoint& z) { return detail::hess_phi_shift(z, 0.0); };
    f.dt = [](const GroupPoint& z) { return 2.0 * z.t; };
    return f;
}

// psi_alpha = phi^{-alpha}; pole at the origin.
inline ScalarField field_psi_alpha(double alpha, int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "psi_alpha";
    auto phi_val = [](const GroupPoint& z) {
        const double xs = norm_sq(z.x);
        return xs * xs + z.t * z.t;
    };
    f.value = [=](const GroupPoint& z) {
        const double p = phi_val(z);
        if (p <= 0.0) throw std::domain_error("psi_alpha: evaluation at the pole");
        return std::pow(p, -alpha);
    };
    f.grad = [=](const GroupPoint& z) {
        const double p = phi_val(z);
        if (p <= 0.0) throw std::domain_error("psi_alpha: evaluation at the pole");
        Vec g = detail::grad_phi_shift(z, 0.0);
        const double c = -alpha * std::pow(p, -alpha - 1.0);
        for (double& v : g) v *= c;
        return g;
    };
    f.hess = [=](const GroupPoint& z) {
        const double p = phi_val(z);
        if (p <= 0.0) throw std::domain_error("psi_alpha: evaluation at the pole");
        const int d = 2 * n;
        const Vec gp = detail::grad_phi_shift(z, 0.0);
        Mat m = detail::hess_phi_shift(z, 0.0);
        const double c = alpha * std::pow(p, -alpha - 2.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                at(m, d, i, j) = c * ((alpha + 1.0) * gp[i] * gp[j] - p * at(m, d, i, j));
        return m;
    };
    f.dt = [=](const GroupPoint& z) {
        const double p = phi_val(z);
        if (p <= 0.0) throw std::domain_error("psi_alpha: evaluation at the pole");
        return -alpha * std::pow(p, -alpha - 1.0) * 2.0 * z.t;
    };
    return f;
}

// rho^{2-Q} = psi_{(Q-2)/4}, annihilated by the sub-Laplacian away from 0.
inline ScalarField field_fundamental(int n = 1) {
    ScalarField f = field_psi_alpha((homogeneous_dimension(n) - 2) / 4.0, n);
    f.name = "fundamental";
    return f;
}

// u_eps = t phi^q(x, t + eps)
inline ScalarField field_u_eps(double q, double eps, int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "u_eps";
    auto phis = [eps](const GroupPoint& z) {
        const double xs = norm_sq(z.x);
        const double s = z.t + eps;
        return xs * xs + s * s;
    };
    f.value = [=](const GroupPoint& z) { return z.t * std::pow(phis(z), q); };
    f.grad = [=](const GroupPoint& z) {
        const int d = 2 * n;
        const double p = phis(z);
        const double gq = std::pow(p, q), gq1 = q * std::pow(p, q - 1.0);
        const Vec gp = detail::grad_phi_shift(z, eps);
        Vec jx = detail::jx_of(z);
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = 2.0 * jx[i] * gq + z.t * gq1 * gp[i];
        return g;
    };
    f.hess = [=](const GroupPoint& z) {
        const int d = 2 * n;
        const double p = phis(z);
        const double c1 = q * std::pow(p, q - 1.0);
        const double c2 = q * (q - 1.0) * std::pow(p, q - 2.0);
        const Vec gp = detail::grad_phi_shift(z, eps);
        Mat hg = detail::hess_phi_shift(z, eps);
        // D^2 of g = phi_s^q
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                at(hg, d, i, j) = c2 * gp[i] * gp[j] + c1 * at(hg, d, i, j);
        Vec gg(d);
        for (int i = 0; i < d; ++i) gg[i] = c1 * gp[i];
        return detail::hess_t_times(z, gg, hg);
    };
    f.dt = [=](const GroupPoint& z) {
        const double p = phis(z);
        return std::pow(p, q) + z.t * q * std::pow(p, q - 1.0) * 2.0 * (z.t + eps);
    };
    return f;
}

// Delta_X u_eps = 8 q phi^{q-1}(x, t+eps) |x|^2 [ t(2q+n) + 2(t+eps) ],
// the source of the manufactured problem (and of the counterexample).
inline ScalarField field_u_eps_source(double q, double eps, int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "u_eps_source";
    f.value = [=](const GroupPoint& z) {
        const double xs = norm_sq(z.x);
        const double s = z.t + eps;
        const double p = xs * xs + s * s;
        return 8.0 * q * std::pow(p, q - 1.0) * xs * (z.t * (2.0 * q + n) + 2.0 * s);
    };
    return f;
}

// phi1 = t (delta + t/r^2 - 2 delta |x|^4 / r^4), a subsolution on R(r).
inline ScalarField field_phi1(double r, double delta, int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "phi1";
    const double r2 = r * r, r4 = r2 * r2;
    f.value = [=](const GroupPoint& z) {
        const double xs = norm_sq(z.x);
        return z.t * (delta + z.t / r2 - 2.0 * delta * xs * xs / r4);
    };
    f.grad = [=](const GroupPoint& z) {
        const int d = 2 * n;
        const double xs = norm_sq(z.x);
        const Vec jx = detail::jx_of(z);
        Vec g(d);
        // grad of t*(delta) + t^2/r^2 - (2 delta / r^4) t |x|^4
        for (int i = 0; i < d; ++i) {
            const double gt = 2.0 * jx[i];
            g[i] = delta * gt + (2.0 * z.t / r2) * gt -
                   (2.0 * delta / r4) * (gt * xs * xs + z.t * 4.0 * xs * z.x[i]);
        }
        return g;
    };
    f.hess = [=](const GroupPoint& z) {
        const int d = 2 * n;
        const double xs = norm_sq(z.x);
        const Vec jx = detail::jx_of(z);
        Mat m(d * d, 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double h_t2 = 8.0 * jx[i] * jx[j];
                double h_tx4 = 2.0 * jx[i] * 4.0 * xs * z.x[j] + 2.0 * jx[j] * 4.0 * xs * z.x[i] +
                               z.t * (8.0 * z.x[i] * z.x[j]);
                if (i == j) h_tx4 += z.t * 4.0 * xs;
                at(m, d, i, j) = h_t2 / r2 - (2.0 * delta / r4) * h_tx4;
            }
        return m;
    };
    f.dt = [=](const GroupPoint& z) {
        const double xs = norm_sq(z.x);
        return delta + 2.0 * z.t / r2 - 2.0 * delta * xs * xs / r4;
    };
    return f;
}

// phi2 = t (t - delta r^2), with L_A phi2 = 8 <A Jx, Jx> >= 8 lambda |x|^2.
inline ScalarField field_phi2(double r, double delta, int n = 1) {
    ScalarField f;
    f.n = n;
    f.name = "phi2";
    const double c = delta * r * r;
    f.value = [=](const GroupPoint& z) { return z.t * (z.t - c); };
    f.grad = [=](const GroupPoint& z) {
        Vec g = detail::jx_of(z);
        for (double& v : g) v *= 2.0 * (2.0 * z.t - c);
        return g;
    };
    f.hess = [=](const GroupPoint& z) {
        const int d = 2 * n;
        const Vec jx = detail::jx_of(z);
        Mat m(d * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) at(m, d, i, j) = 8.0 * jx[i] * jx[j];
        return m;
    };
    f.dt = [=](const GroupPoint& z) { return 2.0 * z.t - c; };
    return f;
}

// w = M (|x0|^2/r0^2) (1 - exp(-alpha (t + |x-x0|^2) / |x0|^2))
inline ScalarField field_exp_barrier(Vec x0, double r0, double alpha, double M) {
    const int n = static_cast<int>(x0.size() / 2);
    const double x0sq = norm_sq(x0);
    if (!(x0sq > 0.0)) throw std::invalid_argument("exp_barrier: x0 must be nonzero");
    const double c = M * x0sq / (r0 * r0);
    const double beta = alpha / x0sq;
    ScalarField f;
    f.n = n;
    f.name = "exp_barrier";
    auto xi = [x0](const GroupPoint& z) {
        double s = 0.0;
        for (std::size_t i = 0; i < x0.size(); ++i) {
            const double d = z.x[i] - x0[i];
            s += d * d;
        }
        return z.t + s;
    };
    f.value = [=](const GroupPoint& z) { return c * (1.0 - std::exp(-beta * xi(z))); };
    f.grad = [=](const GroupPoint& z) {
        const int d = 2 * n;
        const double e = std::exp(-beta * xi(z));
        Vec jx = detail::jx_of(z);
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = c * beta * e * (2.0 * jx[i] + 2.0 * (z.x[i] - x0[i]));
        return g;
    };
    f.hess = [=](const GroupPoint& z) {
        const int d = 2 * n;
        const double e = std::exp(-beta * xi(z));
        const Vec jx = detail::jx_of(z);
        Vec gxi(d);
        for (int i = 0; i < d; ++i) gxi[i] = 2.0 * jx[i] + 2.0 * (z.x[i] - x0[i]);
        Mat m(d * d, 0.0);
        for (int i = 0; i < d; ++i) {
            at(m, d, i, i) = c * beta * e * 2.0;
            for (int j = 0; j < d; ++j)
                at(m, d, i, j) -= c * beta * beta * e * gxi[i] * gxi[j];
        }
        return m;
    };
    f.dt = [=](const GroupPoint& z) { return c * beta * std::exp(-beta * xi(z)); };
    return f;
}

// ---- combinators ----

// w(z) = u(g o z); the fields X_j and dt are left-invariant, so the closed
// forms translate along.
inline ScalarField translated(const ScalarField& u, const GroupPoint& g) {
    ScalarField f;
    f.n = u.n;
    f.name = u.name + "_translated";
    f.value = [u, g](const GroupPoint& z) { return u.value(compose(g, z)); };
    if (u.grad) f.grad = [u, g](const GroupPoint& z) { return u.grad(compose(g, z)); };
    if (u.hess) f.hess = [u, g](const GroupPoint& z) { return u.hess(compose(g, z)); };
    if (u.dt) f.dt = [u, g](const GroupPoint& z) { return u.dt(compose(g, z)); };
    return f;
}

// w(z) = u(delta_r z): X_j w = r (X_j u)(delta_r z), D^2_X w = r^2 (D^2_X u)(delta_r z).
inline ScalarField dilated(const ScalarField& u, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("dilated: r must be positive");
    ScalarField f;
    f.n = u.n;
    f.name = u.name + "_dilated";
    f.value = [u, r](const GroupPoint& z) { return u.value(dilate(r, z)); };
    if (u.grad) f.grad = [u, r](const GroupPoint& z) {
        Vec g = u.grad(dilate(r, z));
        for (double& v : g) v *= r;
        return g;
    };
    if (u.hess) f.hess = [u, r](const GroupPoint& z) {
        Mat m = u.hess(dilate(r, z));
        for (double& v : m) v *= r * r;
        return m;
    };
    if (u.dt) f.dt = [u, r](const GroupPoint& z) { return r * r * u.dt(dilate(r, z)); };
    return f;
}

// a + b * u
inline ScalarField affine(double a, double b, const ScalarField& u) {
    ScalarField f;
    f.n = u.n;
    f.name = u.name + "_affine";
    f.value = [=](const GroupPoint& z) { return a + b * u.value(z); };
    if (u.grad) f.grad = [=](const GroupPoint& z) {
        Vec g = u.grad(z);
        for (double& v : g) v *= b;
        return g;
    };
    if (u.hess) f.hess = [=](const GroupPoint& z) {
        Mat m = u.hess(z);
        for (double& v : m) v *= b;
        return m;
    };
    if (u.dt) f.dt = [=](const GroupPoint& z) { return b * u.dt(z); };
    return f;
}

inline ScalarField field_sum(std::vector<std::pair<double, ScalarField>> terms) {
    if (terms.empty()) throw std::invalid_argument("field_sum: no terms");
    const int n = terms.front().second.n;
    bool closed = true;
    for (const auto& [c, u] : terms) closed = closed && u.has_closed_forms() && u.dt;
    ScalarField f;
    f.n = n;
    f.name = "sum";
    auto ts = std::make_shared<std::vector<std::pair<double, ScalarField>>>(std::move(terms));
    f.value = [ts](const GroupPoint& z) {
        double s = 0.0;
        for (const auto& [c, u] : *ts) s += c * u.value(z);
        return s;
    };
    if (closed) {
        f.grad = [ts, n](const GroupPoint& z) {
            Vec g(2 * n, 0.0);
            for (const auto& [c, u] : *ts) {
                const Vec gu = u.grad(z);
                for (int i = 0; i < 2 * n; ++i) g[i] += c * gu[i];
            }
            return g;
        };
        f.hess = [ts, n](const GroupPoint& z) {
            Mat m(4 * n * n, 0.0);
            for (const auto& [c, u] : *ts) {
                const Mat mu = u.hess(z);
                for (std::size_t i = 0; i < m.size(); ++i) m[i] += c * mu[i];
            }
            return m;
        };
        f.dt = [ts](const GroupPoint& z) {
            double s = 0.0;
            for (const auto& [c, u] : *ts) s += c * u.dt(z);
            return s;
        };
    }
    return f;
}

// Catalog lookup by name + parameter list (used by the config layer).
inline ScalarField make_catalog_field(const std::string& name,
                                      const std::map<std::string, double>& p, int n = 1) {
    auto get = [&](const std::string& key, double dflt,
                   bool required = false) -> double {
        auto it = p.find(key);
        if (it != p.end()) return it->second;
        if (required) throw std::invalid_argument("catalog field '" + name + "' needs parameter '" + key + "'");
        return dflt;
    };
    if (name == "constant") return field_constant(get("value", 1.0), n);
    if (name == "t") return field_t(n);
    if (name == "phi") return field_phi(n);
    if (name == "x_sq") return field_x_sq(n);
    if (name == "neg_x_sq") return affine(0.0, -1.0, field_x_sq(n));
    if (name == "x_quartic") return field_x_quartic(n);
    if (name == "psi_alpha") return field_psi_alpha(get("alpha", 0.0, true), n);
    if (name == "fundamental") return field_fundamental(n);
    if (name == "u_eps") return field_u_eps(get("q", 0.0, true), get("eps", 0.0, true), n);
    if (name == "u_eps_source")
        return field_u_eps_source(get("q", 0.0, true), get("eps", 0.0, true), n);
    if (name == "phi1") return field_phi1(get("r", 1.0), get("delta", 0.1), n);
    if (name == "phi2") return field_phi2(get("r", 1.0), get("delta", 0.1), n);
    if (name == "exp_barrier") {
        Vec x0(2 * n, 0.0);
        x0[0] = get("x0_1", 1.0);
        if (2 * n > 1) x0[1] = get("x0_2", 0.0);
        return field_exp_barrier(x0, get("r0", 1.0), get("alpha", 1.0), get("M", 1.0));
    }
    throw std::invalid_argument(
        "unknown catalog field '" + name +
        "'; valid names: constant, t, phi, x_sq, neg_x_sq, x_quartic, psi_alpha, fundamental, "
        "u_eps, u_eps_source, phi1, phi2, exp_barrier");
}

}  // namespace heislab
