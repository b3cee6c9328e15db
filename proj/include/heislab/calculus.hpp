#pragma once

// Horizontal calculus on H^n: the left-invariant vector fields X_j, horizontal
// gradient/Hessian, the operator L_A in vector-field and coordinate form, and
// finite-difference fallbacks along frozen directions.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "heislab/group.hpp"
#include "heislab/linalg.hpp"

namespace heislab {

using Vec = std::vector<double>;

// Scalar function on H^n, optionally carrying closed-form horizontal
// derivatives. grad has length 2n, hess is a row-major symmetric 2n x 2n
// matrix, dt is the vertical derivative.
struct ScalarField {
    int n = 1;
    std::string name;
    std::function<double(const GroupPoint&)> value;
    std::function<Vec(const GroupPoint&)> grad;
    std::function<Mat(const GroupPoint&)> hess;
    std::function<double(const GroupPoint&)> dt;

    bool has_closed_forms() const { return static_cast<bool>(grad) && static_cast<bool>(hess); }
    double operator()(const GroupPoint& z) const { return value(z); }
};

// Map z -> A(z), symmetric 2n x 2n with spectrum in [lambda, Lambda].
struct CoefficientField {
    int n = 1;
    double lambda = 1.0;
    double Lambda = 1.0;
    std::string name;
    std::function<Mat(const GroupPoint&)> eval;
};

inline double default_step(const GroupPoint& z) { return 1e-3 * std::max(1.0, rho(z)); }

namespace detail {

// z + s * (e_j + 2 (Jx)_j e_t), the direction frozen at z.
inline GroupPoint shift_frozen(const GroupPoint& z, int j, double s) {
    GroupPoint w = z;
    w.x[j] += s;
    Vec jx(2 * z.n());
    symplectic_apply(z.x, jx);
    w.t += 2.0 * s * jx[j];
    return w;
}

}  // namespace detail

// Centered difference of u along the frozen direction of X_j at z.
inline double fd_vector_field(int j, const std::function<double(const GroupPoint&)>& u,
                              const GroupPoint& z, double h) {
    return (u(detail::shift_frozen(z, j, h)) - u(detail::shift_frozen(z, j, -h))) / (2.0 * h);
}

// X_j u(z): exact when u has a closed-form gradient, centered difference otherwise.
inline double apply_vector_field(int j, const ScalarField& u, const GroupPoint& z, double h = 0.0) {
    if (j < 0 || j >= 2 * u.n) throw std::invalid_argument("apply_vector_field: index out of range");
    if (u.grad) return u.grad(z)[j];
    if (h <= 0.0) h = default_step(z);
    return fd_vector_field(j, u.value, z, h);
}

inline Vec fd_gradient(const std::function<double(const GroupPoint&)>& u, const GroupPoint& z,
                       double h) {
    Vec g(2 * z.n());
    for (int j = 0; j < 2 * z.n(); ++j) g[j] = fd_vector_field(j, u, z, h);
    return g;
}

// Symmetrized horizontal Hessian by nested differencing of the true fields
// (the inner difference re-evaluates the drift coefficient at the shifted
// points, so this is X_i X_j up to O(h^2), then symmetrized).
inline Mat fd_hessian(const std::function<double(const GroupPoint&)>& u, const GroupPoint& z,
                      double h) {
    const int d = 2 * z.n();
    Mat m(d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            auto xj_u = [&](const GroupPoint& w) { return fd_vector_field(j, u, w, h); };
            at(m, d, i, j) = fd_vector_field(i, xj_u, z, h);
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const double s = 0.5 * (at(m, d, i, j) + at(m, d, j, i));
            at(m, d, i, j) = at(m, d, j, i) = s;
        }
    return m;
}

inline Mat horizontal_hessian(const ScalarField& u, const GroupPoint& z, double h = 0.0) {
    if (u.hess) return u.hess(z);
    if (h <= 0.0) h = default_step(z);
    return fd_hessian(u.value, z, h);
}

// L_A u(z) = tr(A(z) D^2_X u(z)); exact when u carries closed forms.
inline double apply_LA(const CoefficientField& A, const ScalarField& u, const GroupPoint& z,
                       double h = 0.0) {
    const Mat a = A.eval(z);
    const Mat hm = horizontal_hessian(u, z, h);
    return trace_prod(a, hm, 2 * u.n);
}

// Coordinate form: the (2n+1)x(2n+1) matrix with L_A = tr(A(z) D^2 .).
inline Mat coordinate_matrix(const CoefficientField& A, const GroupPoint& z) {
    const int d = 2 * z.n();
    const Mat a = A.eval(z);
    Vec jx(d);
    symplectic_apply(z.x, jx);
    const Vec ajx = mat_vec(a, d, jx);
    Mat m((d + 1) * (d + 1), 0.0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) at(m, d + 1, i, j) = at(a, d, i, j);
    for (int i = 0; i < d; ++i) {
        at(m, d + 1, i, d) = 2.0 * ajx[i];
        at(m, d + 1, d, i) = 2.0 * ajx[i];
    }
    at(m, d + 1, d, d) = 4.0 * dot(ajx, jx);
    return m;
}

// (X_i X_j - X_j X_i) u(z) - c_ij dt u(z) with c_ij = 4 J_{ji}; vanishes to
// discretization order for smooth u.
inline double commutator_defect(int i, int j, const ScalarField& u, const GroupPoint& z,
                                double h = 0.0) {
    const int n = u.n;
    if (h <= 0.0) h = default_step(z);
    auto xj_u = [&](const GroupPoint& w) { return fd_vector_field(j, u.value, w, h); };
    auto xi_u = [&](const GroupPoint& w) { return fd_vector_field(i, u.value, w, h); };
    const double xixj = fd_vector_field(i, xj_u, z, h);
    const double xjxi = fd_vector_field(j, xi_u, z, h);
    double c = 0.0;
    if (j == i + n) c = 4.0;
    else if (i == j + n) c = -4.0;
    double ut;
    if (u.dt) {
        ut = u.dt(z);
    } else {
        GroupPoint zp = z, zm = z;
        zp.t += h;
        zm.t -= h;
        ut = (u.value(zp) - u.value(zm)) / (2.0 * h);
    }
    return (xixj - xjxi) - c * ut;
}

// sup over the sample of |f| / omega, with +infinity wherever omega vanishes
// but f does not; points where both vanish impose no constraint.
inline double weighted_sup_norm(const ScalarField& f, const std::vector<GroupPoint>& sample,
                                const ScalarField& omega) {
    if (sample.empty()) throw std::invalid_argument("weighted_sup_norm: empty sample");
    double sup = 0.0;
    for (const auto& z : sample) {
        const double fv = std::abs(f.value(z));
        const double wv = omega.value(z);
        if (wv <= 0.0) {
            if (fv > 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        sup = std::max(sup, fv / wv);
    }
    return sup;
}

// ---- coefficient-field generators ----

inline CoefficientField coeff_constant(Mat m, int n, double lambda, double Lambda,
                                       std::string name = "constant") {
    CoefficientField a;
    a.n = n;
    a.lambda = lambda;
    a.Lambda = Lambda;
    a.name = std::move(name);
    a.eval = [m = std::move(m)](const GroupPoint&) { return m; };
    return a;
}

inline CoefficientField coeff_identity(int n = 1) {
    return coeff_constant(identity(2 * n), n, 1.0, 1.0, "identity");
}

inline CoefficientField coeff_diagonal(double lambda, double Lambda, int n = 1) {
    Mat m(4 * n * n, 0.0);
    for (int i = 0; i < 2 * n; ++i) at(m, 2 * n, i, i) = (i < n) ? lambda : Lambda;
    return coeff_constant(std::move(m), n, lambda, Lambda, "diagonal");
}

// n = 1 only: eigenframe rotating with position, eigenvalues exactly
// {lambda, Lambda}. Bounded measurable is all the estimates require.
inline CoefficientField coeff_rotating(double lambda, double Lambda, double frequency) {
    CoefficientField a;
    a.n = 1;
    a.lambda = lambda;
    a.Lambda = Lambda;
    a.name = "rotating";
    a.eval = [=](const GroupPoint& z) {
        const double th = frequency * (z.x[0] + 2.0 * z.x[1] + 3.0 * z.t);
        const double c = std::cos(th), s = std::sin(th);
        Mat m(4);
        m[0] = lambda * c * c + Lambda * s * s;
        m[1] = (lambda - Lambda) * c * s;
        m[2] = m[1];
        m[3] = lambda * s * s + Lambda * c * c;
        return m;
    };
    return a;
}

// Random element of M_1(lambda, Lambda): random eigenframe and eigenvalues
// drawn uniformly from [lambda, Lambda].
inline Mat random_coeff_matrix_2x2(Rng& rng, double lambda, double Lambda) {
    const double th = 2.0 * M_PI * rng.uniform();
    const double m1 = rng.uniform(lambda, Lambda), m2 = rng.uniform(lambda, Lambda);
    const double c = std::cos(th), s = std::sin(th);
    Mat m(4);
    m[0] = m1 * c * c + m2 * s * s;
    m[1] = (m1 - m2) * c * s;
    m[2] = m[1];
    m[3] = m1 * s * s + m2 * c * c;
    return m;
}

// Spectrum check over a sample (the CoefficientField invariant, on request).
inline bool check_ellipticity(const CoefficientField& A, const std::vector<GroupPoint>& sample,
                              double tol = 1e-10) {
    for (const auto& z : sample) {
        const Mat m = A.eval(z);
        if (max_abs_asymmetry(m, 2 * A.n) > 1e-12) return false;
        const auto ev = sym_eigenvalues(m, 2 * A.n);
        if (ev.front() < A.lambda - tol || ev.back() > A.Lambda + tol) return false;
    }
    return true;
}

}  // namespace heislab
