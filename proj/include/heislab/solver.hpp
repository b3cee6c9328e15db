#pragma once

// Comparison-preserving discretization of the operator: at each interior node
// the coefficient matrix is diagonalized and each eigenpair contributes a
// second directional difference along the corresponding frozen horizontal
// direction, with trilinear interpolation at off-grid feet. All off-diagonal
// weights are nonnegative and each row sums to zero by construction, so the
// scheme inherits a discrete comparison principle. The linear systems are
// solved by Jacobi-preconditioned BiCGSTAB (deterministic, single-threaded)
// with optional Gauss-Seidel polish sweeps.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "heislab/grid.hpp"

namespace heislab {

struct GridTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
    std::vector<double> residual_history;
    SolverFailure(const std::string& msg, std::vector<double> hist)
        : std::runtime_error(msg), residual_history(std::move(hist)) {}
};

struct StencilSystem {
    std::shared_ptr<const GridDomain> grid;
    std::vector<int> interior;       // node ids of the unknowns, in grid order
    std::vector<int> unknown_of;     // node id -> unknown index, -1 elsewhere
    std::vector<int> row_ptr;        // CSR over off-diagonal entries
    std::vector<int> col_node;       // global node id per entry
    std::vector<double> weight;      // nonnegative off-diagonal weights
    std::vector<double> diag;        // negative diagonal per row (exact -sum of the row)
};

namespace detail {

struct FootWeights {
    std::array<int, 8> node;
    std::array<double, 8> w;
    int count = 0;
};

// Trilinear interpolation weights at p; fails if p leaves the padded box.
inline FootWeights trilinear(const GridDomain& g, const std::array<double, 3>& p, int home_node) {
    const double fx = (p[0] - g.lo[0]) / g.hx;
    const double fy = (p[1] - g.lo[1]) / g.hx;
    const double ft = (p[2] - g.lo[2]) / g.ht;
    const int i = static_cast<int>(std::floor(fx));
    const int j = static_cast<int>(std::floor(fy));
    const int k = static_cast<int>(std::floor(ft));
    if (i < 0 || i + 1 >= g.nx || j < 0 || j + 1 >= g.ny || k < 0 || k + 1 >= g.nt)
        throw GridTooSmallError("stencil foot exits the grid bounding box near node " +
                                std::to_string(home_node));
    const double ax = fx - i, ay = fy - j, at_ = ft - k;
    FootWeights f;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < 2; ++dj)
            for (int dk = 0; dk < 2; ++dk) {
                const double w = (di ? ax : 1.0 - ax) * (dj ? ay : 1.0 - ay) *
                                 (dk ? at_ : 1.0 - at_);
                f.node[f.count] = g.index(i + di, j + dj, k + dk);
                f.w[f.count] = w;
                ++f.count;
            }
    return f;
}

}  // namespace detail

inline StencilSystem discretize(const CoefficientField& A, std::shared_ptr<const GridDomain> grid) {
    if (A.n != 1) throw std::invalid_argument("discretize: n = 1 only");
    const GridDomain& g = *grid;
    StencilSystem sys;
    sys.grid = grid;
    sys.unknown_of.assign(g.size(), -1);
    for (std::size_t id = 0; id < g.size(); ++id)
        if (g.cls[id] == NodeClass::Interior) {
            sys.unknown_of[id] = static_cast<int>(sys.interior.size());
            sys.interior.push_back(static_cast<int>(id));
        }
    sys.row_ptr.reserve(sys.interior.size() + 1);
    sys.row_ptr.push_back(0);

    std::map<int, double> row;
    for (int node : sys.interior) {
        row.clear();
        const GroupPoint z = g.point(node);
        const Mat a = A.eval(z);
        const Eigen2 e = eigen_sym_2x2(a[0], a[1], a[3]);
        if (!(e.mu1 > 0.0))
            throw std::invalid_argument("discretize: coefficient matrix not positive definite");
        const double jx1 = -z.x[1], jx2 = z.x[0];

        double center_drop = 0.0;  // sum of 2 mu / s^2 over directions
        for (const auto& [mu, v] : {std::pair{e.mu1, e.v1}, std::pair{e.mu2, e.v2}}) {
            const bool axis = std::abs(v[0]) > 1.0 - 1e-11 || std::abs(v[1]) > 1.0 - 1e-11;
            const double s = axis ? g.step_axis : g.step_oblique;
            const double wt = 2.0 * (jx1 * v[0] + jx2 * v[1]);
            const double c = mu / (s * s);
            for (double sign : {1.0, -1.0}) {
                const std::array<double, 3> foot{z.x[0] + sign * s * v[0],
                                                 z.x[1] + sign * s * v[1], z.t + sign * s * wt};
                const auto fw = detail::trilinear(g, foot, node);
                for (int q = 0; q < fw.count; ++q) {
                    if (fw.w[q] == 0.0) continue;
                    if (g.cls[fw.node[q]] == NodeClass::Exterior)
                        throw std::logic_error("discretize: stencil touches an exterior node");
                    row[fw.node[q]] += c * fw.w[q];
                }
            }
            center_drop += 2.0 * c;
        }
        // move the center hit out of the off-diagonal set; the diagonal is the
        // exact negative of the remaining row so constants are annihilated
        row.erase(node);
        double offsum = 0.0;
        for (const auto& [col, w] : row) {
            if (!(w >= 0.0)) throw std::logic_error("discretize: negative off-diagonal weight");
            sys.col_node.push_back(col);
            sys.weight.push_back(w);
            offsum += w;
        }
        const double d = -offsum;
        if (!(d < 0.0)) throw std::logic_error("discretize: non-negative diagonal");
        (void)center_drop;
        sys.diag.push_back(d);
        sys.row_ptr.push_back(static_cast<int>(sys.col_node.size()));
    }
    return sys;
}

// Apply the discrete operator to a full node field (interior rows only).
inline std::vector<double> discrete_apply(const StencilSystem& sys,
                                          const std::vector<double>& node_values) {
    std::vector<double> out(sys.interior.size());
    for (std::size_t r = 0; r < sys.interior.size(); ++r) {
        double acc = sys.diag[r] * node_values[sys.interior[r]];
        for (int q = sys.row_ptr[r]; q < sys.row_ptr[r + 1]; ++q)
            acc += sys.weight[q] * node_values[sys.col_node[q]];
        out[r] = acc;
    }
    return out;
}

struct SolveOptions {
    double rtol = 1e-9;
    int max_iter = 60000;
    int polish_sweeps = 0;  // Gauss-Seidel passes after the Krylov solve
};

struct SolveInfo {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

namespace detail {

// Jacobi-preconditioned BiCGSTAB on the interior block. Deterministic: fixed
// initial guess, fixed reduction order.
inline void bicgstab(const StencilSystem& sys, const std::vector<double>& rhs,
                     std::vector<double>& x, const SolveOptions& opt, SolveInfo& info,
                     std::vector<double>& hist) {
    const std::size_t N = rhs.size();
    const GridDomain& g = *sys.grid;
    auto matvec = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t r = 0; r < N; ++r) {
            double acc = sys.diag[r] * in[r];
            for (int q = sys.row_ptr[r]; q < sys.row_ptr[r + 1]; ++q) {
                const int u = sys.unknown_of[sys.col_node[q]];
                if (u >= 0) acc += sys.weight[q] * in[u];
            }
            out[r] = acc;
        }
    };
    (void)g;
    auto dot2 = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
        return s;
    };

    std::vector<double> r(N), r0(N), p(N, 0.0), v(N, 0.0), s(N), t(N), tmp(N);
    matvec(x, tmp);
    for (std::size_t i = 0; i < N; ++i) r[i] = rhs[i] - tmp[i];
    r0 = r;
    double rho_old = 1.0, alpha = 1.0, omega = 1.0;
    const double bnorm = std::sqrt(dot2(rhs, rhs));
    const double floor_ = bnorm > 0.0 ? opt.rtol * bnorm : 0.0;
    double rnorm = std::sqrt(dot2(r, r));
    hist.push_back(bnorm > 0.0 ? rnorm / bnorm : rnorm);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        info.converged = true;
        info.relative_residual = 0.0;
        return;
    }
    int it = 0;
    while (rnorm > floor_ && it < opt.max_iter) {
        ++it;
        const double rho = dot2(r0, r);
        if (rho == 0.0) break;
        const double beta = (rho / rho_old) * (alpha / omega);
        for (std::size_t i = 0; i < N; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        // Jacobi-preconditioned direction
        for (std::size_t i = 0; i < N; ++i) tmp[i] = p[i] / sys.diag[i];
        matvec(tmp, v);
        alpha = rho / dot2(r0, v);
        for (std::size_t i = 0; i < N; ++i) s[i] = r[i] - alpha * v[i];
        for (std::size_t i = 0; i < N; ++i) x[i] += alpha * (p[i] / sys.diag[i]);
        const double snorm = std::sqrt(dot2(s, s));
        if (snorm <= floor_) {
            rnorm = snorm;
            hist.push_back(rnorm / bnorm);
            break;
        }
        for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] / sys.diag[i];
        matvec(tmp, t);
        const double tt = dot2(t, t);
        if (tt == 0.0) break;
        omega = dot2(t, s) / tt;
        for (std::size_t i = 0; i < N; ++i) x[i] += omega * (s[i] / sys.diag[i]);
        for (std::size_t i = 0; i < N; ++i) r[i] = s[i] - omega * t[i];
        rho_old = rho;
        rnorm = std::sqrt(dot2(r, r));
        hist.push_back(rnorm / bnorm);
        if (omega == 0.0) break;
    }
    // true residual (BiCGSTAB recursions drift)
    matvec(x, tmp);
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double d = rhs[i] - tmp[i];
        err += d * d;
    }
    info.iterations = it;
    info.relative_residual = std::sqrt(err) / bnorm;
    info.converged = info.relative_residual <= opt.rtol * 10.0;
}

}  // namespace detail

// Solve L u = f with Dirichlet data g evaluated at boundary node centers.
inline DiscreteField solve(const StencilSystem& sys, const ScalarField& f,
                           const ScalarField& dirichlet, const SolveOptions& opt = {},
                           SolveInfo* info_out = nullptr) {
    const GridDomain& g = *sys.grid;
    const std::size_t N = sys.interior.size();
    DiscreteField out;
    out.grid = sys.grid;
    out.values.assign(g.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t id = 0; id < g.size(); ++id)
        if (g.cls[id] == NodeClass::Dirichlet)
            out.values[id] = dirichlet.value(g.point(static_cast<int>(id)));

    std::vector<double> rhs(N);
    for (std::size_t r = 0; r < N; ++r) {
        double b = f.value(g.point(sys.interior[r]));
        for (int q = sys.row_ptr[r]; q < sys.row_ptr[r + 1]; ++q) {
            const int col = sys.col_node[q];
            if (sys.unknown_of[col] < 0) b -= sys.weight[q] * out.values[col];
        }
        rhs[r] = b;
    }

    std::vector<double> x(N, 0.0);
    SolveInfo info;
    std::vector<double> hist;
    detail::bicgstab(sys, rhs, x, opt, info, hist);
    if (!info.converged)
        throw SolverFailure("solver failed to reach the residual target (rel. residual " +
                                std::to_string(info.relative_residual) + ")",
                            std::move(hist));

    // Gauss-Seidel polish: convex-combination sweeps sharpen the hull property
    for (int sweep = 0; sweep < opt.polish_sweeps; ++sweep) {
        for (std::size_t r = 0; r < N; ++r) {
            double acc = rhs[r];
            for (int q = sys.row_ptr[r]; q < sys.row_ptr[r + 1]; ++q) {
                const int u = sys.unknown_of[sys.col_node[q]];
                if (u >= 0) acc -= sys.weight[q] * x[u];
            }
            x[r] = acc / sys.diag[r];
        }
    }

    for (std::size_t r = 0; r < N; ++r) out.values[sys.interior[r]] = x[r];
    if (info_out) *info_out = info;
    return out;
}

// Hypotheses: L u >= L v on interior rows and u <= v at Dirichlet nodes; the
// conclusion of the comparison principle is u <= v everywhere. Tolerances
// cover iterative-solver residuals.
inline bool discrete_comparison_test(const StencilSystem& sys, const DiscreteField& u,
                                     const DiscreteField& v, double hyp_tol = 1e-9,
                                     double conc_tol = 1e-8) {
    const GridDomain& g = *sys.grid;
    const auto Lu = discrete_apply(sys, u.values);
    const auto Lv = discrete_apply(sys, v.values);
    double scale = 1.0;
    for (std::size_t r = 0; r < sys.interior.size(); ++r)
        scale = std::max({scale, std::abs(u.values[sys.interior[r]]),
                          std::abs(v.values[sys.interior[r]])});
    for (std::size_t r = 0; r < sys.interior.size(); ++r)
        if (!(Lu[r] >= Lv[r] - hyp_tol * (1.0 + std::abs(Lu[r]) + std::abs(Lv[r]))))
            throw std::invalid_argument("discrete_comparison_test: hypothesis L u >= L v fails");
    for (std::size_t id = 0; id < g.size(); ++id) {
        if (g.cls[id] == NodeClass::Exterior) continue;
        if (g.cls[id] == NodeClass::Dirichlet &&
            !(u.values[id] <= v.values[id] + hyp_tol * scale))
            throw std::invalid_argument("discrete_comparison_test: boundary hypothesis fails");
    }
    for (std::size_t id = 0; id < g.size(); ++id)
        if (g.cls[id] == NodeClass::Interior && u.values[id] > v.values[id] + conc_tol * scale)
            return false;
    return true;
}

}  // namespace heislab
