#pragma once

// Small dense helpers for the 2n x 2n coefficient matrices (n is tiny).

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace heislab {

using Mat = std::vector<double>;  // row-major square

inline double& at(Mat& m, int dim, int i, int j) { return m[i * dim + j]; }
inline double at(const Mat& m, int dim, int i, int j) { return m[i * dim + j]; }

inline Mat identity(int dim, double scale = 1.0) {
    Mat m(dim * dim, 0.0);
    for (int i = 0; i < dim; ++i) at(m, dim, i, i) = scale;
    return m;
}

inline double trace(const Mat& m, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += at(m, dim, i, i);
    return s;
}

inline double quad_form(const Mat& m, int dim, std::span<const double> v) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += at(m, dim, i, j) * v[i] * v[j];
    return s;
}

inline std::vector<double> mat_vec(const Mat& m, int dim, std::span<const double> v) {
    std::vector<double> out(dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out[i] += at(m, dim, i, j) * v[j];
    return out;
}

// tr(A B) for symmetric same-size matrices
inline double trace_prod(const Mat& a, const Mat& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += at(a, dim, i, j) * at(b, dim, j, i);
    return s;
}

inline double max_abs_asymmetry(const Mat& m, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            s = std::max(s, std::abs(at(m, dim, i, j) - at(m, dim, j, i)));
    return s;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> sym_eigenvalues(Mat m, int dim) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = i + 1; j < dim; ++j) off += at(m, dim, i, j) * at(m, dim, i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < dim; ++p)
            for (int q = p + 1; q < dim; ++q) {
                const double apq = at(m, dim, p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(m, dim, q, q) - at(m, dim, p, p)) / (2.0 * apq);
                const double sgn = theta >= 0.0 ? 1.0 : -1.0;
                const double tt = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tt * tt + 1.0), s = tt * c;
                for (int k = 0; k < dim; ++k) {
                    const double mkp = at(m, dim, k, p), mkq = at(m, dim, k, q);
                    at(m, dim, k, p) = c * mkp - s * mkq;
                    at(m, dim, k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < dim; ++k) {
                    const double mpk = at(m, dim, p, k), mqk = at(m, dim, q, k);
                    at(m, dim, p, k) = c * mpk - s * mqk;
                    at(m, dim, q, k) = s * mpk + c * mqk;
                }
            }
    }
    std::vector<double> ev(dim);
    for (int i = 0; i < dim; ++i) ev[i] = at(m, dim, i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Eigen-decomposition of a symmetric 2x2 matrix [[a, b], [b, c]].
struct Eigen2 {
    double mu1, mu2;              // mu1 <= mu2
    std::array<double, 2> v1, v2; // unit eigenvectors
};

inline Eigen2 eigen_sym_2x2(double a, double b, double c) {
    Eigen2 e;
    const double mean = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    e.mu1 = mean - rad;
    e.mu2 = mean + rad;
    if (std::abs(b) < 1e-14 * (std::abs(a) + std::abs(c) + 1e-300)) {
        if (a <= c) {
            e.v1 = {1.0, 0.0};
            e.v2 = {0.0, 1.0};
        } else {
            e.v1 = {0.0, 1.0};
            e.v2 = {1.0, 0.0};
        }
        return e;
    }
    // eigenvector for mu2 from the dominant column of (M - mu1 I)
    std::array<double, 2> w{b, e.mu2 - a};
    double nw = std::hypot(w[0], w[1]);
    if (nw < 1e-300) {
        w = {e.mu2 - c, b};
        nw = std::hypot(w[0], w[1]);
    }
    e.v2 = {w[0] / nw, w[1] / nw};
    e.v1 = {-e.v2[1], e.v2[0]};
    return e;
}

}  // namespace heislab
