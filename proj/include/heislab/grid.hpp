#pragma once

// Axis-aligned grids over boxes in R^3 (n = 1) with per-node classification
// against an analytic domain. Spacing is (h_x, h_x, h_t); the default
// h_t ~ h_x^2 matches the degree-2 homogeneity of the vertical coordinate.
// The grid is padded so that every directional stencil foot of an interior
// node lands on classified nodes; nodes outside the domain but within stencil
// reach of it become Dirichlet carriers, the remainder is exterior.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "heislab/calculus.hpp"
#include "heislab/domain.hpp"

namespace heislab {

enum class NodeClass : std::uint8_t { Interior = 0, Dirichlet = 1, Exterior = 2 };

struct GridParams {
    std::array<double, 3> lo{-1.0, -1.0, -1.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    int nx = 33;                      // nodes along the first x axis of the core box
    double ht = 0.0;                  // explicit t spacing; 0 selects t_factor * hx^2
    double t_factor = 1.0;
    double oblique_step = 0.0;        // directional step for oblique directions;
                                      // 0 selects max(sqrt(hx), sqrt(ht))
    bool axis_only = false;           // coefficient eigenframes are axis-aligned:
                                      // pad and classify for axis steps only
    double classify_tol = 0.0;        // membership tolerance; 0 selects 1e-12 * scale
};

struct GridDomain {
    std::array<double, 3> lo{};  // padded box
    std::array<double, 3> hi{};
    int nx = 0, ny = 0, nt = 0;
    double hx = 0.0, ht = 0.0;
    double step_axis = 0.0;     // directional step for axis-aligned eigendirections
    double step_oblique = 0.0;  // directional step otherwise
    int reach_x = 0, reach_t = 0;
    std::vector<NodeClass> cls;

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny * nt; }
    int index(int i, int j, int k) const { return (k * ny + j) * nx + i; }
    GroupPoint point(int i, int j, int k) const {
        return pt(lo[0] + i * hx, lo[1] + j * hx, lo[2] + k * ht);
    }
    GroupPoint point(int id) const {
        const int i = id % nx, j = (id / nx) % ny, k = id / (nx * ny);
        return point(i, j, k);
    }
    NodeClass node_class(int id) const { return cls[id]; }

    int count(NodeClass c) const {
        int n = 0;
        for (auto v : cls) n += (v == c);
        return n;
    }
};

struct DiscreteField {
    std::shared_ptr<const GridDomain> grid;
    std::vector<double> values;  // per node; NaN at exterior nodes

    double operator[](int id) const { return values[id]; }
};

namespace detail {

// 1-D sliding-window dilation along one axis: out[i] = OR of in[i-w .. i+w].
inline void dilate_axis(std::vector<std::uint8_t>& mark, int nx, int ny, int nt, int axis, int w) {
    if (w <= 0) return;
    std::vector<std::uint8_t> out(mark.size(), 0);
    const int dims[3] = {nx, ny, nt};
    const int len = dims[axis];
    auto idx = [&](int a, int b, int c) {
        // a runs along 'axis', (b, c) are the two other axes in order
        switch (axis) {
            case 0: return (c * ny + b) * nx + a;
            case 1: return (c * ny + a) * nx + b;
            default: return (a * ny + c) * nx + b;
        }
    };
    const int ob = (axis == 0) ? ny : nx;
    const int oc = (axis == 2) ? ny : nt;
    for (int c = 0; c < oc; ++c)
        for (int b = 0; b < ob; ++b) {
            int run = 0;  // marked nodes in the current window
            for (int a = 0; a < std::min(w, len); ++a) run += mark[idx(a, b, c)];
            for (int a = 0; a < len; ++a) {
                if (a + w < len) run += mark[idx(a + w, b, c)];
                if (a - w - 1 >= 0) run -= mark[idx(a - w - 1, b, c)];
                out[idx(a, b, c)] = run > 0;
            }
        }
    mark.swap(out);
}

}  // namespace detail

inline GridDomain make_grid(const Domain& domain, const GridParams& p) {
    if (domain.n() != 1) throw std::invalid_argument("make_grid: n = 1 grids only");
    if (p.nx < 5) throw std::invalid_argument("make_grid: nx too small");
    GridDomain g;
    g.hx = (p.hi[0] - p.lo[0]) / (p.nx - 1);
    g.ht = p.ht > 0.0 ? p.ht : p.t_factor * g.hx * g.hx;

    // directional steps: axis-aligned feet snap to x columns, oblique feet use
    // a wide step so the interpolation error stays subordinate
    const double s_axis_raw = std::max(g.hx, std::sqrt(g.ht));
    g.step_axis = g.hx * std::max(1.0, std::round(s_axis_raw / g.hx));
    g.step_oblique =
        p.oblique_step > 0.0 ? p.oblique_step : std::max(std::sqrt(g.hx), std::sqrt(g.ht));
    const double s_max = p.axis_only ? g.step_axis : std::max(g.step_axis, g.step_oblique);

    // pad so feet and their interpolation cells stay on the grid
    const double pad_x = s_max + 2.0 * g.hx;
    const double xmax1 = std::max(std::abs(p.lo[0] - pad_x), std::abs(p.hi[0] + pad_x));
    const double xmax2 = std::max(std::abs(p.lo[1] - pad_x), std::abs(p.hi[1] + pad_x));
    const double xmax = std::hypot(xmax1, xmax2);
    const double pad_t = 2.0 * s_max * xmax + 2.0 * g.ht;

    const int ex = static_cast<int>(std::ceil(pad_x / g.hx));
    const int et = static_cast<int>(std::ceil(pad_t / g.ht));
    g.lo[0] = p.lo[0] - ex * g.hx;
    g.hi[0] = p.hi[0] + ex * g.hx;
    g.nx = p.nx + 2 * ex;
    const int ny_core = static_cast<int>(std::round((p.hi[1] - p.lo[1]) / g.hx)) + 1;
    g.lo[1] = p.lo[1] - ex * g.hx;
    g.hi[1] = p.lo[1] + (ny_core - 1) * g.hx + ex * g.hx;
    g.ny = ny_core + 2 * ex;
    const int nt_core = static_cast<int>(std::round((p.hi[2] - p.lo[2]) / g.ht)) + 1;
    g.lo[2] = p.lo[2] - et * g.ht;
    g.hi[2] = p.lo[2] + (nt_core - 1) * g.ht + et * g.ht;
    g.nt = nt_core + 2 * et;

    g.reach_x = static_cast<int>(std::ceil(s_max / g.hx)) + 2;
    g.reach_t = static_cast<int>(std::ceil(2.0 * s_max * xmax / g.ht)) + 2;

    const double tol = p.classify_tol > 0.0 ? p.classify_tol : 1e-12 * (1.0 + xmax);

    std::vector<std::uint8_t> inside(g.size(), 0);
    for (int k = 0; k < g.nt; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                // interior only if strictly inside the core box and the domain;
                // the grid solves on (domain intersect open core box)
                const GroupPoint z = g.point(i, j, k);
                const bool in_core = z.x[0] > p.lo[0] + tol && z.x[0] < p.hi[0] - tol &&
                                     z.x[1] > p.lo[1] + tol && z.x[1] < p.hi[1] - tol &&
                                     z.t > p.lo[2] + tol && z.t < p.hi[2] - tol;
                inside[g.index(i, j, k)] = in_core && domain.contains(z);
            }

    std::vector<std::uint8_t> reach = inside;
    detail::dilate_axis(reach, g.nx, g.ny, g.nt, 0, g.reach_x);
    detail::dilate_axis(reach, g.nx, g.ny, g.nt, 1, g.reach_x);
    detail::dilate_axis(reach, g.nx, g.ny, g.nt, 2, g.reach_t);

    g.cls.resize(g.size());
    for (std::size_t id = 0; id < g.size(); ++id)
        g.cls[id] = inside[id] ? NodeClass::Interior
                               : (reach[id] ? NodeClass::Dirichlet : NodeClass::Exterior);
    return g;
}

// Evaluate a scalar field at interior + Dirichlet nodes (NaN outside).
inline DiscreteField sample_field(std::shared_ptr<const GridDomain> grid, const ScalarField& f) {
    DiscreteField out;
    out.grid = grid;
    out.values.assign(grid->size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t id = 0; id < grid->size(); ++id)
        if (grid->cls[id] != NodeClass::Exterior)
            out.values[id] = f.value(grid->point(static_cast<int>(id)));
    return out;
}

struct NodeStats {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    int count = 0;
    double osc() const { return count ? max - min : 0.0; }
};

// min/max over interior nodes satisfying a predicate on the node point.
template <typename Pred>
inline NodeStats interior_stats(const DiscreteField& u, Pred&& pred) {
    NodeStats s;
    const GridDomain& g = *u.grid;
    for (std::size_t id = 0; id < g.size(); ++id) {
        if (g.cls[id] != NodeClass::Interior) continue;
        const GroupPoint z = g.point(static_cast<int>(id));
        if (!pred(z)) continue;
        const double v = u.values[id];
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        ++s.count;
    }
    return s;
}

inline NodeStats stats_in_ball(const DiscreteField& u, const GroupPoint& center, double r) {
    return interior_stats(u, [&](const GroupPoint& z) { return dist(center, z) < r; });
}

// Fraction of grid nodes of B_r(center) lying in the marked set (node counting).
template <typename Pred>
inline double ball_fraction(const GridDomain& g, const GroupPoint& center, double r, Pred&& in_set) {
    long total = 0, hit = 0;
    for (std::size_t id = 0; id < g.size(); ++id) {
        const GroupPoint z = g.point(static_cast<int>(id));
        if (dist(center, z) >= r) continue;
        ++total;
        if (in_set(z)) ++hit;
    }
    return total ? static_cast<double>(hit) / total : 0.0;
}

// Flat CSV snapshot: node indices, coordinates, classification, value.
inline void write_grid_csv(const DiscreteField& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_grid_csv: cannot open " + path);
    out << "i,j,k,x1,x2,t,class,value\n";
    out.precision(17);
    const GridDomain& g = *u.grid;
    const char* names[3] = {"interior", "dirichlet", "exterior"};
    for (int k = 0; k < g.nt; ++k)
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int id = g.index(i, j, k);
                const GroupPoint z = g.point(i, j, k);
                out << i << ',' << j << ',' << k << ',' << z.x[0] << ',' << z.x[1] << ',' << z.t
                    << ',' << names[static_cast<int>(g.cls[id])] << ',' << u.values[id] << "\n";
            }
}

}  // namespace heislab
