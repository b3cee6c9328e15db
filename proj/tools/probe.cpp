// scratch calibration probe (not part of the build)
#include <chrono>
#include <cstdio>

#include "heislab/catalog.hpp"
#include "heislab/solver.hpp"

using namespace heislab;
using clk = std::chrono::steady_clock;

static double err_vs(const DiscreteField& u, const ScalarField& exact) {
    double e = 0.0;
    const GridDomain& g = *u.grid;
    for (std::size_t id = 0; id < g.size(); ++id)
        if (g.cls[id] == NodeClass::Interior)
            e = std::max(e, std::abs(u.values[id] - exact.value(g.point((int)id))));
    return e;
}

int main() {
    // --- annulus ladder ---
    {
        ScalarField fund = field_fundamental(1);
        Domain ann = make_gauge_annulus(GroupPoint::zero(1), 0.5, 1.2);
        std::printf("annulus (isotropic ht)\n");
        for (int nx : {17, 33, 65}) {
            GridParams p;
            p.lo = {-1.25, -1.25, -1.6};
            p.hi = {1.25, 1.25, 1.6};
            p.nx = nx;
            p.ht = 2.5 / (nx - 1);
            auto g = std::make_shared<const GridDomain>(make_grid(ann, p));
            auto t0 = clk::now();
            StencilSystem sys = discretize(coeff_identity(1), g);
            SolveInfo info;
            DiscreteField u = solve(sys, field_constant(0.0, 1), fund, {}, &info);
            auto t1 = clk::now();
            std::printf("  nx=%3d grid=%dx%dx%d unk=%zu iters=%d err=%.3e  %.2fs\n", nx, g->nx,
                        g->ny, g->nt, sys.interior.size(), info.iterations, err_vs(u, fund),
                        std::chrono::duration<double>(t1 - t0).count());
        }
    }
    // --- manufactured ladder on a half-space box ---
    {
        const double q = 0.75, eps = 1.0;
        ScalarField u = field_u_eps(q, eps, 1);
        ScalarField f = field_u_eps_source(q, eps, 1);
        Domain dom = make_box({-1.0, -1.0, 0.0}, {1.0, 1.0, 0.12});
        std::printf("manufactured (parabolic ht, t_factor 2)\n");
        for (int nx : {17, 33, 65}) {
            GridParams p;
            p.lo = {-1.0, -1.0, 0.0};
            p.hi = {1.0, 1.0, 0.12};
            p.nx = nx;
            p.t_factor = 2.0;
            auto g = std::make_shared<const GridDomain>(make_grid(dom, p));
            auto t0 = clk::now();
            StencilSystem sys = discretize(coeff_identity(1), g);
            SolveInfo info;
            DiscreteField uh = solve(sys, f, u, {}, &info);
            auto t1 = clk::now();
            std::printf("  nx=%3d grid=%dx%dx%d unk=%zu iters=%d err=%.3e  %.2fs\n", nx, g->nx,
                        g->ny, g->nt, sys.interior.size(), info.iterations, err_vs(uh, u),
                        std::chrono::duration<double>(t1 - t0).count());
        }
    }
    // --- rotating coefficients on a ball: iteration cost probe ---
    {
        Domain ball = make_gauge_ball(GroupPoint::zero(1), 1.0);
        std::printf("rotating on ball (linear ht)\n");
        for (int nx : {33, 65, 81}) {
            GridParams p;
            p.lo = {-1.05, -1.05, -1.1};
            p.hi = {1.05, 1.05, 1.1};
            p.nx = nx;
            p.ht = 2.1 / (nx - 1);
            auto g = std::make_shared<const GridDomain>(make_grid(ball, p));
            auto t0 = clk::now();
            StencilSystem sys = discretize(coeff_rotating(1.0, 1.3, 2.0), g);
            SolveInfo info;
            ScalarField data;
            data.n = 1;
            data.value = [](const GroupPoint& z) {
                return 2.0 + std::sin(3.0 * z.x[0]) + std::cos(2.0 * z.x[1]);
            };
            DiscreteField uh = solve(sys, field_constant(0.0, 1), data, {}, &info);
            auto t1 = clk::now();
            auto st = stats_in_ball(uh, GroupPoint::zero(1), 0.25);
            std::printf("  nx=%3d grid=%dx%dx%d unk=%zu iters=%d ratio=%.4f  %.2fs\n", nx, g->nx,
                        g->ny, g->nt, sys.interior.size(), info.iterations, st.max / st.min,
                        std::chrono::duration<double>(t1 - t0).count());
        }
    }
    return 0;
}
