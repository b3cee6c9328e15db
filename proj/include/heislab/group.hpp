#pragma once

// Heisenberg group primitives: composition, dilations, gauge norm and metric,
// homogeneous ball volumes, and deterministic low-discrepancy sampling.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heislab {

// A point z = (x, t) of H^n with x in R^{2n} and vertical coordinate t.
struct GroupPoint {
    std::vector<double> x;
    double t = 0.0;

    GroupPoint() = default;
    GroupPoint(std::vector<double> xs, double tv) : x(std::move(xs)), t(tv) {
        if (x.size() % 2 != 0)
            throw std::invalid_argument("GroupPoint: horizontal part must have even length");
    }
    static GroupPoint zero(int n) { return GroupPoint(std::vector<double>(2 * n, 0.0), 0.0); }
    int n() const { return static_cast<int>(x.size() / 2); }
};

// Shorthand for the n = 1 case used by the grid solver.
inline GroupPoint pt(double x1, double x2, double t) { return GroupPoint({x1, x2}, t); }

inline int homogeneous_dimension(int n) { return 2 * n + 2; }

// out = Jx for the standard 2n x 2n symplectic block matrix [[0, -I], [I, 0]].
inline void symplectic_apply(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size() / 2;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = -x[j + n];
        out[j + n] = x[j];
    }
}

// The standard symplectic structure on R^{2n}.
struct Symplectic {
    int n = 1;

    explicit Symplectic(int nn) : n(nn) {
        if (n <= 0) throw std::invalid_argument("Symplectic: n must be positive");
    }
    std::vector<double> apply(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != 2 * n)
            throw std::invalid_argument("Symplectic: dimension mismatch");
        std::vector<double> out(2 * n);
        symplectic_apply(x, out);
        return out;
    }
    // Dense matrix, row-major.
    std::vector<double> matrix() const {
        std::vector<double> m(4 * n * n, 0.0);
        for (int j = 0; j < n; ++j) {
            m[j * 2 * n + (j + n)] = -1.0;
            m[(j + n) * 2 * n + j] = 1.0;
        }
        return m;
    }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

// ---- raw kernels (no allocation, used by quadrature and the grid solver) ----

inline double rho_raw(std::span<const double> x, double t) {
    const double xs = norm_sq(x);
    return std::pow(xs * xs + t * t, 0.25);
}

// w = u o v
inline void compose_raw(std::span<const double> ux, double ut, std::span<const double> vx,
                        double vt, std::span<double> wx, double& wt) {
    const std::size_t n = ux.size() / 2;
    double cross = 0.0;  // <J ux, vx>
    for (std::size_t j = 0; j < n; ++j)
        cross += -ux[j + n] * vx[j] + ux[j] * vx[j + n];
    for (std::size_t i = 0; i < ux.size(); ++i) wx[i] = ux[i] + vx[i];
    wt = ut + vt + 2.0 * cross;
}

// d(a, b) = rho(a^{-1} o b), left-invariant
inline double dist_raw(std::span<const double> ax, double at, std::span<const double> bx,
                       double bt) {
    const std::size_t n = ax.size() / 2;
    double xs = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double d = bx[i] - ax[i];
        xs += d * d;
    }
    for (std::size_t j = 0; j < n; ++j)
        cross += ax[j] * bx[j + n] - ax[j + n] * bx[j];  // <J ax, bx>
    const double tt = bt - at - 2.0 * cross;
    return std::pow(xs * xs + tt * tt, 0.25);
}

// ---- value-level operations ----

inline void check_same_n(const GroupPoint& z, const GroupPoint& w, const char* where) {
    if (z.n() != w.n()) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

inline GroupPoint compose(const GroupPoint& z, const GroupPoint& w) {
    check_same_n(z, w, "compose");
    GroupPoint out = GroupPoint::zero(z.n());
    compose_raw(z.x, z.t, w.x, w.t, out.x, out.t);
    return out;
}

inline GroupPoint inverse(const GroupPoint& z) {
    GroupPoint out = z;
    for (double& v : out.x) v = -v;
    out.t = -out.t;
    return out;
}

inline GroupPoint dilate(double r, const GroupPoint& z) {
    if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
    GroupPoint out = z;
    for (double& v : out.x) v *= r;
    out.t *= r * r;
    return out;
}

inline double rho(const GroupPoint& z) { return rho_raw(z.x, z.t); }

inline double dist(const GroupPoint& z, const GroupPoint& w) {
    check_same_n(z, w, "dist");
    return dist_raw(z.x, z.t, w.x, w.t);
}

// ---- gauge ball volume ----
//
// |B_r| = r^Q |B_1| with Q = 2n+2. |B_1| is computed once per n by midpoint
// quadrature of the indicator of {|x|^4 + t^2 < 1} over [-1,1]^{2n} x [-1,1]
// and cached (in memory, and on disk under $HEISLAB_CACHE when set).

namespace detail {

inline double unit_ball_volume_quadrature(int n, int resolution) {
    const int dim = 2 * n + 1;
    const double h = 2.0 / resolution;
    std::vector<int> idx(dim, 0);
    std::vector<double> p(dim);
    double count = 0.0;
    // odometer loop over the tensor grid of cell midpoints
    while (true) {
        double xs = 0.0;
        for (int i = 0; i < dim - 1; ++i) {
            p[i] = -1.0 + (idx[i] + 0.5) * h;
            xs += p[i] * p[i];
        }
        const double t = -1.0 + (idx[dim - 1] + 0.5) * h;
        if (xs * xs + t * t < 1.0) count += 1.0;
        int k = 0;
        while (k < dim && ++idx[k] == resolution) idx[k++] = 0;
        if (k == dim) break;
    }
    double cell = 1.0;
    for (int i = 0; i < dim; ++i) cell *= h;
    return count * cell;
}

inline std::filesystem::path cache_dir() {
    if (const char* env = std::getenv("HEISLAB_CACHE")) return std::filesystem::path(env);
    return {};
}

}  // namespace detail

inline double unit_ball_volume(int n, int resolution = 320) {
    if (n <= 0) throw std::invalid_argument("unit_ball_volume: n must be positive");
    if (n > 1 && resolution > 64) resolution = 64;  // 5-D and higher grids
    static std::mutex mu;
    static std::map<std::pair<int, int>, double> cache;
    std::scoped_lock lock(mu);
    auto key = std::make_pair(n, resolution);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    const auto dir = detail::cache_dir();
    std::filesystem::path file;
    if (!dir.empty()) {
        file = dir / ("vol_b1_n" + std::to_string(n) + "_res" + std::to_string(resolution) + ".txt");
        std::ifstream in(file);
        double v;
        if (in >> v) {
            cache[key] = v;
            return v;
        }
    }
    const double v = detail::unit_ball_volume_quadrature(n, resolution);
    if (!file.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        std::ofstream out(file);
        out.precision(17);
        out << v << "\n";
    }
    cache[key] = v;
    return v;
}

inline double ball_volume(double r, int n, int resolution = 320) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_volume: r must be positive");
    return std::pow(r, homogeneous_dimension(n)) * unit_ball_volume(n, resolution);
}

// ---- deterministic sampling ----

// splitmix64: tiny fully-specified generator so outputs are identical across
// platforms (std:: distributions are not pinned by the standard).
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed = 0) : state(seed) {}
    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline double halton(std::uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

// Low-discrepancy points in the gauge box [-w,w]^{2n} x [-w^2, w^2] around c.
inline GroupPoint halton_box_point(std::uint64_t index, int n, double w = 1.0,
                                   const GroupPoint* c = nullptr) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    GroupPoint z = GroupPoint::zero(n);
    for (int i = 0; i < 2 * n; ++i)
        z.x[i] = w * (2.0 * halton(index + 1, primes[i]) - 1.0);
    z.t = w * w * (2.0 * halton(index + 1, primes[2 * n]) - 1.0);
    if (c) z = compose(*c, z);
    return z;
}

// Point on the unit gauge sphere {rho = 1} via radial normalization.
inline GroupPoint halton_sphere_point(std::uint64_t index, int n) {
    GroupPoint z = halton_box_point(index, n);
    double r = rho(z);
    while (r < 1e-8) {
        index += 7919;
        z = halton_box_point(index, n);
        r = rho(z);
    }
    return dilate(1.0 / r, z);
}

}  // namespace heislab
