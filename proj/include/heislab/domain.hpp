#pragma once

// Geometric domains used by the experiments: membership tests, boundary
// classification with a characteristic flag, exterior balls for cones, and a
// flat-text serialization (schema in docs/formats.md).

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "heislab/group.hpp"

namespace heislab {

enum class Region { Interior, Boundary, Exterior };
enum class CharFlag { No, Yes, Unknown };

struct Classification {
    Region region;
    CharFlag characteristic;
};

struct Domain;

struct GaugeBall {
    GroupPoint center;
    double radius;
};
struct GaugeAnnulus {  // {r_inner < d(center, z) < r_outer}
    GroupPoint center;
    double r_inner;
    double r_outer;
};
struct HalfSpace {  // {t > 0}
    int n = 1;
};
struct Paraboloid {  // {t > M |x|^2}
    int n = 1;
    double M = 0.0;
};
struct Rectangle {  // {0 < t < delta r^2, |x| < r}
    int n = 1;
    double r = 1.0;
    double delta = 0.1;
};
struct Box {  // axis-aligned product of open intervals in R^{2n+1}
    std::vector<double> lo;  // length 2n+1, t last
    std::vector<double> hi;
};
struct Intersection {
    std::vector<Domain> parts;
};

struct Domain {
    std::variant<GaugeBall, GaugeAnnulus, HalfSpace, Paraboloid, Rectangle, Box, Intersection> kind;

    int n() const;
    bool contains(const GroupPoint& z) const;
    Classification classify(const GroupPoint& z, double tol = 1e-9,
                            const GroupPoint* p0 = nullptr) const;
};

inline Domain make_gauge_ball(GroupPoint c, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("gauge_ball: radius must be positive");
    return Domain{GaugeBall{std::move(c), r}};
}
inline Domain make_gauge_annulus(GroupPoint c, double ri, double ro) {
    if (!(0.0 < ri && ri < ro)) throw std::invalid_argument("gauge_annulus: need 0 < r_inner < r_outer");
    return Domain{GaugeAnnulus{std::move(c), ri, ro}};
}
inline Domain make_half_space(int n = 1) { return Domain{HalfSpace{n}}; }
inline Domain make_paraboloid(double M, int n = 1) { return Domain{Paraboloid{n, M}}; }
inline Domain make_rectangle(double r, double delta, int n = 1) {
    if (!(delta > 0.0 && delta < 1.0) || !(r > 0.0))
        throw std::invalid_argument("rectangle: need delta in (0,1) and r > 0");
    return Domain{Rectangle{n, r, delta}};
}
inline Domain make_box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size() || lo.size() % 2 == 0)
        throw std::invalid_argument("box: lo/hi must both have length 2n+1");
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("box: lo < hi required");
    return Domain{Box{std::move(lo), std::move(hi)}};
}
inline Domain make_intersection(std::vector<Domain> parts) {
    if (parts.empty()) throw std::invalid_argument("intersection: needs at least one part");
    return Domain{Intersection{std::move(parts)}};
}

inline int Domain::n() const {
    return std::visit(
        [](const auto& k) -> int {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, GaugeBall>) return k.center.n();
            else if constexpr (std::is_same_v<T, GaugeAnnulus>) return k.center.n();
            else if constexpr (std::is_same_v<T, HalfSpace>) return k.n;
            else if constexpr (std::is_same_v<T, Paraboloid>) return k.n;
            else if constexpr (std::is_same_v<T, Rectangle>) return k.n;
            else if constexpr (std::is_same_v<T, Box>) return static_cast<int>(k.lo.size() / 2);
            else return k.parts.front().n();
        },
        kind);
}

inline bool Domain::contains(const GroupPoint& z) const {
    return std::visit(
        [&](const auto& k) -> bool {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, GaugeBall>) {
                return dist(k.center, z) < k.radius;
            } else if constexpr (std::is_same_v<T, GaugeAnnulus>) {
                const double d = dist(k.center, z);
                return k.r_inner < d && d < k.r_outer;
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
                return z.t > 0.0;
            } else if constexpr (std::is_same_v<T, Paraboloid>) {
                return z.t > k.M * norm_sq(z.x);
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return z.t > 0.0 && z.t < k.delta * k.r * k.r &&
                       norm_sq(z.x) < k.r * k.r;
            } else if constexpr (std::is_same_v<T, Box>) {
                const std::size_t d = k.lo.size();
                for (std::size_t i = 0; i + 1 < d; ++i)
                    if (!(z.x[i] > k.lo[i] && z.x[i] < k.hi[i])) return false;
                return z.t > k.lo[d - 1] && z.t < k.hi[d - 1];
            } else {
                for (const auto& p : k.parts)
                    if (!p.contains(z)) return false;
                return true;
            }
        },
        kind);
}

namespace detail {

// |grad_X of the gauge from pole p|^2 at z equals |x - p_x|^2 / rho^2(p^{-1} o z);
// it vanishes exactly at the two poles of a gauge sphere.
inline CharFlag char_flag_from_pole(const GroupPoint& p, const GroupPoint& z, double tol) {
    double s = 0.0;
    for (int i = 0; i < 2 * z.n(); ++i) {
        const double d = z.x[i] - p.x[i];
        s += d * d;
    }
    return s <= tol * tol ? CharFlag::Yes : CharFlag::No;
}

}  // namespace detail

inline Classification Domain::classify(const GroupPoint& z, double tol, const GroupPoint* p0) const {
    if (p0) {
        // Caller supplied a touching-ball center: the characteristic flag is
        // taken from the weight |grad_X rho(p0^{-1} o z)|^2.
        Classification c = classify(z, tol, nullptr);
        c.characteristic = detail::char_flag_from_pole(*p0, z, tol);
        return c;
    }
    return std::visit(
        [&](const auto& k) -> Classification {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, GaugeBall>) {
                const double d = dist(k.center, z);
                if (d < k.radius - tol) return {Region::Interior, CharFlag::No};
                if (d > k.radius + tol) return {Region::Exterior, CharFlag::No};
                return {Region::Boundary, detail::char_flag_from_pole(k.center, z, tol)};
            } else if constexpr (std::is_same_v<T, GaugeAnnulus>) {
                const double d = dist(k.center, z);
                if (d < k.r_inner - tol || d > k.r_outer + tol)
                    return {Region::Exterior, CharFlag::No};
                if (d > k.r_inner + tol && d < k.r_outer - tol)
                    return {Region::Interior, CharFlag::No};
                return {Region::Boundary, detail::char_flag_from_pole(k.center, z, tol)};
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
                if (z.t > tol) return {Region::Interior, CharFlag::No};
                if (z.t < -tol) return {Region::Exterior, CharFlag::No};
                const double xn = std::sqrt(norm_sq(z.x));
                return {Region::Boundary, xn <= tol ? CharFlag::Yes : CharFlag::No};
            } else if constexpr (std::is_same_v<T, Paraboloid>) {
                const double f = z.t - k.M * norm_sq(z.x);
                if (f > tol) return {Region::Interior, CharFlag::No};
                if (f < -tol) return {Region::Exterior, CharFlag::No};
                const double xn = std::sqrt(norm_sq(z.x));
                return {Region::Boundary, xn <= tol ? CharFlag::Yes : CharFlag::No};
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                const double top = k.delta * k.r * k.r;
                const double xn = std::sqrt(norm_sq(z.x));
                const bool in_x = xn < k.r - tol, in_t = z.t > tol && z.t < top - tol;
                if (in_x && in_t) return {Region::Interior, CharFlag::No};
                if (xn > k.r + tol || z.t < -tol || z.t > top + tol)
                    return {Region::Exterior, CharFlag::No};
                const bool on_tface = std::abs(z.t) <= tol || std::abs(z.t - top) <= tol;
                return {Region::Boundary,
                        on_tface && xn <= tol ? CharFlag::Yes : CharFlag::No};
            } else if constexpr (std::is_same_v<T, Box>) {
                const std::size_t d = k.lo.size();
                bool boundary = false;
                for (std::size_t i = 0; i < d; ++i) {
                    const double v = (i + 1 < d) ? z.x[i] : z.t;
                    if (v < k.lo[i] - tol || v > k.hi[i] + tol)
                        return {Region::Exterior, CharFlag::No};
                    if (std::abs(v - k.lo[i]) <= tol || std::abs(v - k.hi[i]) <= tol)
                        boundary = true;
                }
                if (!boundary) return {Region::Interior, CharFlag::No};
                const bool on_tface = std::abs(z.t - k.lo[d - 1]) <= tol ||
                                      std::abs(z.t - k.hi[d - 1]) <= tol;
                const double xn = std::sqrt(norm_sq(z.x));
                return {Region::Boundary,
                        on_tface && xn <= tol ? CharFlag::Yes : CharFlag::No};
            } else {
                bool any_boundary = false;
                for (const auto& p : k.parts) {
                    const Classification c = p.classify(z, tol, nullptr);
                    if (c.region == Region::Exterior) return {Region::Exterior, CharFlag::Unknown};
                    if (c.region == Region::Boundary) any_boundary = true;
                }
                if (any_boundary) return {Region::Boundary, CharFlag::Unknown};
                return {Region::Interior, CharFlag::Unknown};
            }
        },
        kind);
}

// ---- exterior ball for a truncated cone ----
//
// A truncated open cone with vertex z0 is z0 o C0 with C0 dilation-invariant
// for r in (0,1). Given an interior gauge ball B_thetabar(zbar) of C0, each
// scale r <= thetabar + rho(zbar) admits a ball of radius theta*r inside the
// cone and inside B_r(z0).

struct ConeSpec {
    GroupPoint vertex;     // z0
    GroupPoint witness;    // zbar, interior point of the cone moved to the origin
    double theta_bar;      // radius of the witness ball
};

struct ExteriorBall {
    GroupPoint center;
    double radius;
};

inline ExteriorBall exterior_ball_for_cone(const ConeSpec& cone, double r) {
    if (!(cone.theta_bar > 0.0)) throw std::invalid_argument("cone: theta_bar must be positive");
    const double rb = rho(cone.witness);
    if (!(rb > 0.0)) throw std::invalid_argument("cone: witness must differ from the vertex");
    const double span = cone.theta_bar + rb;
    if (!(r > 0.0 && r <= span))
        throw std::invalid_argument("exterior_ball_for_cone: r out of range (0, theta_bar + rho(witness)]");
    const double theta = cone.theta_bar / span;
    ExteriorBall out;
    out.center = compose(cone.vertex, dilate(r / span, cone.witness));
    out.radius = theta * r;
    return out;
}

// Sampling certificate: every sampled boundary point of the candidate ball
// must satisfy d(z0, p) <= r (triangle-inequality containment).
inline bool check_ball_in_ball(const ExteriorBall& small, const GroupPoint& big_center,
                               double big_radius, int samples = 10000, double rel_tol = 1e-12) {
    for (int i = 0; i < samples; ++i) {
        GroupPoint s = halton_sphere_point(static_cast<std::uint64_t>(i), small.center.n());
        GroupPoint p = compose(small.center, dilate(small.radius, s));
        if (dist(big_center, p) > big_radius * (1.0 + rel_tol)) return false;
    }
    return true;
}

// ---- flat-text serialization ----

inline std::string domain_to_config(const Domain& d);

namespace detail {

inline std::string join(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    return os.str();
}

inline std::string point_to_string(const GroupPoint& z) {
    std::vector<double> all = z.x;
    all.push_back(z.t);
    return join(all);
}

}  // namespace detail

inline std::string domain_to_config(const Domain& d) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, GaugeBall>) {
                os << "kind = gauge_ball\ncenter = " << detail::point_to_string(k.center)
                   << "\nradius = " << k.radius << "\n";
            } else if constexpr (std::is_same_v<T, GaugeAnnulus>) {
                os << "kind = gauge_annulus\ncenter = " << detail::point_to_string(k.center)
                   << "\nr_inner = " << k.r_inner << "\nr_outer = " << k.r_outer << "\n";
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
                os << "kind = half_space\nn = " << k.n << "\n";
            } else if constexpr (std::is_same_v<T, Paraboloid>) {
                os << "kind = paraboloid\nn = " << k.n << "\nM = " << k.M << "\n";
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                os << "kind = rectangle\nn = " << k.n << "\nr = " << k.r
                   << "\ndelta = " << k.delta << "\n";
            } else if constexpr (std::is_same_v<T, Box>) {
                os << "kind = box\nlo = " << detail::join(k.lo) << "\nhi = " << detail::join(k.hi)
                   << "\n";
            } else {
                os << "kind = intersection\nparts = " << k.parts.size() << "\n";
                for (std::size_t i = 0; i < k.parts.size(); ++i) {
                    std::istringstream in(domain_to_config(k.parts[i]));
                    std::string line;
                    while (std::getline(in, line)) os << "part" << i << "." << line << "\n";
                }
            }
        },
        d.kind);
    return os.str();
}

}  // namespace heislab
