#pragma once

// Rate extraction: ordinary least squares on log-log data over dyadic radii,
// with a grid-floor rule discarding the finest radius when it is unresolved,
// and Richardson extrapolation of first-order sequences.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace heislab {

struct RateFit {
    std::vector<double> radii;   // as supplied, strictly decreasing by factor 2
    std::vector<double> values;
    int discarded = 0;           // finest radii dropped by the grid floor
    double slope = 0.0;
    double intercept = 0.0;      // log(value) = slope * log(r) + intercept
    double r2 = 0.0;
    bool valid = false;
};

// floor_radius: radii below it are within the grid floor (e.g. 4 grid cells);
// only the finest radius may be discarded.
inline RateFit fit_rate(std::vector<double> radii, std::vector<double> values,
                        double floor_radius = 0.0) {
    if (radii.size() != values.size()) throw std::invalid_argument("fit_rate: size mismatch");
    if (radii.size() < 4) throw std::invalid_argument("fit_rate: needs at least 4 dyadic radii");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (std::abs(radii[i + 1] - 0.5 * radii[i]) > 1e-9 * radii[i])
            throw std::invalid_argument("fit_rate: radii must decrease by factor 2");
    RateFit f;
    f.radii = radii;
    f.values = values;
    std::size_t m = radii.size();
    if (radii.back() < floor_radius) {
        --m;
        f.discarded = 1;
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!(values[i] > 0.0)) return f;  // not fittable (flat or signed data)

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(radii[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double nn = static_cast<double>(m);
    const double den = nn * sxx - sx * sx;
    if (den <= 0.0) return f;
    f.slope = (nn * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / nn;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / nn;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(radii[i]), y = std::log(values[i]);
        const double e = y - (f.slope * x + f.intercept);
        ss_res += e * e;
        ss_tot += (y - ybar) * (y - ybar);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.valid = true;
    return f;
}

// Convergence order from errors on dyadically refined grids: mean of the
// pairwise log2 ratios.
inline double observed_order(const std::vector<double>& errors) {
    if (errors.size() < 2) throw std::invalid_argument("observed_order: needs >= 2 levels");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) s += std::log2(errors[i] / errors[i + 1]);
    return s / (errors.size() - 1);
}

struct RichardsonResult {
    double limit = 0.0;
    double last_gap = 0.0;  // |last two extrapolants|
    bool cauchy = false;
};

// values v_k at parameters t_k halving; assumes a leading O(t) error term.
inline RichardsonResult richardson_first_order(const std::vector<double>& v,
                                               double cauchy_tol = 1e-3) {
    if (v.size() < 3) throw std::invalid_argument("richardson: needs >= 3 values");
    std::vector<double> r(v.size() - 1);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) r[i] = 2.0 * v[i + 1] - v[i];
    RichardsonResult out;
    out.limit = r.back();
    out.last_gap = std::abs(r[r.size() - 1] - r[r.size() - 2]);
    const double scale = std::max({1e-12, std::abs(r.back()), std::abs(v.back())});
    out.cauchy = out.last_gap <= cauchy_tol * scale;
    return out;
}

}  // namespace heislab
