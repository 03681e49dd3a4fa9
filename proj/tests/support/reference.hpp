#pragma once

// Independent reference computations for the test suites. Nothing here uses the
// library: closed forms are written out by hand and the numerics are plain
// textbook schemes on explicitly given CDFs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace reference {

using Fn = std::function<double(double)>;

inline double bisect_inverse(const Fn& cdf, double t) {
    if (t <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) >= t) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

inline double uniform_cdf(double a, double x) { return std::clamp((x - a) / (1.0 - a), 0.0, 1.0); }
inline double uniform_inv(double a, double t) { return a + (1.0 - a) * t; }

inline double beta22_cdf(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * (3.0 - 2.0 * x);
}

struct OdeSolution {
    std::vector<double> q;  // q[i] = Q(i / n)
    double integral = 0.0;  // Simpson rule on q
};

/// Classical RK4 for Q' = (F^-(t) - Q) / (1 - F(Q)), Q(0) = 0, n steps (n even).
inline OdeSolution minimax_rk4(const Fn& cdf, const Fn& inv, int n) {
    auto rhs = [&](double t, double x) {
        const double denom = std::max(1.0 - cdf(x), 1e-15);
        return (inv(t) - x) / denom;
    };
    OdeSolution out;
    out.q.resize(static_cast<std::size_t>(n) + 1);
    const double h = 1.0 / n;
    double x = 0.0;
    out.q[0] = x;
    for (int i = 0; i < n; ++i) {
        const double t = i * h;
        const double k1 = rhs(t, x);
        const double k2 = rhs(t + h / 2, x + h / 2 * k1);
        const double k3 = rhs(t + h / 2, x + h / 2 * k2);
        const double k4 = rhs(t + h, x + h * k3);
        x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        out.q[static_cast<std::size_t>(i) + 1] = x;
    }
    double s = out.q.front() + out.q.back();
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * out.q[static_cast<std::size_t>(i)];
    out.integral = s * h / 3.0;
    return out;
}

/**
 * Worst case over a grid of deterministic highest bids of the regret of a
 * deterministic bid map b(v), with values discretised at quantile midpoints.
 * Ties go to the buyer.
 */
inline double brute_worst_regret(const Fn& inv, const Fn& bid, int n_values, int n_h) {
    std::vector<double> v(static_cast<std::size_t>(n_values));
    std::vector<double> b(v.size());
    for (int i = 0; i < n_values; ++i) {
        v[static_cast<std::size_t>(i)] = inv((i + 0.5) / n_values);
        b[static_cast<std::size_t>(i)] = bid(v[static_cast<std::size_t>(i)]);
    }
    double worst = 0.0;
    for (int k = 0; k < n_h; ++k) {
        const double h = static_cast<double>(k) / (n_h - 1);
        double regret = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            regret += std::max(0.0, v[i] - h);
            if (b[i] >= h) regret -= v[i] - b[i];
        }
        worst = std::max(worst, regret / n_values);
    }
    return worst;
}

/// Minimax regret of a one-value, three-bid game by exhaustive search over the
/// buyer's simplex with the given step. Nature picks h from the same grid.
inline double three_bid_game_value(double value, const double (&bids)[3], double step) {
    double best = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(std::lround(1.0 / step));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; i + j <= n; ++j) {
            const double p[3] = {i * step, j * step, (n - i - j) * step};
            double worst = -std::numeric_limits<double>::infinity();
            for (double h : bids) {
                double u = 0.0;
                for (int a = 0; a < 3; ++a) {
                    if (bids[a] >= h) u += p[a] * (value - bids[a]);
                }
                worst = std::max(worst, std::max(0.0, value - h) - u);
            }
            best = std::min(best, worst);
        }
    }
    return best;
}

/// Closed forms for uniform shading and the point-mass solution.
inline double shade_half_uniform_a(double a) { return 0.25 + 0.25 * a; }
inline double golden_alpha() { return (3.0 - std::sqrt(5.0)) / 2.0; }
inline double point_one_qstar(double t) { return 1.0 - std::exp(-t); }

}  // namespace reference
