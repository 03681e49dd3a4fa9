#include "mmbid/solver.hpp"

#include "mmbid/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mmbid {

namespace {

constexpr std::size_t kSubSteps = 4;
constexpr double kDenominatorFloor = 1e-12;

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

QuantileStrategy solve_qstar(const ValueDistribution& dist, std::size_t intervals) {
    if (intervals < 1) throw SpecError("solver grid needs at least one interval");
    const double zero_mass = dist.cdf(0.0);
    if (zero_mass >= 1.0) throw DegenerateDistribution();
    if (zero_mass > 0.0) {
        throw PreconditionError("solve_qstar requires F(0) = 0; strip the atom at 0 first");
    }

    const std::size_t total = intervals * kSubSteps;
    const double h = 1.0 / static_cast<double>(total);
    auto rhs = [&](double level, double x) {
        const double denom = std::max(1.0 - dist.cdf(clamp_unit(x)), kDenominatorFloor);
        return (level - x) / denom;
    };

    std::vector<double> bids(intervals + 1, 0.0);
    double x = 0.0;
    for (std::size_t i = 0; i < intervals; ++i) {
        for (std::size_t s = 0; s < kSubSteps; ++s) {
            const std::size_t step = i * kSubSteps + s;
            const double t0 = static_cast<double>(step) / static_cast<double>(total);
            const double t1 = static_cast<double>(step + 1) / static_cast<double>(total);
            // F^- seen from inside (t0, t1]: right limit at t0, left-continuous value at t1.
            const double level0 = dist.quantile_right(t0);
            const double level1 = dist.quantile(std::min(t1, 1.0));
            const double k1 = rhs(level0, x);
            const double k2 = rhs(level1, x + h * k1);
            const double next = x + 0.5 * h * (k1 + k2);
            if (!std::isfinite(next)) throw SolverFailure("non-finite state in Q* integration", step);
            x = std::max(x, std::min(next, level1));
        }
        bids[i + 1] = x;
    }
    return QuantileStrategy(std::move(bids));
}

double minimax_regret(const QuantileStrategy& q) { return q.integral_from(0.0); }

HighestBidCdf::HighestBidCdf(QuantileStrategy q, std::vector<double> g)
    : q_(std::move(q)), g_(std::move(g)) {
    if (g_.size() != q_.bids().size()) throw SpecError("G grid must match the quantile grid");
}

double HighestBidCdf::operator()(double x) const {
    if (x < 0.0) return 0.0;
    if (x >= support_top()) return 1.0;
    const double t = q_.lower_inverse(x).value_or(1.0);
    const double pos = t * static_cast<double>(q_.intervals());
    const std::size_t i = std::min(static_cast<std::size_t>(pos), q_.intervals() - 1);
    const double w = pos - static_cast<double>(i);
    return g_[i] + w * (g_[i + 1] - g_[i]);
}

HighestBidCdf hstar(const ValueDistribution& dist, const QuantileStrategy& q) {
    const std::size_t n = q.intervals();
    std::vector<double> inv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double denom = 1.0 - dist.cdf(q.bid(i));
        if (denom < kDenominatorFloor) {
            throw SolverFailure("1 - F(Q*(t)) underflow while building H*", i);
        }
        inv[i] = 1.0 / denom;
    }
    std::vector<double> g(n + 1);
    double acc = 0.0;
    g[n] = 1.0;
    for (std::size_t i = n; i-- > 0;) {
        acc += 0.5 * q.step() * (inv[i] + inv[i + 1]);
        g[i] = std::exp(-acc);
    }
    return HighestBidCdf(q, std::move(g));
}

OdeResidual ode_residual(const QuantileStrategy& q, const ValueDistribution& dist) {
    if (!q.strict()) throw ContractViolation("ode_residual requires a strictly increasing schedule");

    // Quantile levels where F^- jumps (flat pieces of F) or F o Q jumps (atoms of F).
    std::vector<double> jumps;
    const auto knots = dist.knots();
    if (knots.front().x > 0.0) jumps.push_back(0.0);
    for (std::size_t k = 0; k < knots.size(); ++k) {
        if (knots[k].f_right > knots[k].f_left) {
            if (auto t = q.lower_inverse(knots[k].x)) jumps.push_back(*t);
        }
        if (k + 1 < knots.size() && knots[k + 1].f_left == knots[k].f_right) {
            jumps.push_back(knots[k].f_right);
        }
    }
    if (knots.back().x < 1.0) jumps.push_back(1.0);
    std::sort(jumps.begin(), jumps.end());

    const double dt = q.step();
    auto near_jump = [&](double m) {
        const auto it = std::lower_bound(jumps.begin(), jumps.end(), m - dt * (1.0 + 1e-9));
        return it != jumps.end() && *it <= m + dt * (1.0 + 1e-9);
    };

    OdeResidual out;
    for (std::size_t i = 0; i < q.intervals(); ++i) {
        const double m = (static_cast<double>(i) + 0.5) * dt;
        if (near_jump(m)) continue;
        const double qm = 0.5 * (q.bid(i) + q.bid(i + 1));
        const double slope = (q.bid(i + 1) - q.bid(i)) / dt;
        const double r = std::abs((1.0 - dist.cdf(qm)) * slope - (dist.quantile(m) - qm));
        if (r > out.max || std::isnan(out.location)) out = {r, m};
    }
    return out;
}

ValueDistribution worst_family_member(double rho) {
    if (!(rho >= 1.0)) throw DomainError("density bound rho must be at least 1");
    if (std::isinf(rho)) return ValueDistribution::point(1.0);
    return ValueDistribution::uniform(1.0 - 1.0 / rho, 1.0);
}

MinimaxSolution solve_minimax(const ValueDistribution& dist, std::size_t intervals) {
    auto split = strip_zero_atom(dist);
    auto q = solve_qstar(split.conditional, intervals);
    auto h = hstar(split.conditional, q);
    const double conditional = minimax_regret(q);
    const double regret = (1.0 - split.atom) * conditional;
    return {split.atom, std::move(split.conditional), std::move(q), std::move(h), conditional, regret};
}

QuantileStrategy lift_to_full_law(const MinimaxSolution& solution) {
    const double a = solution.zero_atom;
    if (a == 0.0) return solution.qstar;
    const QuantileStrategy& q = solution.qstar;
    const std::size_t n = q.intervals();
    std::vector<double> bids(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        if (t > a) bids[i] = q(std::min(1.0, (t - a) / (1.0 - a)));
    }
    return QuantileStrategy(std::move(bids));
}

}  // namespace mmbid
