#pragma once

#include "mmbid/distribution.hpp"
#include "mmbid/strategy.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace mmbid {

/**
 * Minimax-optimal schedule Q* for a value law with F(0) = 0.
 *
 * Integrates x'(t) = (F^-(t) - x) / (1 - F(x)), x(0) = 0 with Heun steps (four
 * sub-steps per grid cell). After every sub-step the state is projected into
 * [previous state, F^-(t)], which keeps Q* nondecreasing and below F^-. The
 * denominator is clamped below at 1e-12.
 *
 * Throws PreconditionError if F(0) > 0 (strip the zero atom first),
 * DegenerateDistribution for the point mass at 0, and SolverFailure on a
 * non-finite state.
 */
QuantileStrategy solve_qstar(const ValueDistribution& dist, std::size_t intervals = kDefaultGrid);

/// Integral of Q over [0, 1]; for Q* this is the minimax regret.
double minimax_regret(const QuantileStrategy& q);

/// Worst-case highest-competing-bid CDF H*, tabulated through G = H* o Q* on the
/// quantile grid.
class HighestBidCdf {
public:
    HighestBidCdf(QuantileStrategy q, std::vector<double> g);

    double support_top() const { return q_.top(); }
    std::span<const double> g_grid() const { return g_; }
    /// H*(x); equal to 1 from support_top() on.
    double operator()(double x) const;

private:
    QuantileStrategy q_;
    std::vector<double> g_;
};

/// Builds H* for the pair (F, Q*) by accumulating 1 / (1 - F(Q*(t))) from t = 1
/// down with the trapezoidal rule. Throws SolverFailure if the denominator
/// drops below 1e-12.
HighestBidCdf hstar(const ValueDistribution& dist, const QuantileStrategy& q);

struct OdeResidual {
    double max = 0.0;
    double location = std::numeric_limits<double>::quiet_NaN();
};

/// Largest first-order-condition residual |(1 - F(Q)) Q' - (F^- - Q)| over grid
/// midpoints, skipping cells within one grid step of a jump of F^- or of F o Q.
OdeResidual ode_residual(const QuantileStrategy& q, const ValueDistribution& dist);

/// The regret-maximising law among densities bounded by rho: Unif(1 - 1/rho, 1),
/// with rho = infinity mapped to the point mass at 1.
ValueDistribution worst_family_member(double rho);

/// Full construction for an arbitrary F, stripping an atom at zero first.
struct MinimaxSolution {
    double zero_atom;               // F(0)
    ValueDistribution conditional;  // law of v given v > 0
    QuantileStrategy qstar;         // Q* for the conditional law
    HighestBidCdf highest_bid;      // H* for the conditional law
    double conditional_regret;      // integral of Q*
    double regret;                  // (1 - zero_atom) * conditional_regret
};

MinimaxSolution solve_minimax(const ValueDistribution& dist, std::size_t intervals = kDefaultGrid);

/// The schedule that bids 0 on the zero atom's quantiles [0, a] and
/// Q*((t - a) / (1 - a)) above, tabulated on the same grid as Q*.
QuantileStrategy lift_to_full_law(const MinimaxSolution& solution);

}  // namespace mmbid
