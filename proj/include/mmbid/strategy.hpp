#pragma once

#include "mmbid/distribution.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mmbid {

inline constexpr std::size_t kDefaultGrid = 20000;

/**
 * Quantile-based bid schedule: bid Q(t) at value quantile t.
 *
 * Q is stored on the uniform grid t_i = i / N, i = 0..N, and is piecewise
 * linear in between, so it is absolutely continuous by construction. Strict
 * monotonicity is detected on construction; only strict schedules belong to the
 * class for which the quantile utility formula is stated.
 */
class QuantileStrategy {
public:
    /// bids[i] = Q(i / N). Throws SpecError unless 2+ bids, nondecreasing, in [0,1].
    explicit QuantileStrategy(std::vector<double> bids);

    static QuantileStrategy tabulate(const std::function<double(double)>& q, std::size_t intervals);

    std::size_t intervals() const { return bids_.size() - 1; }
    double step() const { return 1.0 / static_cast<double>(intervals()); }
    double grid_point(std::size_t i) const {
        return static_cast<double>(i) / static_cast<double>(intervals());
    }
    std::span<const double> bids() const { return bids_; }
    double bid(std::size_t i) const { return bids_[i]; }
    bool strict() const { return strict_; }
    double top() const { return bids_.back(); }

    /// Q(t) by linear interpolation.
    double operator()(double t) const;
    /// Integral of Q over [y, 1] (exact for the piecewise-linear schedule).
    double integral_from(double y) const;
    /// inf{t : Q(t) >= h}; std::nullopt when h > Q(1).
    std::optional<double> lower_inverse(double h) const;

private:
    std::vector<double> bids_;
    std::vector<double> prefix_;  // integral of Q over [0, t_i]
    bool strict_ = false;
};

/// Uniform bid shading: bid alpha * v.
struct ShadeStrategy {
    double alpha;

    explicit ShadeStrategy(double a);
};

using Strategy = std::variant<QuantileStrategy, ShadeStrategy>;

/// Expected utility of a strict schedule against the highest bid h = Q(y):
/// the integral of F^- - Q over [y, 1]. Throws ContractViolation for non-strict Q.
double utility_quantile(const QuantileStrategy& q, const ValueDistribution& dist, double y);

/// Expected utility E[(v - b) 1{b >= h}] against a deterministic highest bid h.
/// Ties go to the buyer.
double utility_vs_h(const Strategy& strategy, const ValueDistribution& dist, double h);

/// Law of Q(t) for t ~ Unif(0,1). Flats of Q become atoms.
ValueDistribution bid_cdf(const QuantileStrategy& q);

/// True when the strategy's bid distribution under F has no atom.
bool bids_atomless(const Strategy& strategy, const ValueDistribution& dist);

/// Q(t) = alpha * F^-(t) on an N-interval grid (t = 0 uses the bottom of the support).
QuantileStrategy shade_to_quantile(double alpha, const ValueDistribution& dist,
                                   std::size_t intervals = kDefaultGrid);

/// Parsed form of the CLI strategy grammar `shade:<alpha> | qstar | file:<path>`.
struct StrategySpec {
    enum class Kind { shade, qstar, file };
    Kind kind = Kind::shade;
    double alpha = 0.0;
    std::string path;
};

StrategySpec parse_strategy_spec(std::string_view text);

/// Reads a `t,Q` CSV on a uniform t-grid starting at 0 and ending at 1.
QuantileStrategy read_strategy_csv(const std::string& path);

}  // namespace mmbid
