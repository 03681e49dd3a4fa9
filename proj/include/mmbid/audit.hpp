#pragma once

#include "mmbid/distribution.hpp"
#include "mmbid/solver.hpp"
#include "mmbid/strategy.hpp"

#include <cstddef>
#include <string>

namespace mmbid {

// Numerical checks of the saddle-point structure of a solved (Q*, H*) pair.

struct FlatnessResult {
    double spread = 0.0;  // max - min of the regret r(y) = O(Q(y)) - U(Q, y)
    double y_min = 0.0;
    double y_max = 0.0;
    double r_min = 0.0;
    double r_max = 0.0;
};

FlatnessResult flatness_audit(const QuantileStrategy& q, const ValueDistribution& dist);

struct BestResponseResult {
    double gap = 0.0;  // largest relative suboptimality of Q(y) against H*
    double worst_y = 0.0;
};

/// For n_values quantiles y = k / (n_values - 1), compares the utility of bidding
/// Q(y) at value F^-(y) with the best bid on an n_bids uniform grid.
BestResponseResult best_response_audit(const QuantileStrategy& q, const HighestBidCdf& h,
                                       const ValueDistribution& dist, std::size_t n_values = 100,
                                       std::size_t n_bids = 4001);

struct BoundsResult {
    bool ok = true;
    std::string violation;  // first violation, empty when ok
};

/// Q(0) = 0, strictly increasing, and Q(t) < F^-(t) for every grid t > 0.
BoundsResult bounds_audit(const QuantileStrategy& q, const ValueDistribution& dist);

/// True when the bid distribution of Q has no atom.
bool atomless_audit(const QuantileStrategy& q);

struct AuditThresholds {
    double flatness_relative = 1e-3;  // spread <= this * minimax regret
    double best_response = 1e-3;
    std::size_t n_values = 100;
    std::size_t n_bids = 4001;
};

struct AuditReport {
    double minimax_regret = 0.0;  // of the conditional law when F(0) > 0
    double flatness_spread = 0.0;
    double best_response_gap = 0.0;
    bool bounds_ok = false;
    bool atomless_ok = false;
    bool flatness_ok = false;
    bool best_response_ok = false;
    std::string details;

    bool passed() const { return flatness_ok && best_response_ok && bounds_ok && atomless_ok; }
};

/// Runs all four audits on the solved pair for the conditional law of `solution`.
AuditReport run_audits(const MinimaxSolution& solution, const AuditThresholds& thresholds = {});

/// key=value lines.
std::string render_text(const AuditReport& report);
std::string audit_csv_header();
std::string render_csv_row(const AuditReport& report);

}  // namespace mmbid
