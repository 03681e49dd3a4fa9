#pragma once

#include "mmbid/distribution.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mmbid {

/**
 * Finite version of the minimax-regret problem. Nature picks a highest bid from
 * the bid grid; the buyer picks, for each discretised value, a distribution over
 * the same grid. Ties go to the buyer.
 */
struct DiscreteGame {
    std::vector<double> values;     // F^- at quantile midpoints
    std::vector<double> weights;    // 1 / n_values each
    std::vector<double> bids;       // also nature's highest-bid grid
    std::vector<double> benchmark;  // sum_i w_i (v_i - h_k)^+

    std::span<const double> highest_bids() const { return bids; }
};

/// Values F^-((i + 0.5) / n_values) with equal weights, bids j / (n_bids - 1).
DiscreteGame build_game(const ValueDistribution& dist, std::size_t n_values, std::size_t n_bids);
/// Same, with an explicit ascending bid grid.
DiscreteGame build_game(const ValueDistribution& dist, std::size_t n_values, std::vector<double> bids);

struct OracleResult {
    double value = 0.0;  // worst-case regret of the averaged buyer policy
    double lower = 0.0;  // best guaranteed bound from nature's empirical mixtures
    double gap = 0.0;    // value - lower
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<std::vector<double>> buyer_policy;  // [value][bid] averaged probabilities
    std::vector<double> nature_mixture;             // empirical frequency of each highest bid
};

/**
 * Fictitious play. Each round the buyer best-responds (per value, smallest bid
 * index on ties) to nature's empirical mixture, then nature best-responds to the
 * buyer's averaged policy. Stops when the duality gap is at most tol, or after
 * max_iters with converged = false.
 */
OracleResult solve_game(const DiscreteGame& game, std::size_t max_iters, double tol);

std::string oracle_csv_header();
std::string oracle_csv_row(std::size_t grid, const OracleResult& result);

}  // namespace mmbid
