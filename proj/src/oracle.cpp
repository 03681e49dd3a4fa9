#include "mmbid/oracle.hpp"

#include "mmbid/errors.hpp"
#include "mmbid/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace mmbid {

DiscreteGame build_game(const ValueDistribution& dist, std::size_t n_values, std::size_t n_bids) {
    if (n_bids < 2) throw SpecError("the bid grid needs at least two points");
    std::vector<double> bids(n_bids);
    for (std::size_t j = 0; j < n_bids; ++j) {
        bids[j] = static_cast<double>(j) / static_cast<double>(n_bids - 1);
    }
    return build_game(dist, n_values, std::move(bids));
}

DiscreteGame build_game(const ValueDistribution& dist, std::size_t n_values, std::vector<double> bids) {
    if (n_values < 1) throw SpecError("the game needs at least one value");
    if (bids.empty() || !std::is_sorted(bids.begin(), bids.end()) ||
        std::adjacent_find(bids.begin(), bids.end()) != bids.end()) {
        throw SpecError("the bid grid must be strictly ascending");
    }
    if (bids.front() < 0.0 || bids.back() > 1.0) throw SpecError("bids must lie in [0,1]");

    DiscreteGame game;
    game.values.resize(n_values);
    game.weights.assign(n_values, 1.0 / static_cast<double>(n_values));
    for (std::size_t i = 0; i < n_values; ++i) {
        game.values[i] = dist.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n_values));
    }
    game.bids = std::move(bids);
    game.benchmark.resize(game.bids.size());
    for (std::size_t k = 0; k < game.bids.size(); ++k) {
        double o = 0.0;
        for (std::size_t i = 0; i < n_values; ++i) {
            o += game.weights[i] * std::max(0.0, game.values[i] - game.bids[k]);
        }
        game.benchmark[k] = o;
    }
    return game;
}

OracleResult solve_game(const DiscreteGame& game, std::size_t max_iters, double tol) {
    if (!(tol > 0.0)) throw SpecError("oracle tolerance must be positive");
    const std::size_t m = game.bids.size();

    // Equal values share a best response, so play them as one weighted row.
    std::vector<double> values;
    std::vector<double> weights;
    std::vector<std::size_t> row_of(game.values.size());
    for (std::size_t i = 0; i < game.values.size(); ++i) {
        if (values.empty() || game.values[i] != values.back()) {
            values.push_back(game.values[i]);
            weights.push_back(0.0);
        }
        weights.back() += game.weights[i];
        row_of[i] = values.size() - 1;
    }
    const std::size_t n = values.size();

    std::vector<double> nature_counts(m, 0.0);
    nature_counts[0] = 1.0;
    double nature_total = 1.0;
    std::vector<std::uint64_t> buyer_counts(n * m, 0);
    std::vector<double> bid_utility(m, 0.0);  // summed over rounds: sum_i w_i (v_i - b_j)

    std::vector<double> win_prob(m);
    std::vector<double> tail(m);
    double best_lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    OracleResult result;
    std::size_t t = 0;
    while (t < max_iters) {
        ++t;
        // Buyer best response to nature's empirical mixture. A bid b_j beats every
        // h_k <= b_j, which on the shared grid means k <= j.
        double cum = 0.0;
        double expected_benchmark = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double p = nature_counts[j] / nature_total;
            cum += p;
            win_prob[j] = cum;
            expected_benchmark += p * game.benchmark[j];
        }
        double best_utility = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = values[i];
            std::size_t arg = 0;
            double best = (v - game.bids[0]) * win_prob[0];
            for (std::size_t j = 1; j < m; ++j) {
                const double u = (v - game.bids[j]) * win_prob[j];
                if (u > best) {
                    best = u;
                    arg = j;
                }
            }
            best_utility += weights[i] * best;
            ++buyer_counts[i * m + arg];
            bid_utility[arg] += weights[i] * (v - game.bids[arg]);
        }
        best_lower = std::max(best_lower, expected_benchmark - best_utility);

        // Nature best response to the buyer's averaged policy.
        double suffix = 0.0;
        for (std::size_t j = m; j-- > 0;) {
            suffix += bid_utility[j];
            tail[j] = suffix / static_cast<double>(t);
        }
        std::size_t k_best = 0;
        upper = game.benchmark[0] - tail[0];
        for (std::size_t k = 1; k < m; ++k) {
            const double r = game.benchmark[k] - tail[k];
            if (r > upper) {
                upper = r;
                k_best = k;
            }
        }
        nature_counts[k_best] += 1.0;
        nature_total += 1.0;

        if (upper - best_lower <= tol) {
            result.converged = true;
            break;
        }
    }

    result.value = upper;
    result.lower = best_lower;
    result.gap = upper - best_lower;
    result.iterations = t;
    result.buyer_policy.assign(game.values.size(), std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < game.values.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            result.buyer_policy[i][j] =
                static_cast<double>(buyer_counts[row_of[i] * m + j]) / static_cast<double>(t);
        }
    }
    result.nature_mixture.resize(m);
    for (std::size_t k = 0; k < m; ++k) result.nature_mixture[k] = nature_counts[k] / nature_total;
    return result;
}

std::string oracle_csv_header() { return "grid,value,gap,iters"; }

std::string oracle_csv_row(std::size_t grid, const OracleResult& result) {
    return std::to_string(grid) + "," + format_sig9(result.value) + "," + format_sig9(result.gap) +
           "," + std::to_string(result.iterations);
}

}  // namespace mmbid
