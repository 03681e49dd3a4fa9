#pragma once

#include "mmbid/distribution.hpp"
#include "mmbid/strategy.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mmbid {

enum class RegretMethod { line_search, closed_form };

const char* to_string(RegretMethod method);

struct RegretReport {
    double worst_h = 0.0;
    double worst_regret = 0.0;
    std::vector<std::pair<double, double>> curve;  // sampled (h, regret(h))
    RegretMethod method = RegretMethod::line_search;
    // Set when the bid distribution has an atom: a deterministic highest bid need
    // not be the worst case, so worst_regret is only a lower bound.
    bool lower_bound = false;
};

struct LineSearchOptions {
    std::size_t grid_points = 20001;
    double refine_width = 1e-9;
};

/// Full-information regret E[(v - h)^+] - U(strategy, h).
double regret_vs_h(const Strategy& strategy, const ValueDistribution& dist, double h);

/**
 * Worst-case regret over deterministic highest bids.
 *
 * Samples a uniform grid of h values together with every knot of F, every bid
 * the strategy can place on its grid, and 0; then refines each sampled local
 * maximum by golden-section search. Ties go to the smallest h.
 */
RegretReport worst_case_regret(const Strategy& strategy, const ValueDistribution& dist,
                               const LineSearchOptions& options = {});

/// Empty when t * f(t) is nondecreasing on the knot grid (slack 1e-6) and F has
/// no atoms; otherwise a description naming the first offending grid cell.
std::optional<std::string> shading_precondition_failure(const ValueDistribution& dist);

/// max{alpha E[v], E[(v - alpha F^-(1))^+]}. Throws PreconditionError when
/// shading_precondition_failure(dist) reports a problem.
double shading_regret_closed_form(double alpha, const ValueDistribution& dist);

struct BestAlpha {
    double alpha;
    double regret;
    RegretMethod method;
};

/// Shading factor minimising worst-case regret: grid scan at `resolution` then
/// golden-section refinement around the best grid point.
BestAlpha best_alpha(const ValueDistribution& dist, double resolution = 1e-3,
                     const LineSearchOptions& options = {});

enum class SweepFamily { beta_symmetric, uniform_a };

SweepFamily parse_sweep_family(const std::string& name);
/// beta(rho, rho) for beta_symmetric; Unif(a, 1) for uniform_a (a = 1 is the point mass at 1).
ValueDistribution family_member(SweepFamily family, double param);

struct SweepRow {
    double param;
    std::string strategy;
    double worst_h;
    double worst_regret;
    std::string reason;  // empty unless the cell failed
};

struct SweepOptions {
    std::size_t solver_grid = kDefaultGrid;
    double alpha_resolution = 1e-3;
    LineSearchOptions line_search;
};

/**
 * Evaluates every strategy on every family member. Strategy names are
 * `shade:<alpha>`, `qstar` and `best-alpha`; the best-alpha row is labelled
 * `best-alpha:<alpha*>`. Failed cells carry NaN values and a reason. Rows are
 * ordered by parameter, then by strategy as given.
 */
std::vector<SweepRow> family_sweep(SweepFamily family, const std::vector<double>& params,
                                   const std::vector<std::string>& strategies,
                                   const SweepOptions& options = {});

/// CSV with header `param,strategy,worst_h,worst_regret,reason`.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace mmbid
