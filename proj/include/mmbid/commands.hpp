#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mmbid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSpec = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitOracle = 4;
inline constexpr int kExitAudit = 5;

struct RunConfig {
    std::string dist_spec;
    std::string strategy_spec = "qstar";
    std::optional<std::size_t> grid_n;  // command default when unset
    std::string out_path;               // empty: no file
    std::optional<double> tol;          // command default when unset

    // regret
    std::string curve_path;
    // sweep
    std::string family;
    std::vector<double> rhos;
    std::vector<double> as;
    std::vector<std::string> strategies;
    // oracle
    std::size_t max_iters = 10'000'000;
    bool compare = false;
};

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_regret(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_audit(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to one of the commands above.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmbid::cli
