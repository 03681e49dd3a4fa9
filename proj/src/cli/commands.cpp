#include "mmbid/commands.hpp"

#include "mmbid/audit.hpp"
#include "mmbid/errors.hpp"
#include "mmbid/numeric.hpp"
#include "mmbid/oracle.hpp"
#include "mmbid/regret.hpp"
#include "mmbid/solver.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>

namespace mmbid::cli {

namespace {

constexpr std::size_t kMinSolverGrid = 100;
constexpr std::size_t kDefaultOracleGrid = 200;
constexpr double kDefaultOracleTol = 1e-4;

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const SolverFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitSpec;
    }
}

std::size_t solver_grid(const RunConfig& config) {
    const std::size_t n = config.grid_n.value_or(kDefaultGrid);
    if (n < kMinSolverGrid) {
        throw SpecError("--grid must be at least " + std::to_string(kMinSolverGrid));
    }
    return n;
}

double tolerance(const RunConfig& config, double fallback) {
    const double tol = config.tol.value_or(fallback);
    if (!(tol > 0.0) || !std::isfinite(tol)) throw SpecError("--tol must be positive");
    return tol;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw SpecError("cannot open '" + path + "' for writing");
    file << text;
    if (!file) throw SpecError("failed writing '" + path + "'");
}

std::string qstar_csv(const MinimaxSolution& solution) {
    const auto& q = solution.qstar;
    const auto g = solution.highest_bid.g_grid();
    std::string csv = "t,Q,G\n";
    for (std::size_t i = 0; i <= q.intervals(); ++i) {
        csv += format_sig9(q.grid_point(i));
        csv += ',';
        csv += format_sig9(q.bid(i));
        csv += ',';
        csv += format_sig9(g[i]);
        csv += '\n';
    }
    return csv;
}

Strategy resolve_strategy(const RunConfig& config, const ValueDistribution& dist) {
    const auto spec = parse_strategy_spec(config.strategy_spec);
    switch (spec.kind) {
        case StrategySpec::Kind::shade:
            return ShadeStrategy(spec.alpha);
        case StrategySpec::Kind::qstar:
            return lift_to_full_law(solve_minimax(dist, solver_grid(config)));
        case StrategySpec::Kind::file:
            return read_strategy_csv(spec.path);
    }
    throw SpecError("unknown strategy kind");
}

}  // namespace

int run_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto dist = make_distribution(config.dist_spec);
        const auto solution = solve_minimax(dist, solver_grid(config));
        if (!config.out_path.empty()) write_file(config.out_path, qstar_csv(solution));
        out << "minimax_regret=" << format_sig9(solution.regret) << "\n";
        if (solution.zero_atom > 0.0) {
            out << "zero_atom=" << format_sig9(solution.zero_atom) << "\n";
            out << "conditional_regret=" << format_sig9(solution.conditional_regret) << "\n";
        }
        return kExitOk;
    });
}

int run_regret(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto dist = make_distribution(config.dist_spec);
        const auto strategy = resolve_strategy(config, dist);
        LineSearchOptions options;
        options.refine_width = tolerance(config, options.refine_width);
        const auto report = worst_case_regret(strategy, dist, options);
        if (!config.curve_path.empty()) {
            std::string csv = "h,regret\n";
            for (const auto& [h, r] : report.curve) csv += format_sig9(h) + "," + format_sig9(r) + "\n";
            write_file(config.curve_path, csv);
        }
        out << "worst_h=" << format_sig9(report.worst_h) << "\n";
        out << "worst_regret=" << format_sig9(report.worst_regret) << "\n";
        out << "method=" << to_string(report.method) << "\n";
        out << "lower_bound=" << (report.lower_bound ? "true" : "false") << "\n";
        if (const auto* shade = std::get_if<ShadeStrategy>(&strategy)) {
            if (!shading_precondition_failure(dist)) {
                out << "closed_form_regret="
                    << format_sig9(shading_regret_closed_form(shade->alpha, dist)) << "\n";
            }
        }
        return kExitOk;
    });
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto family = parse_sweep_family(config.family);
        const bool beta = family == SweepFamily::beta_symmetric;
        const auto& params = beta ? config.rhos : config.as;
        const auto& unused = beta ? config.as : config.rhos;
        if (!unused.empty()) {
            throw SpecError(beta ? "--as applies to --family uniform-a" : "--rhos applies to --family beta-sym");
        }
        if (params.empty()) throw SpecError(beta ? "--rhos is required" : "--as is required");
        if (config.strategies.empty()) throw SpecError("--strategies is required");

        SweepOptions options;
        options.solver_grid = solver_grid(config);
        options.line_search.refine_width = tolerance(config, options.line_search.refine_width);
        const auto csv = sweep_csv(family_sweep(family, params, config.strategies, options));
        if (config.out_path.empty()) {
            out << csv;
        } else {
            write_file(config.out_path, csv);
        }
        return kExitOk;
    });
}

int run_oracle(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto dist = make_distribution(config.dist_spec);
        const std::size_t grid = config.grid_n.value_or(kDefaultOracleGrid);
        if (grid < 2) throw SpecError("--grid must be at least 2 for the oracle");
        const double tol = tolerance(config, kDefaultOracleTol);
        const auto game = build_game(dist, grid, grid);
        const auto result = solve_game(game, config.max_iters, tol);
        out << "value=" << format_sig9(result.value) << "\n";
        out << "lower=" << format_sig9(result.lower) << "\n";
        out << "gap=" << format_sig9(result.gap) << "\n";
        out << "iters=" << result.iterations << "\n";
        out << "converged=" << (result.converged ? "true" : "false") << "\n";
        if (config.compare) {
            const auto solution = solve_minimax(dist, kDefaultGrid);
            out << "minimax_regret=" << format_sig9(solution.regret) << "\n";
            out << "compare_delta=" << format_sig9(std::abs(result.value - solution.regret)) << "\n";
        }
        if (!config.out_path.empty()) {
            write_file(config.out_path, oracle_csv_header() + "\n" + oracle_csv_row(grid, result) + "\n");
        }
        if (!result.converged) {
            err << "error: duality gap " << format_sig9(result.gap) << " above tolerance "
                << format_sig9(tol) << " after " << result.iterations << " iterations\n";
            return kExitOracle;
        }
        return kExitOk;
    });
}

int run_audit(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto dist = make_distribution(config.dist_spec);
        AuditThresholds thresholds;
        if (config.tol) {
            thresholds.flatness_relative = tolerance(config, thresholds.flatness_relative);
            thresholds.best_response = thresholds.flatness_relative;
        }
        const auto report = run_audits(solve_minimax(dist, solver_grid(config)), thresholds);
        out << render_text(report);
        if (!config.out_path.empty()) {
            write_file(config.out_path, audit_csv_header() + "\n" + render_csv_row(report) + "\n");
        }
        return report.passed() ? kExitOk : kExitAudit;
    });
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimax-regret bidding for first-price auctions", "mmbid"};
    app.require_subcommand(1);

    RunConfig config;
    std::size_t grid = 0;
    double tol = 0.0;

    auto common = [&](CLI::App* sub, bool with_strategy) {
        sub->add_option("--dist", config.dist_spec, "value distribution, e.g. \"uniform 0 1\"")->required();
        if (with_strategy) {
            sub->add_option("--strategy", config.strategy_spec, "shade:<alpha> | qstar | file:<path>");
        }
        sub->add_option("--grid", grid, "grid size");
        sub->add_option("--out", config.out_path, "CSV output path");
        sub->add_option("--tol", tol, "tolerance override");
    };

    auto* solve = app.add_subcommand("solve", "construct the minimax strategy");
    common(solve, false);

    auto* regret = app.add_subcommand("regret", "worst-case regret of a strategy");
    common(regret, true);
    regret->add_option("--curve", config.curve_path, "write the h,regret curve to this CSV");

    auto* sweep = app.add_subcommand("sweep", "regret over a distribution family");
    sweep->add_option("--family", config.family, "beta-sym | uniform-a")->required();
    sweep->add_option("--rhos", config.rhos, "beta-sym parameters")->delimiter(',');
    sweep->add_option("--as", config.as, "uniform-a parameters")->delimiter(',');
    sweep->add_option("--strategies", config.strategies, "shade:<alpha>, qstar, file:<path>, best-alpha")
        ->delimiter(',');
    sweep->add_option("--grid", grid, "solver grid size");
    sweep->add_option("--out", config.out_path, "CSV output path (stdout when absent)");
    sweep->add_option("--tol", tol, "line-search refinement width");

    auto* oracle = app.add_subcommand("oracle", "solve the discretised game by fictitious play");
    common(oracle, false);
    oracle->add_option("--max-iters", config.max_iters, "iteration cap");
    oracle->add_flag("--compare", config.compare, "also solve the ODE and print the difference");

    auto* audit = app.add_subcommand("audit", "check the saddle-point properties of the solution");
    common(audit, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitSpec;
    }

    auto set = [](const CLI::App* sub, const char* name) { return sub->count(name) > 0; };
    for (const auto* sub : app.get_subcommands()) {
        if (set(sub, "--grid")) config.grid_n = grid;
        if (set(sub, "--tol")) config.tol = tol;
    }

    if (solve->parsed()) return run_solve(config, out, err);
    if (regret->parsed()) return run_regret(config, out, err);
    if (sweep->parsed()) return run_sweep(config, out, err);
    if (oracle->parsed()) return run_oracle(config, out, err);
    return run_audit(config, out, err);
}

}  // namespace mmbid::cli
