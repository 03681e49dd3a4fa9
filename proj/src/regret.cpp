#include "mmbid/regret.hpp"

#include "mmbid/errors.hpp"
#include "mmbid/numeric.hpp"
#include "mmbid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mmbid {

const char* to_string(RegretMethod method) {
    return method == RegretMethod::closed_form ? "closed-form" : "line-search";
}

double regret_vs_h(const Strategy& strategy, const ValueDistribution& dist, double h) {
    return dist.survival_integral(h) - utility_vs_h(strategy, dist, h);
}

namespace {

std::vector<double> candidate_bids(const Strategy& strategy, const ValueDistribution& dist,
                                   std::size_t grid_points) {
    std::vector<double> hs;
    const std::size_t m = std::max<std::size_t>(grid_points, 2);
    hs.reserve(m + 2 * dist.knots().size() + 1);
    for (std::size_t j = 0; j < m; ++j) {
        hs.push_back(static_cast<double>(j) / static_cast<double>(m - 1));
    }
    for (const Knot& kn : dist.knots()) hs.push_back(kn.x);
    if (const auto* q = std::get_if<QuantileStrategy>(&strategy)) {
        hs.insert(hs.end(), q->bids().begin(), q->bids().end());
    } else {
        const double alpha = std::get<ShadeStrategy>(strategy).alpha;
        for (const Knot& kn : dist.knots()) hs.push_back(alpha * kn.x);
    }
    hs.push_back(0.0);
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    return hs;
}

}  // namespace

RegretReport worst_case_regret(const Strategy& strategy, const ValueDistribution& dist,
                               const LineSearchOptions& options) {
    RegretReport report;
    report.method = RegretMethod::line_search;
    report.lower_bound = !bids_atomless(strategy, dist);

    const auto hs = candidate_bids(strategy, dist, options.grid_points);
    auto regret_at = [&](double h) { return regret_vs_h(strategy, dist, h); };

    report.curve.reserve(hs.size());
    for (double h : hs) report.curve.emplace_back(h, regret_at(h));

    ScalarOptimum best{hs.front(), report.curve.front().second};
    auto consider = [&best](double h, double r) {
        if (r > best.value || (r == best.value && h < best.x)) best = {h, r};
    };
    const auto& curve = report.curve;
    const std::size_t n = curve.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double r = curve[j].second;
        consider(curve[j].first, r);
        const bool left_ok = j == 0 || r >= curve[j - 1].second;
        const bool right_ok = j + 1 == n || r >= curve[j + 1].second;
        if (!left_ok || !right_ok) continue;
        const double lo = curve[j == 0 ? 0 : j - 1].first;
        const double hi = curve[j + 1 == n ? j : j + 1].first;
        if (hi - lo <= options.refine_width) continue;
        const auto refined = golden_section_maximize(regret_at, lo, hi, options.refine_width);
        consider(refined.x, refined.value);
    }
    report.worst_h = best.x;
    report.worst_regret = std::max(0.0, best.value);
    return report;
}

std::optional<std::string> shading_precondition_failure(const ValueDistribution& dist) {
    constexpr double kSlack = 1e-6;
    for (const Knot& kn : dist.knots()) {
        if (kn.f_right > kn.f_left) {
            std::ostringstream os;
            os << "value distribution has an atom of mass " << (kn.f_right - kn.f_left)
               << " at x=" << kn.x << "; no density";
            return os.str();
        }
    }
    struct Cell {
        double lo;
        double hi;
        double density;
    };
    std::vector<Cell> cells;
    const auto knots = dist.knots();
    if (knots.front().x > 0.0) cells.push_back({0.0, knots.front().x, 0.0});
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double dx = knots[k + 1].x - knots[k].x;
        cells.push_back({knots[k].x, knots[k + 1].x, (knots[k + 1].f_left - knots[k].f_right) / dx});
    }
    if (knots.back().x < 1.0) cells.push_back({knots.back().x, 1.0, 0.0});

    // Within a cell t * f(t) grows with t; only the cell boundaries can break monotonicity.
    for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
        const double b = cells[c].hi;
        if (b * cells[c + 1].density < b * cells[c].density - kSlack) {
            std::ostringstream os;
            os << "t*f(t) decreases entering grid cell " << (c + 1) << " [" << cells[c + 1].lo
               << ", " << cells[c + 1].hi << "]: " << b * cells[c].density << " -> "
               << b * cells[c + 1].density;
            return os.str();
        }
    }
    return std::nullopt;
}

double shading_regret_closed_form(double alpha, const ValueDistribution& dist) {
    const ShadeStrategy s(alpha);
    if (auto failure = shading_precondition_failure(dist)) {
        throw PreconditionError("closed-form shading regret does not apply: " + *failure);
    }
    const double top_bid = s.alpha * dist.quantile(1.0);
    return std::max(s.alpha * dist.mean(), dist.survival_integral(top_bid));
}

BestAlpha best_alpha(const ValueDistribution& dist, double resolution,
                     const LineSearchOptions& options) {
    if (!(resolution > 0.0 && resolution <= 1.0)) throw SpecError("alpha resolution must lie in (0,1]");
    const bool closed = !shading_precondition_failure(dist).has_value();
    auto objective = [&](double alpha) {
        alpha = std::clamp(alpha, 0.0, 1.0);
        if (closed) return shading_regret_closed_form(alpha, dist);
        return worst_case_regret(ShadeStrategy(alpha), dist, options).worst_regret;
    };

    const auto steps = static_cast<std::size_t>(std::ceil(1.0 / resolution - 1e-9));
    double best_a = 0.0;
    double best_r = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= steps; ++k) {
        const double a = std::min(1.0, static_cast<double>(k) * resolution);
        const double r = objective(a);
        if (r < best_r) {
            best_a = a;
            best_r = r;
        }
    }
    const auto refined = golden_section_minimize(objective, std::max(0.0, best_a - resolution),
                                                 std::min(1.0, best_a + resolution), 1e-9);
    if (refined.value < best_r) {
        best_a = refined.x;
        best_r = refined.value;
    }
    return {best_a, best_r, closed ? RegretMethod::closed_form : RegretMethod::line_search};
}

SweepFamily parse_sweep_family(const std::string& name) {
    if (name == "beta-sym") return SweepFamily::beta_symmetric;
    if (name == "uniform-a") return SweepFamily::uniform_a;
    throw SpecError("unknown family '" + name + "' (expected beta-sym or uniform-a)");
}

ValueDistribution family_member(SweepFamily family, double param) {
    if (family == SweepFamily::beta_symmetric) return ValueDistribution::beta(param, param);
    if (!(param >= 0.0 && param <= 1.0)) throw SpecError("uniform-a parameter must lie in [0,1]");
    if (param == 1.0) return ValueDistribution::point(1.0);
    return ValueDistribution::uniform(param, 1.0);
}

std::vector<SweepRow> family_sweep(SweepFamily family, const std::vector<double>& params,
                                   const std::vector<std::string>& strategies,
                                   const SweepOptions& options) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<SweepRow> rows;
    for (double param : params) {
        std::optional<ValueDistribution> dist;
        std::string dist_error;
        try {
            dist = family_member(family, param);
        } catch (const std::exception& e) {
            dist_error = e.what();
        }
        for (const auto& name : strategies) {
            SweepRow row{param, name, nan, nan, {}};
            if (!dist) {
                row.reason = dist_error;
                rows.push_back(row);
                continue;
            }
            try {
                if (name == "best-alpha") {
                    const auto best = best_alpha(*dist, options.alpha_resolution, options.line_search);
                    const auto report = worst_case_regret(ShadeStrategy(best.alpha), *dist, options.line_search);
                    row.strategy = "best-alpha:" + format_sig9(best.alpha);
                    row.worst_h = report.worst_h;
                    row.worst_regret = best.regret;
                } else {
                    const auto spec = parse_strategy_spec(name);
                    RegretReport report;
                    if (spec.kind == StrategySpec::Kind::qstar) {
                        const auto solution = solve_minimax(*dist, options.solver_grid);
                        report = worst_case_regret(lift_to_full_law(solution), *dist, options.line_search);
                    } else if (spec.kind == StrategySpec::Kind::shade) {
                        report = worst_case_regret(ShadeStrategy(spec.alpha), *dist, options.line_search);
                    } else {
                        report = worst_case_regret(read_strategy_csv(spec.path), *dist, options.line_search);
                    }
                    row.worst_h = report.worst_h;
                    row.worst_regret = report.worst_regret;
                    if (report.lower_bound) row.reason = "lower bound (atomic bid distribution)";
                }
            } catch (const std::exception& e) {
                row.worst_h = row.worst_regret = nan;
                row.reason = e.what();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "param,strategy,worst_h,worst_regret,reason\n";
    for (const auto& row : rows) {
        std::string reason = row.reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        out += format_sig9(row.param) + "," + row.strategy + "," + format_sig9(row.worst_h) + "," +
               format_sig9(row.worst_regret) + "," + reason + "\n";
    }
    return out;
}

}  // namespace mmbid
