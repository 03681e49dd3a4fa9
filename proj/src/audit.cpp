#include "mmbid/audit.hpp"

#include "mmbid/numeric.hpp"

#include <algorithm>
#include <sstream>

namespace mmbid {

FlatnessResult flatness_audit(const QuantileStrategy& q, const ValueDistribution& dist) {
    FlatnessResult out;
    bool first = true;
    for (std::size_t i = 0; i <= q.intervals(); ++i) {
        const double y = q.grid_point(i);
        const double r = dist.survival_integral(q.bid(i)) - utility_quantile(q, dist, y);
        if (first || r < out.r_min) {
            out.r_min = r;
            out.y_min = y;
        }
        if (first || r > out.r_max) {
            out.r_max = r;
            out.y_max = y;
        }
        first = false;
    }
    out.spread = out.r_max - out.r_min;
    return out;
}

BestResponseResult best_response_audit(const QuantileStrategy& q, const HighestBidCdf& h,
                                       const ValueDistribution& dist, std::size_t n_values,
                                       std::size_t n_bids) {
    BestResponseResult out;
    const std::size_t nv = std::max<std::size_t>(n_values, 2);
    const std::size_t nb = std::max<std::size_t>(n_bids, 2);
    // H* does not depend on the value, so tabulate it once on the bid grid.
    std::vector<double> grid_h(nb);
    for (std::size_t j = 0; j < nb; ++j) grid_h[j] = h(static_cast<double>(j) / static_cast<double>(nb - 1));

    for (std::size_t k = 0; k < nv; ++k) {
        const double y = static_cast<double>(k) / static_cast<double>(nv - 1);
        const double v = dist.quantile(y);
        const double own_bid = q(y);
        const double own = (v - own_bid) * h(own_bid);
        double best = own;
        for (std::size_t j = 0; j < nb; ++j) {
            const double b = static_cast<double>(j) / static_cast<double>(nb - 1);
            best = std::max(best, (v - b) * grid_h[j]);
        }
        const double gap = (best - own) / std::max(best, 1e-12);
        if (gap > out.gap) out = {gap, y};
    }
    return out;
}

BoundsResult bounds_audit(const QuantileStrategy& q, const ValueDistribution& dist) {
    auto fail = [](std::string msg) { return BoundsResult{false, std::move(msg)}; };
    if (q.bid(0) != 0.0) return fail("Q(0) = " + format_sig9(q.bid(0)) + " is not 0");
    for (std::size_t i = 1; i <= q.intervals(); ++i) {
        const double t = q.grid_point(i);
        if (!(q.bid(i) > q.bid(i - 1))) {
            return fail("Q not strictly increasing at t = " + format_sig9(t));
        }
        const double ceiling = dist.quantile(t);
        if (!(q.bid(i) < ceiling)) {
            return fail("Q(t) = " + format_sig9(q.bid(i)) + " is not below F^-(t) = " +
                        format_sig9(ceiling) + " at t = " + format_sig9(t));
        }
    }
    return {};
}

bool atomless_audit(const QuantileStrategy& q) { return bid_cdf(q).max_atom() == 0.0; }

AuditReport run_audits(const MinimaxSolution& solution, const AuditThresholds& thresholds) {
    const auto& q = solution.qstar;
    const auto& dist = solution.conditional;
    AuditReport report;
    report.minimax_regret = solution.conditional_regret;

    const auto flat = flatness_audit(q, dist);
    report.flatness_spread = flat.spread;
    report.flatness_ok = flat.spread <= thresholds.flatness_relative * solution.conditional_regret;

    const auto br = best_response_audit(q, solution.highest_bid, dist, thresholds.n_values,
                                        thresholds.n_bids);
    report.best_response_gap = br.gap;
    report.best_response_ok = br.gap <= thresholds.best_response;

    const auto bounds = bounds_audit(q, dist);
    report.bounds_ok = bounds.ok;
    report.atomless_ok = atomless_audit(q);

    std::ostringstream d;
    d << "flatness r(y) in [" << format_sig9(flat.r_min) << " @ y=" << format_sig9(flat.y_min) << ", "
      << format_sig9(flat.r_max) << " @ y=" << format_sig9(flat.y_max) << "]";
    d << "; best-response worst y=" << format_sig9(br.worst_y);
    if (!bounds.ok) d << "; bounds: " << bounds.violation;
    report.details = d.str();
    return report;
}

std::string render_text(const AuditReport& report) {
    auto flag = [](bool b) { return b ? "pass" : "fail"; };
    std::ostringstream os;
    os << "minimax_regret=" << format_sig9(report.minimax_regret) << "\n"
       << "flatness_spread=" << format_sig9(report.flatness_spread) << "\n"
       << "flatness=" << flag(report.flatness_ok) << "\n"
       << "best_response_gap=" << format_sig9(report.best_response_gap) << "\n"
       << "best_response=" << flag(report.best_response_ok) << "\n"
       << "bounds=" << flag(report.bounds_ok) << "\n"
       << "atomless=" << flag(report.atomless_ok) << "\n"
       << "details=" << report.details << "\n"
       << "audit=" << flag(report.passed()) << "\n";
    return os.str();
}

std::string audit_csv_header() {
    return "minimax_regret,flatness_spread,best_response_gap,bounds_ok,atomless_ok,passed";
}

std::string render_csv_row(const AuditReport& report) {
    auto b = [](bool v) { return v ? "1" : "0"; };
    return format_sig9(report.minimax_regret) + "," + format_sig9(report.flatness_spread) + "," +
           format_sig9(report.best_response_gap) + "," + b(report.bounds_ok) + "," +
           b(report.atomless_ok) + "," + b(report.passed());
}

}  // namespace mmbid
