#include "mmbid/strategy.hpp"

#include "mmbid/errors.hpp"
#include "mmbid/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace mmbid {

QuantileStrategy::QuantileStrategy(std::vector<double> bids) : bids_(std::move(bids)) {
    if (bids_.size() < 2) throw SpecError("a quantile strategy needs at least two grid points");
    strict_ = true;
    for (std::size_t i = 0; i < bids_.size(); ++i) {
        if (!(bids_[i] >= 0.0 && bids_[i] <= 1.0)) {
            throw SpecError("bids must lie in [0,1] (grid index " + std::to_string(i) + ")");
        }
        if (i > 0) {
            if (bids_[i] < bids_[i - 1]) {
                throw SpecError("bids must be nondecreasing (grid index " + std::to_string(i) + ")");
            }
            if (bids_[i] == bids_[i - 1]) strict_ = false;
        }
    }
    prefix_.assign(bids_.size(), 0.0);
    const double dt = step();
    for (std::size_t i = 1; i < bids_.size(); ++i) {
        prefix_[i] = prefix_[i - 1] + 0.5 * dt * (bids_[i - 1] + bids_[i]);
    }
}

QuantileStrategy QuantileStrategy::tabulate(const std::function<double(double)>& q,
                                            std::size_t intervals) {
    std::vector<double> bids(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        bids[i] = q(static_cast<double>(i) / static_cast<double>(intervals));
    }
    return QuantileStrategy(std::move(bids));
}

double QuantileStrategy::operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
    const double pos = t * static_cast<double>(intervals());
    const std::size_t i = std::min(static_cast<std::size_t>(pos), intervals() - 1);
    const double w = pos - static_cast<double>(i);
    return bids_[i] + w * (bids_[i + 1] - bids_[i]);
}

double QuantileStrategy::integral_from(double y) const {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
    const double pos = y * static_cast<double>(intervals());
    const std::size_t i = std::min(static_cast<std::size_t>(pos), intervals() - 1);
    const double head = prefix_[i] + 0.5 * (y - grid_point(i)) * (bids_[i] + (*this)(y));
    return std::max(0.0, prefix_.back() - head);
}

std::optional<double> QuantileStrategy::lower_inverse(double h) const {
    if (h <= bids_.front()) return 0.0;
    if (h > bids_.back()) return std::nullopt;
    const auto it = std::lower_bound(bids_.begin(), bids_.end(), h);
    const std::size_t j = static_cast<std::size_t>(it - bids_.begin());
    const double lo = bids_[j - 1];
    const double hi = bids_[j];
    const double w = (h - lo) / (hi - lo);
    return std::clamp((static_cast<double>(j - 1) + w) * step(), grid_point(j - 1), grid_point(j));
}

ShadeStrategy::ShadeStrategy(double a) : alpha(a) {
    if (!(a >= 0.0 && a <= 1.0)) throw SpecError("shading factor must lie in [0,1]");
}

namespace {

// Utility of any nondecreasing schedule: the buyer wins exactly on the quantiles
// [y, 1] with y = inf{t : Q(t) >= h}.
double schedule_utility(const QuantileStrategy& q, const ValueDistribution& dist, double h) {
    const auto y = q.lower_inverse(h);
    if (!y) return 0.0;
    return dist.quantile_integral(*y) - q.integral_from(*y);
}

// E[(1 - alpha) v 1{alpha v >= h}].
double shade_utility(const ShadeStrategy& s, const ValueDistribution& dist, double h) {
    if (s.alpha == 0.0) return h <= 0.0 ? dist.mean() : 0.0;
    const double c = h / s.alpha;
    if (c > 1.0) return 0.0;
    // E[v 1{v >= c}] = c P(v >= c) + E[(v - c)^+]
    const double tail = c * (1.0 - dist.cdf_left(c)) + dist.survival_integral(c);
    return (1.0 - s.alpha) * tail;
}

}  // namespace

double utility_quantile(const QuantileStrategy& q, const ValueDistribution& dist, double y) {
    if (!q.strict()) throw ContractViolation("utility_quantile requires a strictly increasing schedule");
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("quantile level must lie in [0,1]");
    return dist.quantile_integral(y) - q.integral_from(y);
}

double utility_vs_h(const Strategy& strategy, const ValueDistribution& dist, double h) {
    if (!(h >= 0.0 && h <= 1.0)) throw DomainError("highest bid must lie in [0,1]");
    return std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QuantileStrategy>) {
                return schedule_utility(s, dist, h);
            } else {
                return shade_utility(s, dist, h);
            }
        },
        strategy);
}

ValueDistribution bid_cdf(const QuantileStrategy& q) {
    std::vector<Knot> knots;
    const auto bids = q.bids();
    std::size_t i = 0;
    while (i < bids.size()) {
        std::size_t j = i;
        while (j + 1 < bids.size() && bids[j + 1] == bids[i]) ++j;
        knots.push_back({bids[i], q.grid_point(i), q.grid_point(j)});
        i = j + 1;
    }
    knots.front().f_left = 0.0;
    knots.back().f_right = 1.0;
    return ValueDistribution(std::move(knots), Family::tabulated, "bid distribution");
}

bool bids_atomless(const Strategy& strategy, const ValueDistribution& dist) {
    if (const auto* q = std::get_if<QuantileStrategy>(&strategy)) return bid_cdf(*q).max_atom() == 0.0;
    const auto& s = std::get<ShadeStrategy>(strategy);
    return s.alpha > 0.0 && dist.max_atom() == 0.0;
}

QuantileStrategy shade_to_quantile(double alpha, const ValueDistribution& dist,
                                   std::size_t intervals) {
    const ShadeStrategy s(alpha);
    std::vector<double> bids(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(intervals);
        bids[i] = s.alpha * (i == 0 ? dist.quantile_right(0.0) : dist.quantile(t));
    }
    return QuantileStrategy(std::move(bids));
}

StrategySpec parse_strategy_spec(std::string_view text) {
    if (text == "qstar") {
        StrategySpec spec;
        spec.kind = StrategySpec::Kind::qstar;
        return spec;
    }
    if (text.starts_with("shade:")) {
        StrategySpec spec;
        spec.kind = StrategySpec::Kind::shade;
        spec.alpha = parse_number(text.substr(6), "shading factor");
        ShadeStrategy check(spec.alpha);
        return spec;
    }
    if (text.starts_with("file:") && text.size() > 5) {
        StrategySpec spec;
        spec.kind = StrategySpec::Kind::file;
        spec.path = std::string(text.substr(5));
        return spec;
    }
    throw SpecError("unknown strategy '" + std::string(text) +
                    "' (expected shade:<alpha>, qstar or file:<path>)");
}

QuantileStrategy read_strategy_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open strategy file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.substr(0, 3) != "t,Q") {
        throw SpecError("strategy file '" + path + "' must start with header 't,Q'");
    }
    std::vector<double> ts;
    std::vector<double> bids;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto c1 = line.find(',');
        if (c1 == std::string::npos) throw SpecError("strategy file rows must be 't,Q'");
        auto c2 = line.find(',', c1 + 1);
        if (c2 == std::string::npos) c2 = line.size();
        std::string q_field = line.substr(c1 + 1, c2 - c1 - 1);
        if (!q_field.empty() && q_field.back() == '\r') q_field.pop_back();
        ts.push_back(parse_number(line.substr(0, c1), "t"));
        bids.push_back(parse_number(q_field, "Q"));
    }
    if (ts.size() < 2) throw SpecError("strategy file needs at least two rows");
    const double n = static_cast<double>(ts.size() - 1);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (std::abs(ts[i] - static_cast<double>(i) / n) > 1e-6) {
            throw SpecError("strategy file t column must be the uniform grid i/N on [0,1]");
        }
    }
    return QuantileStrategy(std::move(bids));
}

}  // namespace mmbid
