#include "mmbid/distribution.hpp"

#include "mmbid/errors.hpp"
#include "mmbid/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mmbid {

namespace {

constexpr double kSnap = 1e-9;
constexpr std::size_t kBetaKnots = 4096;
constexpr double kBetaTolerance = 1e-10;

void check_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(x));
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

ValueDistribution::ValueDistribution(std::vector<Knot> knots, Family family, std::string label)
    : knots_(std::move(knots)), family_(family), label_(std::move(label)) {
    if (knots_.empty()) throw SpecError("distribution needs at least one knot");

    for (std::size_t k = 0; k < knots_.size(); ++k) {
        Knot& kn = knots_[k];
        if (!(kn.x >= 0.0 && kn.x <= 1.0)) throw SpecError("knot x outside [0,1]: " + fmt(kn.x));
        if (k > 0 && !(kn.x > knots_[k - 1].x)) throw SpecError("knot x values must increase");
        if (!(kn.f_left >= -kSnap && kn.f_right <= 1.0 + kSnap && kn.f_left <= kn.f_right + kSnap)) {
            throw SpecError("invalid CDF levels at x=" + fmt(kn.x));
        }
        kn.f_left = std::clamp(kn.f_left, 0.0, 1.0);
        kn.f_right = std::clamp(std::max(kn.f_right, kn.f_left), 0.0, 1.0);
        if (k > 0) {
            const double prev = knots_[k - 1].f_right;
            if (kn.f_left < prev - kSnap) throw SpecError("CDF decreases before x=" + fmt(kn.x));
            kn.f_left = std::max(kn.f_left, prev);
            kn.f_right = std::max(kn.f_right, kn.f_left);
        }
    }
    if (knots_.front().f_left > kSnap) throw SpecError("CDF must start at 0");
    knots_.front().f_left = 0.0;
    if (knots_.back().f_right < 1.0 - kSnap) throw SpecError("CDF must reach 1");
    knots_.back().f_right = 1.0;

    // Drop knots that only repeat the implicit 0 below the support or 1 above it.
    while (knots_.size() > 1 && knots_[0].f_right == 0.0 && knots_[1].f_left == 0.0) {
        knots_.erase(knots_.begin());
    }
    while (knots_.size() > 1 && knots_.back().f_left == 1.0 && knots_[knots_.size() - 2].f_right == 1.0) {
        knots_.pop_back();
    }

    if (knots_.front().x > 0.0) graph_.push_back({0.0, 0.0});
    for (const Knot& kn : knots_) {
        graph_.push_back({kn.x, kn.f_left});
        if (kn.f_right > kn.f_left) graph_.push_back({kn.x, kn.f_right});
    }
    if (knots_.back().x < 1.0) graph_.push_back({1.0, 1.0});

    knot_integral_.resize(knots_.size());
    knot_integral_[0] = 0.0;
    for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
        const double dx = knots_[k + 1].x - knots_[k].x;
        knot_integral_[k + 1] =
            knot_integral_[k] + dx * 0.5 * (knots_[k].f_right + knots_[k + 1].f_left);
    }
}

ValueDistribution ValueDistribution::uniform(double a, double b) {
    if (!(a >= 0.0 && b <= 1.0 && a <= b)) {
        throw SpecError("uniform needs 0 <= a <= b <= 1, got " + fmt(a) + " " + fmt(b));
    }
    if (a == b) return point(a);
    return ValueDistribution({{a, 0.0, 0.0}, {b, 1.0, 1.0}}, Family::uniform,
                             "uniform(" + fmt(a) + "," + fmt(b) + ")");
}

ValueDistribution ValueDistribution::point(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw SpecError("point mass must lie in [0,1], got " + fmt(v));
    return ValueDistribution({{v, 0.0, 1.0}}, Family::point, "point(" + fmt(v) + ")");
}

ValueDistribution ValueDistribution::beta(double p, double q) {
    if (!(p > 0.0 && q > 0.0 && std::isfinite(p) && std::isfinite(q))) {
        throw SpecError("beta shape parameters must be positive, got " + fmt(p) + " " + fmt(q));
    }
    const double log_beta = std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
    auto density = [&](double x) {
        if (x <= 0.0 || x >= 1.0) {
            if ((x <= 0.0 && p == 1.0) || (x >= 1.0 && q == 1.0)) return std::exp(-log_beta);
            if ((x <= 0.0 && p > 1.0) || (x >= 1.0 && q > 1.0)) return 0.0;
        }
        return std::exp((p - 1.0) * std::log(x) + (q - 1.0) * std::log1p(-x) - log_beta);
    };
    // Cell mass. A singular density end (shape < 1) is removed by substituting
    // u = x^p on cells left of 1/2 or u = (1-x)^q on cells right of it.
    auto cell_mass = [&](double a, double b, double tol) {
        const bool left = a + b < 1.0;
        if (p < 1.0 && left) {
            auto g = [&](double u) {
                const double x = std::pow(u, 1.0 / p);
                return std::exp((q - 1.0) * std::log1p(-x) - log_beta) / p;
            };
            return adaptive_simpson(g, std::pow(a, p), std::pow(b, p), tol);
        }
        if (q < 1.0 && !left) {
            auto g = [&](double u) {
                const double x = 1.0 - std::pow(u, 1.0 / q);
                return std::exp((p - 1.0) * std::log(x) - log_beta) / q;
            };
            return adaptive_simpson(g, std::pow(1.0 - b, q), std::pow(1.0 - a, q), tol);
        }
        return adaptive_simpson(density, a, b, tol);
    };

    // Cosine-spaced knots: dense near both ends where shape < 1 bends the CDF hardest.
    std::vector<double> grid(kBetaKnots);
    for (std::size_t i = 0; i < kBetaKnots; ++i) {
        const double theta = std::numbers::pi * static_cast<double>(i) / (kBetaKnots - 1);
        grid[i] = 0.5 * (1.0 - std::cos(theta));
    }
    grid.front() = 0.0;
    grid.back() = 1.0;

    const double cell_tol = kBetaTolerance / static_cast<double>(grid.size());
    std::vector<double> cum(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        cum[i] = cum[i - 1] + std::max(0.0, cell_mass(grid[i - 1], grid[i], cell_tol));
    }
    const double total = cum.back();
    std::vector<Knot> knots;
    knots.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = cum[i] / total;
        knots.push_back({grid[i], f, f});
    }
    knots.front().f_left = knots.front().f_right = 0.0;
    knots.back().f_left = knots.back().f_right = 1.0;
    return ValueDistribution(std::move(knots), Family::beta,
                             "beta(" + fmt(p) + "," + fmt(q) + ")");
}

ValueDistribution ValueDistribution::mixture(
    std::span<const std::pair<double, ValueDistribution>> parts) {
    if (parts.empty()) throw SpecError("mixture needs at least one component");
    double total = 0.0;
    for (const auto& [w, d] : parts) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw SpecError("mixture weights must be nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw SpecError("mixture weights must not all be zero");

    std::vector<double> xs;
    for (const auto& part : parts) {
        for (const Knot& kn : part.second.knots()) xs.push_back(kn.x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<Knot> knots;
    knots.reserve(xs.size());
    for (double x : xs) {
        double fl = 0.0;
        double fr = 0.0;
        for (const auto& [w, d] : parts) {
            fl += w / total * d.cdf_left(x);
            fr += w / total * d.cdf(x);
        }
        knots.push_back({x, fl, fr});
    }
    std::string label = "mix(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) label += " + ";
        label += fmt(parts[i].first / total) + " " + parts[i].second.label();
    }
    label += ")";
    return ValueDistribution(std::move(knots), Family::mixture, std::move(label));
}

std::size_t ValueDistribution::segment_index(double x) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                               [](double v, const Knot& kn) { return v < kn.x; });
    if (it == knots_.begin()) return knots_.size();
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

double ValueDistribution::cdf(double x) const {
    check_unit(x, "cdf argument");
    const std::size_t k = segment_index(x);
    if (k == knots_.size()) return 0.0;
    const Knot& kn = knots_[k];
    if (kn.x == x || k + 1 == knots_.size()) return kn.f_right;
    const Knot& next = knots_[k + 1];
    const double w = (x - kn.x) / (next.x - kn.x);
    return kn.f_right + w * (next.f_left - kn.f_right);
}

double ValueDistribution::cdf_left(double x) const {
    check_unit(x, "cdf argument");
    auto it = std::lower_bound(knots_.begin(), knots_.end(), x,
                               [](const Knot& kn, double v) { return kn.x < v; });
    if (it != knots_.end() && it->x == x) return it->f_left;
    return cdf(x);
}

double ValueDistribution::quantile(double t) const {
    check_unit(t, "quantile level");
    if (t == 0.0) return 0.0;
    auto it = std::lower_bound(graph_.begin(), graph_.end(), t,
                               [](const Vertex& v, double level) { return v.f < level; });
    const std::size_t j = static_cast<std::size_t>(it - graph_.begin());
    const Vertex& hi = graph_[j];
    const Vertex& lo = graph_[j - 1];
    if (hi.x == lo.x) return hi.x;
    const double x = lo.x + (t - lo.f) / (hi.f - lo.f) * (hi.x - lo.x);
    return std::clamp(x, lo.x, hi.x);
}

double ValueDistribution::quantile_right(double t) const {
    check_unit(t, "quantile level");
    if (t == 1.0) return quantile(1.0);
    auto it = std::upper_bound(graph_.begin(), graph_.end(), t,
                               [](double level, const Vertex& v) { return level < v.f; });
    const std::size_t j = static_cast<std::size_t>(it - graph_.begin());
    const Vertex& hi = graph_[j];
    const Vertex& lo = graph_[j - 1];
    if (hi.x == lo.x) return hi.x;
    const double x = lo.x + (t - lo.f) / (hi.f - lo.f) * (hi.x - lo.x);
    return std::clamp(x, lo.x, hi.x);
}

double ValueDistribution::cdf_integral(double x) const {
    check_unit(x, "integration bound");
    const std::size_t k = segment_index(x);
    if (k == knots_.size()) return 0.0;
    const Knot& kn = knots_[k];
    const double dx = x - kn.x;
    if (k + 1 == knots_.size()) return knot_integral_[k] + dx;
    const Knot& next = knots_[k + 1];
    const double slope = (next.f_left - kn.f_right) / (next.x - kn.x);
    return knot_integral_[k] + dx * (kn.f_right + 0.5 * slope * dx);
}

double ValueDistribution::survival_integral(double h) const {
    check_unit(h, "highest bid");
    const double value = (1.0 - h) - (cdf_integral(1.0) - cdf_integral(h));
    return std::max(0.0, value);
}

double ValueDistribution::quantile_integral(double y) const {
    check_unit(y, "quantile level");
    // Integral of F^- over [0, y] equals y * F^-(y) - integral of F over [0, F^-(y)].
    const double x = quantile(y);
    const double head = y * x - cdf_integral(x);
    return std::max(0.0, mean() - head);
}

double ValueDistribution::max_atom() const {
    double best = 0.0;
    for (const Knot& kn : knots_) best = std::max(best, kn.f_right - kn.f_left);
    return best;
}

ZeroAtomSplit strip_zero_atom(const ValueDistribution& dist) {
    const double a = dist.cdf(0.0);
    if (a >= 1.0) throw DegenerateDistribution();
    if (a == 0.0) return {0.0, dist};
    std::vector<Knot> knots;
    for (const Knot& kn : dist.knots()) {
        if (kn.x == 0.0) {
            knots.push_back({0.0, 0.0, 0.0});
            continue;
        }
        knots.push_back({kn.x, std::max(0.0, (kn.f_left - a) / (1.0 - a)),
                         std::max(0.0, (kn.f_right - a) / (1.0 - a))});
    }
    return {a, ValueDistribution(std::move(knots), Family::tabulated,
                                 "conditional(" + dist.label() + " | v > 0)")};
}

namespace {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

ValueDistribution parse_tokens(std::span<const std::string> tokens) {
    if (tokens.empty()) throw SpecError("empty distribution spec");
    const std::string& kind = tokens[0];
    auto expect_args = [&](std::size_t n) {
        if (tokens.size() != n + 1) {
            throw SpecError("'" + kind + "' takes " + std::to_string(n) + " argument(s)");
        }
    };
    if (kind == "uniform") {
        expect_args(2);
        return ValueDistribution::uniform(parse_number(tokens[1], "uniform lower bound"),
                                          parse_number(tokens[2], "uniform upper bound"));
    }
    if (kind == "beta") {
        expect_args(2);
        return ValueDistribution::beta(parse_number(tokens[1], "beta p"),
                                       parse_number(tokens[2], "beta q"));
    }
    if (kind == "point") {
        expect_args(1);
        return ValueDistribution::point(parse_number(tokens[1], "point mass location"));
    }
    if (kind == "cdf") {
        expect_args(1);
        return read_cdf_csv(tokens[1]);
    }
    if (kind == "mix") {
        std::vector<std::pair<double, ValueDistribution>> parts;
        std::size_t begin = 1;
        while (begin <= tokens.size()) {
            std::size_t end = begin;
            while (end < tokens.size() && tokens[end] != "+") ++end;
            if (end - begin < 2) throw SpecError("mix component needs '<weight> <spec>'");
            if (tokens[begin + 1] == "mix") throw SpecError("nested mix is not supported");
            const double w = parse_number(tokens[begin], "mixture weight");
            parts.emplace_back(w, parse_tokens(tokens.subspan(begin + 1, end - begin - 1)));
            begin = end + 1;
        }
        if (parts.size() < 2) throw SpecError("mix needs at least two components");
        return ValueDistribution::mixture(parts);
    }
    throw SpecError("unknown distribution kind '" + kind + "'");
}

std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.back())) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && issp(s[i])) ++i;
    return s.substr(i);
}

}  // namespace

ValueDistribution make_distribution(std::string_view spec) {
    const auto tokens = tokenize(spec);
    return parse_tokens(tokens);
}

ValueDistribution read_cdf_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open CDF file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,F") {
        throw SpecError("CDF file '" + path + "' must start with header 'x,F'");
    }
    std::vector<Knot> knots;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw SpecError(path + ":" + std::to_string(lineno) + ": expected 'x,F'");
        }
        const double x = parse_number(trim(line.substr(0, comma)), "x");
        const double f = parse_number(trim(line.substr(comma + 1)), "F");
        if (!knots.empty() && x == knots.back().x) {
            if (f < knots.back().f_right) {
                throw SpecError(path + ":" + std::to_string(lineno) + ": F must be nondecreasing");
            }
            knots.back().f_right = f;
            continue;
        }
        if (!knots.empty() && x < knots.back().x) {
            throw SpecError(path + ":" + std::to_string(lineno) + ": x must be nondecreasing");
        }
        if (!knots.empty() && f < knots.back().f_right) {
            throw SpecError(path + ":" + std::to_string(lineno) + ": F must be nondecreasing");
        }
        knots.push_back({x, f, f});
    }
    if (knots.empty()) throw SpecError("CDF file '" + path + "' has no rows");
    // The CDF is zero below the first row, so mass there is an atom.
    knots.front().f_left = 0.0;
    return ValueDistribution(std::move(knots), Family::tabulated, "cdf(" + path + ")");
}

}  // namespace mmbid
