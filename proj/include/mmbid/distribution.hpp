#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mmbid {

/// A knot of a piecewise-linear CDF. The CDF jumps from f_left to f_right at x;
/// f_right > f_left encodes an atom of mass f_right - f_left.
struct Knot {
    double x;
    double f_left;
    double f_right;
};

enum class Family { uniform, beta, point, mixture, tabulated };

/**
 * Value distribution on [0,1], stored as a right-continuous piecewise-linear CDF
 * with jumps at knots.
 *
 * Below the first knot the CDF is 0, above the last knot it is 1, and between
 * consecutive knots it interpolates linearly from f_right of the left knot to
 * f_left of the right knot. Uniform, point and mixtures of those are represented
 * exactly; beta laws are tabulated.
 *
 * Instances are immutable and safe to share across threads.
 */
class ValueDistribution {
public:
    /// Validates the knot sequence. Throws SpecError on violated invariants.
    explicit ValueDistribution(std::vector<Knot> knots, Family family = Family::tabulated,
                               std::string label = "tabulated");

    static ValueDistribution uniform(double a, double b);
    static ValueDistribution point(double v);
    /// Tabulated onto a 4096-knot CDF by adaptive Simpson quadrature of the density.
    static ValueDistribution beta(double p, double q);
    /// Weighted mixture; weights are normalised to sum to one.
    static ValueDistribution mixture(std::span<const std::pair<double, ValueDistribution>> parts);

    /// Right-continuous CDF F(x).
    double cdf(double x) const;
    /// Left limit F(x-), i.e. P(v < x).
    double cdf_left(double x) const;

    /// Generalised inverse inf{x : F(x) >= t}. quantile(0) == 0.
    double quantile(double t) const;
    /// Right limit of the generalised inverse, inf{x : F(x) > t}. At t = 0 this is
    /// the bottom of the support; at t = 1 it falls back to quantile(1).
    double quantile_right(double t) const;

    /// Integral of (1 - F) over [h, 1], i.e. E[(v - h)^+].
    double survival_integral(double h) const;
    /// Integral of F over [0, x].
    double cdf_integral(double x) const;
    /// Integral of the generalised inverse over [y, 1].
    double quantile_integral(double y) const;
    double mean() const { return survival_integral(0.0); }

    /// Largest atom mass; zero for atomless laws.
    double max_atom() const;
    /// Bottom of the support, inf{x : F(x) > 0}.
    double support_min() const { return quantile_right(0.0); }

    std::span<const Knot> knots() const { return knots_; }
    Family family() const { return family_; }
    const std::string& label() const { return label_; }

private:
    struct Vertex {
        double x;
        double f;
    };

    std::size_t segment_index(double x) const;

    std::vector<Knot> knots_;
    // The CDF graph as a monotone polyline in (x, F), with vertical pieces at
    // atoms and horizontal pieces on flats. Used for the generalised inverse.
    std::vector<Vertex> graph_;
    // cdf_integral at each knot.
    std::vector<double> knot_integral_;
    Family family_;
    std::string label_;
};

/// Conditional law on (0,1] together with the mass of the atom at 0.
struct ZeroAtomSplit {
    double atom;
    ValueDistribution conditional;
};

/// Splits F into a * delta_0 + (1 - a) * F_cond. Throws DegenerateDistribution when a == 1.
ZeroAtomSplit strip_zero_atom(const ValueDistribution& dist);

/**
 * Builds a distribution from a one-line spec:
 *   uniform <a> <b> | beta <p> <q> | point <v>
 *   mix <w1> <spec1> + <w2> <spec2> [+ ...]
 *   cdf <path>      (CSV with header "x,F"; a repeated x encodes a jump)
 * Throws SpecError on malformed input.
 */
ValueDistribution make_distribution(std::string_view spec);

/// Reads a two-column "x,F" CSV into a tabulated distribution.
ValueDistribution read_cdf_csv(const std::string& path);

}  // namespace mmbid
