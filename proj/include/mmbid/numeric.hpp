#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace mmbid {

struct ScalarOptimum {
    double x;
    double value;
};

/**
 * Golden-section search for the maximum of f on [lo, hi], stopping once the
 * bracket is narrower than width. Returns the best point evaluated, including
 * the bracket ends, so a maximum sitting on the boundary (or a kink) is found
 * even when f is not unimodal.
 */
ScalarOptimum golden_section_maximize(const std::function<double(double)>& f, double lo,
                                      double hi, double width);

inline ScalarOptimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                             double hi, double width) {
    auto best = golden_section_maximize([&](double x) { return -f(x); }, lo, hi, width);
    return {best.x, -best.value};
}

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

/// Parses a full token as a finite double. Throws SpecError otherwise.
double parse_number(std::string_view token, std::string_view what);

/// Fixed 9-significant-digit decimal rendering used by every CSV writer.
/// Never uses exponent notation; NaN renders as "nan".
std::string format_sig9(double value);

}  // namespace mmbid
