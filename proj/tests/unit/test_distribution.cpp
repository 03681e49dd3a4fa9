#include <doctest.h>

#include "mmbid/distribution.hpp"
#include "mmbid/errors.hpp"

#include <cmath>

using namespace mmbid;

namespace {

const std::string kData = MMBID_TEST_DATA;

ValueDistribution zero_atom_mix() { return make_distribution("mix 0.3 point 0 + 0.7 uniform 0 1"); }

}  // namespace

TEST_CASE("cdf examples") {
    const auto u = ValueDistribution::uniform(0.0, 1.0);
    CHECK(u.cdf(0.3) == doctest::Approx(0.3).epsilon(1e-15));

    const auto p = ValueDistribution::point(1.0);
    CHECK(p.cdf(0.999) == 0.0);
    CHECK(p.cdf(1.0) == 1.0);
    CHECK(p.cdf_left(1.0) == 0.0);

    const auto m = zero_atom_mix();
    CHECK(m.cdf(0.0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(m.cdf_left(0.0) == 0.0);
    CHECK(m.cdf(0.5) == doctest::Approx(0.65).epsilon(1e-15));
}

TEST_CASE("cdf and quantile reject arguments outside [0,1]") {
    const auto u = ValueDistribution::uniform(0.0, 1.0);
    CHECK_THROWS_AS(u.cdf(-0.1), DomainError);
    CHECK_THROWS_AS(u.cdf(1.5), DomainError);
    CHECK_THROWS_AS(u.quantile(-1e-3), DomainError);
    CHECK_THROWS_AS(u.quantile(1.0 + 1e-9), DomainError);
    CHECK_THROWS_AS(u.cdf(std::nan("")), DomainError);
}

TEST_CASE("quantile examples") {
    CHECK(ValueDistribution::uniform(0.5, 1.0).quantile(0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(ValueDistribution::point(1.0).quantile(0.5) == 1.0);
    CHECK(zero_atom_mix().quantile(0.2) == 0.0);
    CHECK(zero_atom_mix().quantile(0.3) == 0.0);
    CHECK(zero_atom_mix().quantile(0.65) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quantile on a flat returns the left end") {
    // F = 0.5 on [0.25, 0.75]
    const auto m = make_distribution("mix 0.5 uniform 0 0.25 + 0.5 uniform 0.75 1");
    CHECK(m.quantile(0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(m.quantile_right(0.5) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(m.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("quantile(0) is 0 and quantile_right(0) is the bottom of the support") {
    const auto u = ValueDistribution::uniform(0.5, 1.0);
    CHECK(u.quantile(0.0) == 0.0);
    CHECK(u.quantile_right(0.0) == 0.5);
    CHECK(u.support_min() == 0.5);
    CHECK(ValueDistribution::point(1.0).quantile_right(0.0) == 1.0);
    CHECK(ValueDistribution::point(1.0).quantile_right(1.0) == 1.0);
}

TEST_CASE("survival integral examples") {
    const auto u = ValueDistribution::uniform(0.0, 1.0);
    CHECK(u.survival_integral(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u.survival_integral(0.5) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(u.survival_integral(1.0) == 0.0);
    CHECK(ValueDistribution::point(1.0).survival_integral(0.3) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(zero_atom_mix().survival_integral(0.0) == doctest::Approx(0.35).epsilon(1e-15));
}

TEST_CASE("mean examples") {
    CHECK(ValueDistribution::uniform(0.5, 1.0).mean() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(ValueDistribution::beta(2.0, 2.0).mean() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ValueDistribution::point(1.0).mean() == 1.0);
}

TEST_CASE("mean computed from the quantile side agrees") {
    for (const char* spec : {"uniform 0 1", "uniform 0.25 0.75", "beta 2 2", "beta 0.5 0.5", "beta 3 1.5",
                             "point 0.4", "mix 0.3 point 0 + 0.7 uniform 0 1",
                             "mix 0.5 point 0 + 0.5 point 1"}) {
        INFO(std::string(spec));
        const auto f = make_distribution(spec);
        CHECK(std::abs(f.quantile_integral(0.0) - f.survival_integral(0.0)) <= 1e-9);
    }
}

TEST_CASE("strip_zero_atom examples") {
    SUBCASE("no atom") {
        const auto split = strip_zero_atom(ValueDistribution::uniform(0.0, 1.0));
        CHECK(split.atom == 0.0);
        CHECK(split.conditional.cdf(0.4) == doctest::Approx(0.4).epsilon(1e-15));
    }
    SUBCASE("atom with uniform remainder") {
        const auto split = strip_zero_atom(zero_atom_mix());
        CHECK(split.atom == doctest::Approx(0.3).epsilon(1e-15));
        CHECK(split.conditional.cdf(0.0) == 0.0);
        for (double x : {0.1, 0.37, 0.8}) CHECK(split.conditional.cdf(x) == doctest::Approx(x).epsilon(1e-12));
    }
    SUBCASE("two point masses") {
        const auto split = strip_zero_atom(make_distribution("mix 0.5 point 0 + 0.5 point 1"));
        CHECK(split.atom == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(split.conditional.cdf(0.999) == 0.0);
        CHECK(split.conditional.cdf(1.0) == 1.0);
    }
    SUBCASE("point at zero is degenerate") {
        CHECK_THROWS_AS(strip_zero_atom(ValueDistribution::point(0.0)), DegenerateDistribution);
    }
}

TEST_CASE("strip_zero_atom round trip") {
    for (const char* spec : {"mix 0.3 point 0 + 0.7 uniform 0 1", "mix 0.2 point 0 + 0.5 beta 2 5 + 0.3 point 0.6",
                             "mix 0.5 point 0 + 0.5 point 1"}) {
        INFO(std::string(spec));
        const auto f = make_distribution(spec);
        const auto split = strip_zero_atom(f);
        for (int k = 0; k <= 200; ++k) {
            const double x = k / 200.0;
            const double rebuilt = split.atom + (1.0 - split.atom) * split.conditional.cdf(x);
            CHECK(std::abs(rebuilt - f.cdf(x)) <= 1e-12);
        }
    }
}

TEST_CASE("make_distribution examples") {
    const auto u = make_distribution("uniform 0 1");
    CHECK(u.family() == Family::uniform);
    CHECK(u.cdf(0.25) == 0.25);

    const auto p = make_distribution("point 1");
    CHECK(p.family() == Family::point);
    CHECK(p.max_atom() == 1.0);

    const auto b = make_distribution("beta 1 1");
    double worst = 0.0;
    for (int k = 0; k <= 10000; ++k) {
        const double x = k / 10000.0;
        worst = std::max(worst, std::abs(b.cdf(x) - x));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("beta tabulation matches closed-form CDFs") {
    struct Case {
        const char* spec;
        double (*cdf)(double);
    };
    const Case cases[] = {
        {"beta 2 2", [](double x) { return x * x * (3 - 2 * x); }},
        {"beta 0.5 0.5", [](double x) { return 2.0 / M_PI * std::asin(std::sqrt(x)); }},
        {"beta 2 1", [](double x) { return x * x; }},
        {"beta 0.2 1", [](double x) { return std::pow(x, 0.2); }},
        {"beta 1 3", [](double x) { return 1 - std::pow(1 - x, 3); }},
    };
    for (const auto& c : cases) {
        INFO(std::string(c.spec));
        const auto f = make_distribution(c.spec);
        CHECK(f.knots().size() <= 4096);
        double at_knots = 0.0;
        for (const Knot& k : f.knots()) at_knots = std::max(at_knots, std::abs(k.f_right - c.cdf(k.x)));
        CHECK(at_knots <= 1e-9);
    }
}

TEST_CASE("beta interpolation error between knots") {
    // Linear interpolation on 4096 knots: bounded by h^2 max|f'| / 8 for smooth densities.
    const std::pair<const char*, double (*)(double)> smooth[] = {
        {"beta 2 2", [](double x) { return x * x * (3 - 2 * x); }},
        {"beta 2 1", [](double x) { return x * x; }},
        {"beta 1 3", [](double x) { return 1 - std::pow(1 - x, 3); }},
    };
    for (const auto& [spec, cdf] : smooth) {
        INFO(std::string(spec));
        const auto f = make_distribution(spec);
        double worst = 0.0;
        for (int k = 0; k <= 200000; ++k) worst = std::max(worst, std::abs(f.cdf(k / 200000.0) - cdf(k / 200000.0)));
        CHECK(worst <= 1e-7);
    }
}

TEST_CASE("tabulated CDF from CSV") {
    const auto f = make_distribution("cdf " + kData + "/atom_half.csv");
    CHECK(f.family() == Family::tabulated);
    CHECK(f.cdf(0.1) == 0.0);
    CHECK(f.cdf(0.35) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(f.cdf_left(0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(f.cdf(0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(f.max_atom() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.quantile(0.1) == doctest::Approx(0.32).epsilon(1e-14));
    CHECK(f.quantile(0.25) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.quantile(0.6) == 0.5);
    CHECK(f.quantile(0.75) == 0.5);
    CHECK(f.quantile_right(0.75) == 0.5);
}

TEST_CASE("malformed specs are rejected") {
    for (const char* spec : {"", "uniform", "uniform 0", "uniform 0.6 0.2", "uniform -0.1 1", "uniform 0 1.2",
                             "beta 0 1", "beta -1 2", "beta 1", "point 2", "point x", "gamma 1 2",
                             "mix 0.5 point 0", "mix 0.5 point 0 +", "mix -1 point 0 + 2 point 1",
                             "mix 0.5 mix 1 point 0 + 0.5 point 1", "uniform 0 1 extra", "cdf",
                             "uniform nan 1"}) {
        INFO(std::string(spec));
        CHECK_THROWS_AS(make_distribution(spec), SpecError);
    }
    CHECK_THROWS_AS(make_distribution("cdf " + kData + "/bad_header.csv"), SpecError);
    CHECK_THROWS_AS(make_distribution("cdf " + kData + "/missing.csv"), SpecError);
}

TEST_CASE("knot validation") {
    CHECK_THROWS_AS(ValueDistribution({{0.5, 0.0, 0.2}, {0.4, 0.2, 1.0}}), SpecError);
    CHECK_THROWS_AS(ValueDistribution({{0.0, 0.0, 0.5}, {1.0, 0.4, 1.0}}), SpecError);
    CHECK_THROWS_AS(ValueDistribution({{0.0, 0.0, 0.5}, {1.0, 0.5, 0.9}}), SpecError);
    CHECK_THROWS_AS(ValueDistribution({}), SpecError);
    CHECK_NOTHROW(ValueDistribution({{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}));
}

TEST_CASE("mixture weights are normalised") {
    const auto m = make_distribution("mix 3 point 0 + 7 uniform 0 1");
    CHECK(m.cdf(0.0) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(m.family() == Family::mixture);
}
