#include <doctest.h>

#include <cmath>
#include <vector>

#include "sevrel/errors.hpp"
#include "sevrel/gaussian.hpp"
#include "sevrel/random.hpp"

namespace g = sevrel::gaussian;

namespace {

// Reference values computed with 40-digit arithmetic (mpmath).
struct DeficitRow {
    double b;
    double f;
    double slope;
};

const DeficitRow kDeficitTable[] = {
    {0.1, 0.76261747153093614, -0.34215284496266819},
    {0.5, 0.64107777036806448, -0.26848040715587895},
    {1.0, 0.52513527616098121, -0.19909766557034879},
    {2.0, 0.37321553282284087, -0.11427910041408126},
    {3.0, 0.28309865493043651, -0.070559186785268117},
    {3.5, 0.25139126485769973, -0.056933004951296804},
    {5.0, 0.18650396712584212, -0.032696434617112225},
    {7.999, 0.12138243876567854, -0.014328175872633658},
    {8.0, 0.12136811223611268, -0.01432488344334091},
    {8.001, 0.12135378899842344, -0.014321592119340282},
    {10.0, 0.098093233962511963, -0.0094453778256562612},
    {20.0, 0.049753068527850542, -0.0024632616150521636},
    {40.0, 0.024968847207263723, -0.00062266837859138877},
    {100.0, 0.0099980009992607052, -9.994004994826345e-5},
};

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("endpoint constant is 2/sqrt(2 pi)") {
    CHECK(g::kDeficitEndpoint == 2.0 / std::sqrt(2.0 * 3.14159265358979323846));
    CHECK(g::kDeficitEndpoint == 0.7978845608028654);
}

TEST_CASE("cdf agrees with high-precision values deep in the lower tail") {
    CHECK(rel_err(g::cdf(-1.0), 0.15865525393145705) < 1e-14);
    CHECK(rel_err(g::cdf(-5.0), 2.8665157187919391e-7) < 1e-13);
    CHECK(rel_err(g::cdf(-10.0), 7.6198530241605261e-24) < 1e-13);
    CHECK(rel_err(g::cdf(-20.0), 2.7536241186062337e-89) < 1e-12);
    CHECK(g::cdf(-38.0) > 0.0);
    CHECK(g::cdf(0.0) == 0.5);
}

TEST_CASE("quantile matches reference and inverts cdf") {
    CHECK(rel_err(g::quantile(1e-10), -6.3613409024040562) < 1e-14);
    CHECK(rel_err(g::quantile(0.001), -3.0902323061678135) < 1e-14);
    CHECK(rel_err(g::quantile(0.025), -1.9599639845400542) < 1e-14);
    CHECK(rel_err(g::quantile(0.975), 1.9599639845400542) < 1e-14);
    CHECK(rel_err(g::quantile(0.999999), 4.7534243088228989) < 1e-11);
    CHECK(g::quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    for (double p : {1e-300, 1e-20, 0.01, 0.3, 0.7, 0.99}) {
        CHECK(rel_err(g::cdf(g::quantile(p)), p) < 1e-12);
    }
    CHECK_THROWS_AS(g::quantile(0.0), sevrel::DomainError);
    CHECK_THROWS_AS(g::quantile(1.0), sevrel::DomainError);
    CHECK_THROWS_AS(g::quantile(std::nan("")), sevrel::DomainError);
}

TEST_CASE("deficit map and slope against reference table") {
    for (const auto& row : kDeficitTable) {
        CAPTURE(row.b);
        CHECK(rel_err(g::deficit_map(row.b), row.f) < 1e-12);
        CHECK(rel_err(g::deficit_map_slope(row.b), row.slope) < 1e-9);
    }
}

TEST_CASE("deficit map is continuous across the continued-fraction switch") {
    const double below = g::deficit_map(std::nextafter(g::kContinuedFractionSwitch, 0.0));
    const double at = g::deficit_map(g::kContinuedFractionSwitch);
    CHECK(std::abs(below - at) < 1e-12);
}

TEST_CASE("deficit map rejects non-positive indices") {
    CHECK_THROWS_AS(g::deficit_map(0.0), sevrel::DomainError);
    CHECK_THROWS_AS(g::deficit_map(-1.0), sevrel::DomainError);
    CHECK_THROWS_AS(g::deficit_map_slope(0.0), sevrel::DomainError);
    CHECK(g::deficit_map(1e-12) < g::kDeficitEndpoint);
    CHECK(g::deficit_map(1e-12) == doctest::Approx(g::kDeficitEndpoint).epsilon(1e-11));
}

TEST_CASE("deficit map is strictly decreasing on a fine grid") {
    double previous = g::deficit_map(1e-6);
    for (int i = 1; i <= 20000; ++i) {
        const double b = 1e-6 + 60.0 * i / 20000.0;
        const double f = g::deficit_map(b);
        REQUIRE(f < previous);
        previous = f;
    }
}

TEST_CASE("slope agrees with a central difference") {
    for (double b = 0.05; b < 30.0; b *= 1.3) {
        const double h = 1e-5 * std::max(1.0, b);
        const double fd = (g::deficit_map(b + h) - g::deficit_map(b - h)) / (2 * h);
        CAPTURE(b);
        CHECK(std::abs(fd - g::deficit_map_slope(b)) < 1e-6);
    }
}

TEST_CASE("conditional tail mean satisfies r(b) > b and r - b -> 1/b") {
    for (double b : {0.0, 0.5, 3.0, 9.0, 50.0}) CHECK(g::conditional_tail_mean(b) > b);
    CHECK(g::conditional_tail_mean(0.0) == doctest::Approx(2.0 * g::kInvSqrt2Pi).epsilon(1e-15));
    CHECK(g::conditional_tail_mean(1e4) - 1e4 == doctest::Approx(1e-4).epsilon(1e-7));
}

TEST_CASE("truncated variance identity against simulation") {
    // Var(Z | Z > b) from rejection sampling; check within 3 standard errors.
    for (double b : {0.0, 1.0, 2.0}) {
        sevrel::RandomStream stream(2024, static_cast<std::uint64_t>(b * 10));
        std::vector<double> kept;
        while (kept.size() < 400000) {
            const double z = g::quantile(stream.uniform());
            if (z > b) kept.push_back(z);
        }
        double mean = 0.0;
        for (double z : kept) mean += z;
        mean /= kept.size();
        double m2 = 0.0, m4 = 0.0;
        for (double z : kept) {
            const double d = (z - mean) * (z - mean);
            m2 += d;
            m4 += d * d;
        }
        const double n = static_cast<double>(kept.size());
        const double var = m2 / (n - 1);
        const double se = std::sqrt((m4 / n - var * var) / n);
        CAPTURE(b);
        CHECK(std::abs(var - g::truncated_variance(b)) < 3.0 * se);
        CHECK(std::abs(mean - g::conditional_tail_mean(b)) < 3.0 * std::sqrt(var / n));
    }
}

TEST_CASE("inverse against reference roots") {
    CHECK(g::invert_deficit_map(0.4741) == doctest::Approx(1.2776050543959377).epsilon(1e-10));
    CHECK(g::invert_deficit_map(0.3040) == doctest::Approx(2.7220189534176702).epsilon(1e-10));
    CHECK(g::invert_deficit_map(0.1) == doctest::Approx(9.8019074062005629).epsilon(1e-10));
    CHECK(g::invert_deficit_map(0.79) == doctest::Approx(0.02184036806428434).epsilon(1e-8));
    CHECK(g::invert_deficit_map(0.001) == doctest::Approx(999.99800000199999).epsilon(1e-10));
}

TEST_CASE("inverse residual stays below tolerance across the domain") {
    for (int i = 0; i < 1000; ++i) {
        const double y = 1e-4 + (g::kDeficitEndpoint - 2e-4) * i / 999.0;
        const double b = g::invert_deficit_map(y);
        CAPTURE(y);
        CHECK(std::abs(g::deficit_map(b) - y) <= g::kInverseTolerance);
    }
}

TEST_CASE("forward-inverse round trip") {
    for (double b : {0.01, 0.3, 1.0, 2.7735, 4.0, 7.9, 8.1, 15.0, 60.0}) {
        CHECK(g::invert_deficit_map(g::deficit_map(b)) == doctest::Approx(b).epsilon(1e-9));
    }
}

TEST_CASE("deficit domain validation") {
    CHECK_THROWS_AS(sevrel::gaussian::DeficitDomain(0.0), sevrel::DomainError);
    CHECK_THROWS_AS(sevrel::gaussian::DeficitDomain(-0.2), sevrel::DomainError);
    CHECK_THROWS_AS(sevrel::gaussian::DeficitDomain(g::kDeficitEndpoint), sevrel::OutOfGaussianDomain);
    CHECK_THROWS_AS(g::invert_deficit_map(0.9), sevrel::OutOfGaussianDomain);
    try {
        g::invert_deficit_map(1.5);
    } catch (const sevrel::OutOfGaussianDomain& e) {
        CHECK(e.value() == 1.5);
    }
    CHECK_FALSE(g::DeficitDomain::try_make(0.8).has_value());
    CHECK_FALSE(g::DeficitDomain::try_make(std::nan("")).has_value());
    REQUIRE(g::DeficitDomain::try_make(0.5).has_value());
    CHECK(g::DeficitDomain::try_make(0.5)->value() == 0.5);
}

}
