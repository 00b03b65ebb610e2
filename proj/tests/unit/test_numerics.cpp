#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracle/oracle.hpp"
#include "pvaudit/errors.hpp"
#include "pvaudit/numerics.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

using namespace pvaudit::numerics;
namespace oracle = pvaudit::oracle;

namespace {

double rel_err(double got, double want) {
    if (want == 0.0) {
        return std::abs(got);
    }
    return std::abs(got - want) / std::abs(want);
}

} // namespace

TEST_CASE("normal_sf examples") {
    CHECK(normal_sf(0.0) == 0.5);
    // Table 3 rank 1: 2 * sf(3.5216) prints as 0.000429
    CHECK(2.0 * normal_sf(3.5216) == doctest::Approx(0.000429).epsilon(0.002));
    CHECK(rel_err(normal_sf(5.0), 2.8665157187919391e-7) < 1e-12);
}

TEST_CASE("normal_sf rejects non-finite input") {
    CHECK_THROWS_AS(normal_sf(std::numeric_limits<double>::quiet_NaN()), pvaudit::DomainError);
    CHECK_THROWS_AS(normal_sf(std::numeric_limits<double>::infinity()), pvaudit::DomainError);
    CHECK_THROWS_AS(normal_sf_log10(-std::numeric_limits<double>::infinity()), pvaudit::DomainError);
    CHECK_THROWS_AS(normal_two_sided_log10(std::numeric_limits<double>::quiet_NaN()),
                    pvaudit::DomainError);
}

TEST_CASE("normal_sf agrees with the arbitrary-precision oracle") {
    for (const auto& pt : oracle::kNormalOracle) {
        CAPTURE(pt.z);
        CHECK(rel_err(normal_sf(pt.z), pt.sf) < 1e-12);
        CHECK(std::abs(normal_sf_log10(pt.z).neg_log10_p() - pt.neg_log10_sf) < 1e-9);
    }
}

TEST_CASE("normal_sf complementarity on a dense grid") {
    for (int i = -100000; i <= 100000; ++i) {
        const double z = i * 1e-4;
        const double sum = normal_sf(z) + normal_sf(-z);
        REQUIRE(std::abs(sum - 1.0) <= 1e-15);
    }
}

TEST_CASE("log and linear normal tails agree on [0, 30]") {
    for (int i = 0; i <= 30000; ++i) {
        const double z = i * 1e-3;
        const double p = normal_sf(z);
        REQUIRE(p > 1e-300);
        CAPTURE(z);
        REQUIRE(std::abs(normal_sf_log10(z).neg_log10_p() + std::log10(p)) < 1e-10);
    }
}

TEST_CASE("two-sided log tail reproduces the one-sample extremes") {
    CHECK(normal_two_sided_log10(0.0).neg_log10_p() == 0.0);
    CHECK(std::abs(normal_two_sided_log10(12.0).neg_log10_p() - 32.4495) < 0.001);
    CHECK(std::abs(normal_two_sided_log10(0.43 / 0.0146).neg_log10_p() - 189.93) < 0.01);
    // continuity at the asymptotic cutover
    const double below = normal_two_sided_log10(std::nextafter(8.0, 0.0)).neg_log10_p();
    const double above = normal_two_sided_log10(std::nextafter(8.0, 9.0)).neg_log10_p();
    CHECK(std::abs(below - above) < 1e-12);
}

TEST_CASE("normal tails are monotone on randomized grids") {
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> dist(-40.0, 40.0);
    for (int trial = 0; trial < 2000; ++trial) {
        double a = dist(gen);
        double b = dist(gen);
        if (a > b) {
            std::swap(a, b);
        }
        REQUIRE(normal_sf(a) >= normal_sf(b));
        REQUIRE(normal_sf_log10(a).neg_log10_p() <= normal_sf_log10(b).neg_log10_p());
    }
}

TEST_CASE("LogTail round trip") {
    for (double p : {1.0, 0.5, 1e-3, 3.7e-17, 2.2e-150, 1.5e-299}) {
        const LogTail t = LogTail::from_probability(p);
        CHECK(rel_err(t.probability(), p) < 1e-15 * std::max(1.0, t.neg_log10_p()));
    }
    CHECK(LogTail::from_probability(1.0).neg_log10_p() == 0.0);
    CHECK_THROWS_AS(LogTail::from_probability(0.0), pvaudit::DomainError);
    CHECK_THROWS_AS(LogTail::from_probability(1.5), pvaudit::DomainError);
    CHECK_THROWS_AS(LogTail::from_neg_log10(-0.1), pvaudit::DomainError);
}

TEST_CASE("chisq_sf examples") {
    CHECK(chisq_sf(0.0, 166) == 1.0);
    CHECK(std::abs(chisq_sf(160.63, 166) - 0.603) < 0.001);
    CHECK(std::abs(chisq_sf(186.54, 158) - 0.0600) < 0.0005);
    CHECK(chisq_sf(322.51, 174) < 1e-4);
}

TEST_CASE("chisq_sf domain errors") {
    CHECK_THROWS_AS(chisq_sf(-1.0, 2), pvaudit::DomainError);
    CHECK_THROWS_AS(chisq_sf(1.0, 0), pvaudit::DomainError);
    CHECK_THROWS_AS(chisq_sf(std::numeric_limits<double>::quiet_NaN(), 3), pvaudit::DomainError);
    CHECK(chisq_sf(std::numeric_limits<double>::infinity(), 3) == 0.0);
}

TEST_CASE("chisq_sf agrees with the arbitrary-precision oracle") {
    for (const auto& pt : oracle::kChisqOracle) {
        CAPTURE(pt.x);
        CAPTURE(pt.df);
        CHECK(rel_err(chisq_sf(pt.x, pt.df), pt.sf) < 1e-12);
    }
}

TEST_CASE("chisq_sf with two degrees of freedom is exp(-x/2)") {
    for (int i = 0; i <= 4000; ++i) {
        const double x = i * 0.25;
        CAPTURE(x);
        REQUIRE(rel_err(chisq_sf(x, 2), std::exp(-0.5 * x)) < 1e-12);
    }
}

TEST_CASE("chisq_sf is monotone in x") {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<int> df_dist(1, 10000);
    for (int trial = 0; trial < 300; ++trial) {
        const int df = df_dist(gen);
        std::uniform_real_distribution<double> x_dist(0.0, 2.5 * df + 20.0);
        double prev = 1.0;
        double x = 0.0;
        for (int step = 0; step < 40; ++step) {
            x += x_dist(gen) / 40.0;
            const double q = chisq_sf(x, df);
            REQUIRE(q <= prev);
            REQUIRE(q >= 0.0);
            prev = q;
        }
    }
}
