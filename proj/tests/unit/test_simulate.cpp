#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pvaudit/errors.hpp"
#include "pvaudit/multiplicity.hpp"
#include "pvaudit/pvplot.hpp"
#include "pvaudit/rng.hpp"
#include "pvaudit/simulate.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <vector>

using namespace pvaudit;
using namespace pvaudit::simulate;

namespace {

std::vector<double> chi_squares(const SimSpec& base, int reps) {
    std::vector<double> out;
    for (int s = 0; s < reps; ++s) {
        SimSpec spec = base;
        spec.seed = base.seed + static_cast<std::uint64_t>(s);
        const auto plot = pvplot::build_plot(generate(spec));
        std::vector<numerics::LogTail> logs;
        for (const auto& e : plot.entries) {
            logs.push_back(e.log_p);
        }
        out.push_back(multiplicity::fisher_combine(logs).chi_square);
    }
    return out;
}

double variance(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(v.size() - 1);
}

} // namespace

TEST_CASE("rng streams are deterministic and distinct") {
    rng::Stream a(42, rng::Stream::Domain::study, 0);
    rng::Stream b(42, rng::Stream::Domain::study, 0);
    rng::Stream c(42, rng::Stream::Domain::study, 1);
    rng::Stream d(42, rng::Stream::Domain::cluster, 0);
    std::set<std::uint64_t> firsts;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        firsts.insert(x);
    }
    CHECK(firsts.size() == 100);
    CHECK(rng::Stream(42, rng::Stream::Domain::study, 0).next_u64() != c.next_u64());
    CHECK(rng::Stream(42, rng::Stream::Domain::study, 0).next_u64() != d.next_u64());

    rng::Stream u(1, rng::Stream::Domain::study, 3);
    double sum = 0.0;
    double sum2 = 0.0;
    constexpr int kDraws = 200000;
    for (int i = 0; i < kDraws; ++i) {
        const double x = u.uniform();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        const double z = u.standard_normal();
        sum += z;
        sum2 += z * z;
    }
    CHECK(std::abs(sum / kDraws) < 0.02);
    CHECK(std::abs(sum2 / kDraws - 1.0) < 0.02);

    for (int i = 0; i < 1000; ++i) {
        const auto v = u.uniform_int(20, 25);
        REQUIRE(v >= 20);
        REQUIRE(v <= 25);
    }
}

TEST_CASE("same spec, same dataset") {
    SimSpec spec;
    spec.k = 200;
    spec.sample_sizes = SampleSizeRange{20, 200};
    spec.rho = 0.1;
    spec.cluster_size = 4;
    spec.seed = 99;
    CHECK(generate(spec) == generate(spec));
    SimSpec other = spec;
    other.seed = 100;
    CHECK_FALSE(generate(spec) == generate(other));
}

TEST_CASE("prefix stability: study i does not depend on k") {
    SimSpec small;
    small.k = 10;
    small.seed = 5;
    SimSpec large = small;
    large.k = 100;
    const auto a = generate(small);
    const auto b = generate(large);
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i] == b.records[i]);
    }
}

TEST_CASE("sample sizes: list cycles, range stays in bounds") {
    SimSpec spec;
    spec.k = 7;
    spec.sample_sizes = std::vector<int>{10, 20, 30};
    const auto d = generate(spec);
    const int expected[] = {10, 20, 30, 10, 20, 30, 10};
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(d.records[i].effect.n() == expected[i]);
    }
    spec.k = 500;
    spec.sample_sizes = SampleSizeRange{30, 40};
    std::set<int> seen;
    for (const auto& r : generate(spec).records) {
        CHECK(r.effect.n() >= 30);
        CHECK(r.effect.n() <= 40);
        seen.insert(r.effect.n());
    }
    CHECK(seen.size() == 11);
}

TEST_CASE("invalid specs are usage errors") {
    auto bad = [](auto mutate) {
        SimSpec s;
        mutate(s);
        return s;
    };
    CHECK_THROWS_AS(validate(bad([](SimSpec& s) { s.k = 0; })), UsageError);
    CHECK_THROWS_AS(validate(bad([](SimSpec& s) { s.rho = 1.0; })), UsageError);
    CHECK_THROWS_AS(validate(bad([](SimSpec& s) { s.sample_sizes = std::vector<int>{}; })), UsageError);
    CHECK_THROWS_AS(validate(bad([](SimSpec& s) { s.sample_sizes = std::vector<int>{3}; })), UsageError);
    CHECK_THROWS_AS(validate(bad([](SimSpec& s) { s.sample_sizes = SampleSizeRange{50, 40}; })), UsageError);
    CHECK_THROWS_AS(validate(bad([](SimSpec& s) { s.cluster_size = 0; })), UsageError);
    CHECK_NOTHROW(validate(SimSpec{}));
}

TEST_CASE("null model gives uniform p-values") {
    SimSpec spec;
    spec.k = 2000;
    spec.seed = 11;
    const auto plot = pvplot::build_plot(generate(spec));
    // 1.63 / sqrt(k) is the 1% critical value
    CHECK(plot.ks_d < 1.63 / std::sqrt(2000.0));
    CHECK(plot.n_below_alpha > 60);
    CHECK(plot.n_below_alpha < 140);
    CHECK(plot.n_positive > 900);
    CHECK(plot.n_negative > 900);
}

TEST_CASE("marginal z keeps mean atanh(rho) and variance 1/(n-3) under clustering") {
    SimSpec spec;
    spec.k = 20000;
    spec.rho = 0.3;
    spec.cluster_size = 5;
    spec.seed = 3;
    const auto d = generate(spec);
    std::vector<double> z;
    for (const auto& r : d.records) {
        z.push_back(std::atanh(r.effect.r()));
    }
    const double mean = std::accumulate(z.begin(), z.end(), 0.0) / static_cast<double>(z.size());
    CHECK(mean == doctest::Approx(std::atanh(0.3)).epsilon(0.02));
    CHECK(variance(z) == doctest::Approx(1.0 / 47.0).epsilon(0.05));
}

TEST_CASE("a real effect is detected") {
    SimSpec spec;
    spec.k = 100;
    spec.rho = 0.3;
    spec.seed = 8;
    const auto plot = pvplot::build_plot(generate(spec));
    CHECK(plot.n_below_alpha > 40); // power is about 0.56 at n = 50
    CHECK(plot.ks_d > 0.5);
}

TEST_CASE("cluster dependence inflates the spread of the combined statistic") {
    SimSpec independent;
    independent.k = 100;
    independent.seed = 1000;
    SimSpec clustered = independent;
    clustered.cluster_size = 10;
    const auto v_ind = variance(chi_squares(independent, 300));
    const auto v_clu = variance(chi_squares(clustered, 300));
    const double nominal = 2.0 * 200.0; // Var chi-square_df = 2 df
    CHECK(v_ind == doctest::Approx(nominal).epsilon(0.25));
    CHECK(v_clu > 1.5 * nominal);
}
