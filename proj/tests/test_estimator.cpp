#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "subcond/estimator.hpp"
#include "subcond/models.hpp"

using namespace subcond;
using Catch::Approx;

namespace {
const Alphabet kBinary{2};
}

TEST_CASE("negative binomial count: deterministic marginal") {
    auto point = ExplicitDistribution::point_mass({0, 0}, kBinary);
    SimulatedOracle oracle(point, 1);
    CHECK(negative_binomial_count(oracle, {}, 0, 10) == 10);
    CHECK(oracle.meter().count() == 10);
}

TEST_CASE("negative binomial count: mean k/p at p=1/2") {
    auto uniform = ExplicitDistribution::uniform(1, kBinary);
    double sum = 0.0;
    for (int i = 0; i < 1000; ++i) {
        SimulatedOracle oracle(uniform, 100 + static_cast<std::uint64_t>(i));
        sum += static_cast<double>(negative_binomial_count(oracle, {}, 1, 64));
    }
    CHECK(sum / 1000.0 == Approx(128.0).margin(5.0));
}

TEST_CASE("negative binomial count: variance k(1-p)/p^2") {
    auto uniform = ExplicitDistribution::uniform(1, kBinary);
    double sum = 0.0, sumsq = 0.0;
    const int runs = 10000;
    for (int i = 0; i < runs; ++i) {
        SimulatedOracle oracle(uniform, 5000 + static_cast<std::uint64_t>(i));
        double x = static_cast<double>(negative_binomial_count(oracle, {}, 1, 64));
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / runs;
    double var = (sumsq - runs * mean * mean) / (runs - 1);
    CHECK(var == Approx(128.0).epsilon(0.10));
}

TEST_CASE("trial cap signals suspected nontermination") {
    auto point = ExplicitDistribution::point_mass({1}, kBinary);
    SimulatedOracle oracle(point, 2);
    // target symbol 0 has zero marginal
    CHECK_THROWS_AS(negative_binomial_count(oracle, {}, 0, 4, 1000), TrialCapExceeded);
}

TEST_CASE("sub_to_eval on a point mass is exact") {
    auto point = ExplicitDistribution::point_mass({1, 0}, kBinary);
    SimulatedOracle oracle(point, 3);
    PointEstimate est = sub_to_eval(oracle, 0.4, {1, 0});
    std::uint64_t k = eval_repetitions(2, 0.4);  // ceil(8/0.16) = 50
    CHECK(k == 50);
    CHECK(est.value == 1.0);
    CHECK(est.queries == 2 * k);
    CHECK(est.per_coordinate_trials == std::vector<std::uint64_t>{k, k});
}

TEST_CASE("point estimate invariants") {
    ExplicitDistribution d(2, kBinary, {0.1, 0.2, 0.3, 0.4});
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SimulatedOracle oracle(d, seed);
        std::uint64_t before = oracle.meter().count();
        PointEstimate est = sub_to_eval(oracle, 0.4, {1, 1});
        // queries equals both the trial sum and the meter delta
        std::uint64_t trial_sum = 0;
        double product = 1.0;
        for (std::uint64_t x : est.per_coordinate_trials) {
            CHECK(x >= est.k);
            trial_sum += x;
            product *= static_cast<double>(est.k) / static_cast<double>(x);
        }
        CHECK(est.queries == trial_sum);
        CHECK(est.queries == oracle.meter().count() - before);
        CHECK(est.value == Approx(product).epsilon(1e-12));
    }
}

TEST_CASE("sub_to_eval success rate >= 2/3 minus margin") {
    struct Fixture {
        ExplicitDistribution model;
        Word sigma;
        double eps;
    };
    std::vector<Fixture> fixtures;
    fixtures.push_back({ExplicitDistribution::uniform(2, kBinary), {0, 1}, 0.45});
    fixtures.push_back({ExplicitDistribution(2, kBinary, {0.1, 0.2, 0.3, 0.4}), {1, 1}, 0.4});
    std::uint64_t seed = 9000;
    for (const auto& fx : fixtures) {
        double truth = fx.model.point_probability(fx.sigma);
        int successes = 0;
        for (int i = 0; i < 500; ++i) {
            SimulatedOracle oracle(fx.model, seed++);
            double v = sub_to_eval(oracle, fx.eps, fx.sigma).value;
            if (v >= (1 - fx.eps) * truth && v <= (1 + fx.eps) * truth) ++successes;
        }
        CHECK(successes / 500.0 >= 0.60);
    }
}

TEST_CASE("expected_queries formulas") {
    auto uniform4 = ExplicitDistribution::uniform(4, kBinary);
    CHECK(expected_queries(uniform4, {0, 1, 1, 0}, 0.5) == Approx(512.0));  // 8n^2/eps^2

    auto point = ExplicitDistribution::point_mass({1, 0, 1}, kBinary);
    std::uint64_t k3 = eval_repetitions(3, 0.5);
    CHECK(expected_queries(point, {1, 0, 1}, 0.5) == Approx(3.0 * static_cast<double>(k3)));

    ProductDistribution skewed(kBinary, {{0.8, 0.2}, {0.8, 0.2}, {0.8, 0.2}});
    CHECK(expected_queries(skewed, {1, 1, 1}, 0.5) == Approx(48.0 * (3.0 / 0.2)));

    // zero marginal along sigma
    CHECK(expected_queries(point, {0, 0, 1}, 0.5) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("empirical mean queries matches the formula within 5%") {
    ProductDistribution skewed(kBinary, {{0.8, 0.2}, {0.8, 0.2}, {0.8, 0.2}});
    Word sigma{1, 1, 1};
    double expected = expected_queries(skewed, sigma, 0.5);
    CHECK(expected == Approx(720.0));
    double sum = 0.0;
    for (int i = 0; i < 1000; ++i) {
        SimulatedOracle oracle(skewed, 40000 + static_cast<std::uint64_t>(i));
        sum += static_cast<double>(sub_to_eval(oracle, 0.5, sigma).queries);
    }
    CHECK(sum / 1000.0 == Approx(expected).epsilon(0.05));
}

TEST_CASE("per-coordinate trial counts are unbiased") {
    ProductDistribution skewed(kBinary, {{0.7, 0.3}, {0.4, 0.6}});
    Word sigma{1, 1};
    const int runs = 2000;
    std::vector<double> sums(2, 0.0), sumsqs(2, 0.0);
    std::uint64_t k = eval_repetitions(2, 0.4);
    for (int i = 0; i < runs; ++i) {
        SimulatedOracle oracle(skewed, 70000 + static_cast<std::uint64_t>(i));
        PointEstimate est = sub_to_eval(oracle, 0.4, sigma);
        for (int j = 0; j < 2; ++j) {
            double x = static_cast<double>(est.per_coordinate_trials[static_cast<std::size_t>(j)]);
            sums[static_cast<std::size_t>(j)] += x;
            sumsqs[static_cast<std::size_t>(j)] += x * x;
        }
    }
    std::vector<double> ps{0.3, 0.6};
    for (int j = 0; j < 2; ++j) {
        double mean = sums[static_cast<std::size_t>(j)] / runs;
        double var = (sumsqs[static_cast<std::size_t>(j)] - runs * mean * mean) / (runs - 1);
        double se = std::sqrt(var / runs);
        CHECK(std::abs(mean - static_cast<double>(k) / ps[static_cast<std::size_t>(j)]) <=
              3.0 * se);
    }
}

TEST_CASE("median_amplify") {
    CHECK(median_amplify({3.0}) == 3.0);
    CHECK(median_amplify({1.0, 2.0, 100.0}) == 2.0);
    CHECK(median_amplify({1.0, 2.0, 3.0, 4.0}) == 2.0);  // lower-middle convention
    CHECK(median_amplify({4.0, 3.0, 2.0, 1.0}) == 2.0);
    CHECK_THROWS(median_amplify({}));
}

TEST_CASE("invalid accuracy parameters") {
    auto uniform = ExplicitDistribution::uniform(2, kBinary);
    SimulatedOracle oracle(uniform, 1);
    CHECK_THROWS(sub_to_eval(oracle, 0.0, {0, 0}));
    CHECK_THROWS(sub_to_eval(oracle, 1.0, {0, 0}));
    CHECK_THROWS(sub_to_eval_with_k(oracle, 5, {0, 0, 1}));  // wrong length
}
