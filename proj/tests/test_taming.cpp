#include <catch2/catch_amalgamated.hpp>

#include "subcond/model_io.hpp"
#include "subcond/stats.hpp"
#include "subcond/taming.hpp"

using namespace subcond;
using Catch::Approx;

namespace {
const Alphabet kBinary{2};

double min_conditional_marginal(const ExplicitDistribution& d) {
    double lo = 1.0;
    std::uint64_t total = domain_size(d.n(), d.alphabet());
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Word w = d.word_at(idx);
        for (int j = 0; j < d.n(); ++j)
            lo = std::min(lo, d.marginal(Prefix(w.data(), static_cast<std::size_t>(j)),
                                         w[static_cast<std::size_t>(j)]));
    }
    return lo;
}
}  // namespace

TEST_CASE("tamed marginal formulas") {
    CHECK(tamed_marginal(1.0, 0.25, TamingMode::hypercube, 2) == Approx(0.75));
    CHECK(tamed_marginal(0.0, 0.25, TamingMode::hypercube, 2) == Approx(0.25));
    CHECK(tamed_marginal(0.5, 0.3, TamingMode::hypercube, 2) == Approx(0.5));  // fixed point
    CHECK(tamed_marginal(1.0, 0.3, TamingMode::hypergrid, 3) == Approx(0.8));
    CHECK(tamed_marginal(0.0, 0.3, TamingMode::hypergrid, 3) == Approx(0.1));
}

TEST_CASE("tamed oracle frequencies") {
    auto point = ExplicitDistribution::point_mass({0}, kBinary);
    SimulatedOracle inner(point, 1);
    TamedOracle tamed(inner, 0.25, TamingMode::hypercube, 2);
    int zeros = 0;
    for (int i = 0; i < 10000; ++i)
        zeros += tamed.sample_next({}) == 0 ? 1 : 0;
    CHECK(std::abs(zeros / 10000.0 - 0.75) < 0.02);
}

TEST_CASE("uniform branch is not charged to the inner meter") {
    auto point = ExplicitDistribution::point_mass({0}, kBinary);
    SimulatedOracle inner(point, 3);
    TamedOracle tamed(inner, 0.25, TamingMode::hypercube, 4);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) tamed.sample_next({});
    // delegation probability 1-2*theta = 0.5
    double delegated = static_cast<double>(tamed.meter().count());
    CHECK(std::abs(delegated / draws - 0.5) < 0.02);
    CHECK(tamed.meter().count() == inner.meter().count());
}

TEST_CASE("tame_exact base cases") {
    auto point = ExplicitDistribution::point_mass({0}, kBinary);
    auto tamed = tame_exact(point, 0.25, TamingMode::hypercube);
    CHECK(tamed.point_probability({0}) == Approx(0.75));
    CHECK(tamed.point_probability({1}) == Approx(0.25));
    CHECK(exact_tv(point, tamed) == Approx(0.25));  // theta * n at n = 1

    auto uniform = ExplicitDistribution::uniform(3, kBinary);
    CHECK(exact_tv(uniform, tame_exact(uniform, 0.1, TamingMode::hypercube)) ==
          Approx(0.0).margin(1e-12));
}

TEST_CASE("TV bound across seeded models and both modes") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        for (double theta : {0.01, 0.05, 0.1}) {
            auto cube = random_model("explicit", 4, kBinary, seed);
            auto cube_tamed = tame_exact(*cube, theta, TamingMode::hypercube);
            CHECK(exact_tv(*cube, cube_tamed) <= theta * 4 + 1e-9);
            CHECK(min_conditional_marginal(cube_tamed) >= theta - 1e-12);

            auto grid = random_model("explicit", 3, Alphabet{3}, seed);
            auto grid_tamed = tame_exact(*grid, theta, TamingMode::hypergrid);
            CHECK(exact_tv(*grid, grid_tamed) <= theta * 3 + 1e-9);
            CHECK(min_conditional_marginal(grid_tamed) >= theta / 3 - 1e-12);
        }
    }
}

TEST_CASE("taming a tamed model keeps the floor") {
    auto model = random_model("explicit", 3, kBinary, 17);
    auto once = tame_exact(*model, 0.1, TamingMode::hypercube);
    auto twice = tame_exact(once, 0.1, TamingMode::hypercube);
    CHECK(min_conditional_marginal(twice) >= 0.1 - 1e-12);
}

TEST_CASE("wrapper agrees with the exact transform (chi-square)") {
    auto model = random_model("explicit", 3, kBinary, 23);
    auto tamed_model = tame_exact(*model, 0.15, TamingMode::hypercube);
    SimulatedOracle inner(*model, 29);
    TamedOracle wrapper(inner, 0.15, TamingMode::hypercube, 31);
    std::vector<std::uint64_t> counts(8, 0);
    for (int i = 0; i < 20000; ++i)
        ++counts[tamed_model.index_of(wrapper.sample_full({}))];
    StatCheck check = chi_square_gof(counts, tamed_model.mass(), 0.01);
    INFO("stat=" << check.observed << " crit=" << check.claimed);
    CHECK(check.pass);
}

TEST_CASE("parameter validation") {
    auto model = random_model("explicit", 2, Alphabet{3}, 5);
    CHECK_THROWS(tame_exact(*model, 0.1, TamingMode::hypercube));  // non-binary
    auto cube = ExplicitDistribution::uniform(2, kBinary);
    CHECK_THROWS(tame_exact(cube, 0.0, TamingMode::hypercube));
    CHECK_THROWS(tame_exact(cube, 0.5, TamingMode::hypercube));
}
