#ifndef SUBCOND_STATS_HPP
#define SUBCOND_STATS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace subcond {

// One statistical validation result. The margin is always applied in the
// direction that makes spurious failure unlikely, so `pass` means "the data
// does not refute the claimed bound".
struct StatCheck {
    std::string name;
    std::uint64_t trials = 0;
    double observed = 0.0;
    double claimed = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct WilsonInterval {
    double lower = 0.0;
    double upper = 1.0;
};

inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                      double confidence) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    boost::math::normal_distribution<double> normal;
    double z = boost::math::quantile(normal, 0.5 + confidence / 2.0);
    double nd = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / nd;
    double z2 = z * z;
    double denom = 1.0 + z2 / nd;
    double center = (phat + z2 / (2.0 * nd)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / nd + z2 / (4.0 * nd * nd)) / denom;
    return {center - half, center + half};
}

// Validates a claimed lower bound on a success probability: pass unless the
// Wilson interval at the given confidence lies entirely below the claim.
inline StatCheck check_success_rate(const std::function<bool()>& trial_fn,
                                    double p_claimed, std::uint64_t trials,
                                    double confidence = 0.99,
                                    std::string name = "success-rate") {
    if (trials < 100) throw std::invalid_argument("need at least 100 trials");
    std::uint64_t successes = 0;
    for (std::uint64_t i = 0; i < trials; ++i)
        if (trial_fn()) ++successes;
    WilsonInterval ci = wilson_interval(successes, trials, confidence);
    StatCheck check;
    check.name = std::move(name);
    check.trials = trials;
    check.observed = static_cast<double>(successes) / static_cast<double>(trials);
    check.claimed = p_claimed;
    check.margin = check.observed - ci.upper;  // negative: slack granted
    check.pass = ci.upper >= p_claimed;
    return check;
}

// Validates a claimed mean within a relative tolerance plus a 3-standard-error
// band.
inline StatCheck check_mean(const std::function<double()>& trial_fn,
                            double mean_claimed, double rel_tol,
                            std::uint64_t trials, std::string name = "mean") {
    if (trials < 2) throw std::invalid_argument("need at least 2 trials");
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        double x = trial_fn();
        sum += x;
        sumsq += x * x;
    }
    double nd = static_cast<double>(trials);
    double mean = sum / nd;
    double var = (sumsq - nd * mean * mean) / (nd - 1.0);
    double se = std::sqrt(var > 0.0 ? var / nd : 0.0);
    StatCheck check;
    check.name = std::move(name);
    check.trials = trials;
    check.observed = mean;
    check.claimed = mean_claimed;
    check.margin = rel_tol * std::abs(mean_claimed) + 3.0 * se;
    check.pass = std::abs(mean - mean_claimed) <= check.margin;
    return check;
}

// Chi-square goodness of fit of observed counts against expected
// probabilities; pass if the statistic stays below the critical value at the
// given significance level.
inline StatCheck chi_square_gof(const std::vector<std::uint64_t>& counts,
                                const std::vector<double>& expected_probs,
                                double significance = 0.01,
                                std::string name = "chi-square") {
    if (counts.size() != expected_probs.size() || counts.size() < 2)
        throw std::invalid_argument("counts and probabilities size mismatch");
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    double statistic = 0.0;
    int dof = -1;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double expected = expected_probs[i] * static_cast<double>(total);
        if (expected <= 0.0) {
            if (counts[i] != 0) statistic = std::numeric_limits<double>::infinity();
            continue;  // zero-probability cell carries no degree of freedom
        }
        double diff = static_cast<double>(counts[i]) - expected;
        statistic += diff * diff / expected;
        ++dof;
    }
    if (dof < 1) dof = 1;
    boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
    double critical = boost::math::quantile(dist, 1.0 - significance);
    StatCheck check;
    check.name = std::move(name);
    check.trials = total;
    check.observed = statistic;
    check.claimed = critical;
    check.margin = 0.0;
    check.pass = statistic <= critical;
    return check;
}

}  // namespace subcond

#endif
