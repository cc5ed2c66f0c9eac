#ifndef SUBCOND_ESTIMATOR_HPP
#define SUBCOND_ESTIMATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "subcond/oracle.hpp"

namespace subcond {

struct TrialCapExceeded : std::runtime_error {
    TrialCapExceeded() : std::runtime_error("per-call trial cap exceeded; target marginal may be zero") {}
};

// Output of a point-probability estimation run.
struct PointEstimate {
    double value = 0.0;                          // estimated D(sigma)
    std::vector<std::uint64_t> per_coordinate_trials;  // x_1..x_n
    std::uint64_t k = 0;
    std::uint64_t queries = 0;                   // sum of x_j
};

inline std::uint64_t eval_repetitions(int n, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("accuracy parameter must lie in (0, 1)");
    return static_cast<std::uint64_t>(std::ceil(4.0 * n / (eps * eps)));
}

// Number of draws from the conditional marginal until the k-th draw equal to
// target; distributed NB(k, p) with p the true marginal. A zero-probability
// target never terminates on its own: the oracle budget (or the optional
// trial cap) is the guard.
inline std::uint64_t negative_binomial_count(
    SubcondOracle& oracle, Prefix prefix, Symbol target, std::uint64_t k,
    std::optional<std::uint64_t> trial_cap = std::nullopt) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    while (successes < k) {
        if (trial_cap && trials >= *trial_cap) throw TrialCapExceeded{};
        ++trials;
        if (oracle.sample_next(prefix) == target) ++successes;
    }
    return trials;
}

// Point evaluation with an explicit repetition count k. The product of
// k/x_j estimates D(sigma) through the chain-rule factorization.
inline PointEstimate sub_to_eval_with_k(
    SubcondOracle& oracle, std::uint64_t k, const Word& sigma,
    std::optional<std::uint64_t> trial_cap = std::nullopt) {
    validate_word(sigma, oracle.n(), oracle.alphabet());
    PointEstimate est;
    est.k = k;
    est.value = 1.0;
    est.per_coordinate_trials.reserve(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        Prefix prefix(sigma.data(), j);
        std::uint64_t xj = negative_binomial_count(oracle, prefix, sigma[j], k, trial_cap);
        est.per_coordinate_trials.push_back(xj);
        est.queries += xj;
        est.value *= static_cast<double>(k) / static_cast<double>(xj);
    }
    return est;
}

// Point evaluation at accuracy eps: k = ceil(4n/eps^2). For eps in (0, 1/2)
// the estimate lands in (1 +- eps) * D(sigma) with probability >= 2/3.
inline PointEstimate sub_to_eval(
    SubcondOracle& oracle, double eps, const Word& sigma,
    std::optional<std::uint64_t> trial_cap = std::nullopt) {
    return sub_to_eval_with_k(oracle, eval_repetitions(oracle.n(), eps), sigma, trial_cap);
}

// Analytic expected query count: k * sum_j 1/marginal_j, with the same
// ceiling-of-k convention as the implementation.
inline double expected_queries(const Distribution& model, const Word& sigma, double eps) {
    validate_word(sigma, model.n(), model.alphabet());
    double k = static_cast<double>(eval_repetitions(model.n(), eps));
    double sum = 0.0;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
        Prefix prefix(sigma.data(), j);
        double p = model.marginal(prefix, sigma[j]);
        if (p <= 0.0) return std::numeric_limits<double>::infinity();
        sum += 1.0 / p;
    }
    return k * sum;
}

// Median of the estimates; even length takes the lower-middle element so the
// output is always one of the observed values.
inline double median_amplify(std::vector<double> estimates) {
    if (estimates.empty()) throw std::invalid_argument("empty estimate list");
    std::size_t mid = (estimates.size() - 1) / 2;
    std::nth_element(estimates.begin(), estimates.begin() + static_cast<std::ptrdiff_t>(mid),
                     estimates.end());
    return estimates[mid];
}

}  // namespace subcond

#endif
