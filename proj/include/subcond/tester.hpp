#ifndef SUBCOND_TESTER_HPP
#define SUBCOND_TESTER_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "subcond/estimator.hpp"
#include "subcond/taming.hpp"

namespace subcond {

enum class Profile { paper, engineering };
enum class Verdict { accept, reject };

// Engineering-profile scale-downs for the trial counts; each must lie in
// (0, 1]. The paper profile pins all three to 1.
struct ProfileMultipliers {
    double m = 1.0;
    double t = 1.0;
    double k = 1.0;
};

struct TesterParams {
    int n = 0;
    Alphabet alphabet{2};
    TamingMode mode = TamingMode::hypercube;
    double eps1 = 0.0;
    double eps2 = 1.0;
    double gamma = 0.5;       // (eps2 - eps1) / 2
    double eps_eval = 0.0;    // gamma / 8
    double theta_tame = 0.0;  // gamma/2n (hypercube), gamma/(2|Sigma|n) (hypergrid)
    std::uint64_t m = 0;      // outer samples
    std::uint64_t t = 0;      // median repetitions
    std::uint64_t k = 0;      // per-coordinate success count
    std::uint64_t budget = 0; // M (hypergrid: M * |Sigma|)
    Profile profile = Profile::paper;
    ProfileMultipliers multipliers{};
};

inline std::uint64_t scale_count(std::uint64_t base, double mult) {
    if (!(mult > 0.0 && mult <= 1.0))
        throw std::invalid_argument("profile multiplier must lie in (0, 1]");
    double scaled = std::ceil(static_cast<double>(base) * mult);
    return scaled < 1.0 ? 1 : static_cast<std::uint64_t>(scaled);
}

// All derived constants of the tester. Logarithms are natural; every count
// is rounded up to an integer before use.
inline TesterParams derive_params(int n, Alphabet alphabet, double eps1, double eps2,
                                  TamingMode mode = TamingMode::hypercube,
                                  Profile profile = Profile::paper,
                                  ProfileMultipliers multipliers = {}) {
    if (!(eps1 >= 0.0 && eps1 < eps2 && eps2 <= 1.0))
        throw std::invalid_argument("require 0 <= eps1 < eps2 <= 1");
    if (mode == TamingMode::hypercube && alphabet.size != 2)
        throw std::invalid_argument("hypercube mode requires a binary alphabet");
    TesterParams params;
    params.n = n;
    params.alphabet = alphabet;
    params.mode = mode;
    params.eps1 = eps1;
    params.eps2 = eps2;
    params.profile = profile;
    params.multipliers = profile == Profile::paper ? ProfileMultipliers{} : multipliers;

    double gamma = (eps2 - eps1) / 2.0;
    params.gamma = gamma;
    params.eps_eval = gamma / 8.0;
    params.theta_tame = mode == TamingMode::hypercube
                            ? gamma / (2.0 * n)
                            : gamma / (2.0 * alphabet.size * n);

    auto m_paper = static_cast<std::uint64_t>(
        std::ceil(16.0 * std::log(20.0) / (gamma * gamma)));
    auto t_paper = static_cast<std::uint64_t>(
        std::ceil(48.0 * std::log(10.0 * static_cast<double>(m_paper))));
    std::uint64_t k_paper = eval_repetitions(n, params.eps_eval);

    params.m = scale_count(m_paper, params.multipliers.m);
    params.t = scale_count(t_paper, params.multipliers.t);
    params.k = scale_count(k_paper, params.multipliers.k);

    // M from the effective m and t; long double keeps the large products exact.
    long double nl = n;
    long double ml = static_cast<long double>(params.m);
    long double tl = static_cast<long double>(params.t);
    long double gl = gamma;
    long double big = 10.0L * (1024.0L * nl * nl * nl * ml * tl / (gl * gl * gl) +
                               512.0L * nl * nl * ml * tl / (gl * gl));
    long double budget = std::ceil(big);
    if (mode == TamingMode::hypergrid) budget *= alphabet.size;
    params.budget = static_cast<std::uint64_t>(budget);
    return params;
}

struct RunReport {
    Verdict verdict = Verdict::reject;
    double z = 0.0;                     // mean of the gamma entries
    std::vector<double> gamma_entries;  // Gamma[1..m]
    std::uint64_t queries_p = 0;
    std::uint64_t queries_q = 0;
    bool budget_exceeded = false;
    TesterParams params;
    std::uint64_t seed = 0;
};

// Plug-in distance estimate: Z = mean over m draws sigma ~ Q of
// max(0, 1 - p_sigma/q_sigma). With (1 +- theta1)/(1 +- theta2)-accurate
// evaluators and m >= 4*ln(2/delta)/theta^2, theta = 2(theta1+theta2)/(1-theta2),
// Z lands within +-theta of the true TV distance with probability >= 1-delta.
template <typename Sampler, typename PEval, typename QEval>
double distance_estimate(Sampler&& q_sampler, PEval&& p_evaluator, QEval&& q_evaluator,
                         std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("sample count must be positive");
    double sum = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
        Word sigma = q_sampler();
        double p = p_evaluator(sigma);
        double q = q_evaluator(sigma);
        if (q <= 0.0) throw std::runtime_error("evaluator returned nonpositive q");
        if (q > p) sum += 1.0 - p / q;
    }
    return sum / static_cast<double>(m);
}

inline std::uint64_t distance_estimate_samples(double theta1, double theta2, double delta) {
    double theta = 2.0 * (theta1 + theta2) / (1.0 - theta2);
    return static_cast<std::uint64_t>(std::ceil(4.0 * std::log(2.0 / delta) / (theta * theta)));
}

// Tolerant closeness test. Tames P, draws m samples from Q, median-amplifies
// t point estimates of P'(sigma) and Q(sigma) per sample, and accepts iff the
// resulting distance estimate is at most (eps1+eps2)/2. All queries to both
// oracles are charged against the shared budget; hitting it rejects.
inline RunReport sub_vs_sub(const Distribution& p_model, const Distribution& q_model,
                            const TesterParams& params, std::uint64_t seed) {
    if (p_model.n() != q_model.n() || !(p_model.alphabet() == q_model.alphabet()))
        throw std::invalid_argument("distributions on different domains");
    if (p_model.n() != params.n || !(p_model.alphabet() == params.alphabet))
        throw std::invalid_argument("parameters derived for a different domain");

    RunReport report;
    report.params = params;
    report.seed = seed;
    report.gamma_entries.assign(params.m, 0.0);

    QueryMeter budget(params.budget);
    SimulatedOracle p_oracle(p_model, split_seed(seed, 1));
    SimulatedOracle q_oracle(q_model, split_seed(seed, 2));
    p_oracle.meter().set_parent(&budget);
    q_oracle.meter().set_parent(&budget);
    TamedOracle p_tamed(p_oracle, params.theta_tame, params.mode, split_seed(seed, 3));

    try {
        for (std::uint64_t i = 0; i < params.m; ++i) {
            Word sigma = q_oracle.sample_full({});
            std::vector<double> p_estimates, q_estimates;
            p_estimates.reserve(params.t);
            q_estimates.reserve(params.t);
            for (std::uint64_t j = 0; j < params.t; ++j) {
                p_estimates.push_back(sub_to_eval_with_k(p_tamed, params.k, sigma).value);
                q_estimates.push_back(sub_to_eval_with_k(q_oracle, params.k, sigma).value);
            }
            double pi = median_amplify(std::move(p_estimates));
            double qi = median_amplify(std::move(q_estimates));
            if (qi > pi) report.gamma_entries[i] = 1.0 - pi / qi;
        }
    } catch (const BudgetExhausted&) {
        report.budget_exceeded = true;
    }

    double sum = 0.0;
    for (double g : report.gamma_entries) sum += g;
    report.z = sum / static_cast<double>(params.m);
    report.queries_p = p_oracle.meter().count();
    report.queries_q = q_oracle.meter().count();
    report.verdict = (!report.budget_exceeded && report.z <= (params.eps1 + params.eps2) / 2.0)
                         ? Verdict::accept
                         : Verdict::reject;
    return report;
}

inline const char* to_string(Verdict v) {
    return v == Verdict::accept ? "Accept" : "Reject";
}
inline const char* to_string(Profile p) {
    return p == Profile::paper ? "paper" : "engineering";
}
inline const char* to_string(TamingMode m) {
    return m == TamingMode::hypercube ? "hypercube" : "hypergrid";
}

}  // namespace subcond

#endif
