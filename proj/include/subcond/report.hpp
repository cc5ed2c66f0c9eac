#ifndef SUBCOND_REPORT_HPP
#define SUBCOND_REPORT_HPP

#include <json.hpp>

#include "subcond/stats.hpp"
#include "subcond/tester.hpp"

namespace subcond {

inline nlohmann::json params_to_json(const TesterParams& params) {
    return {
        {"n", params.n},
        {"alphabet_size", params.alphabet.size},
        {"mode", to_string(params.mode)},
        {"eps1", params.eps1},
        {"eps2", params.eps2},
        {"gamma", params.gamma},
        {"eps_eval", params.eps_eval},
        {"theta_tame", params.theta_tame},
        {"m", params.m},
        {"t", params.t},
        {"k", params.k},
        {"budget", params.budget},
        {"profile", to_string(params.profile)},
        {"multipliers",
         {{"m", params.multipliers.m}, {"t", params.multipliers.t}, {"k", params.multipliers.k}}},
    };
}

inline nlohmann::json report_to_json(const RunReport& report) {
    return {
        {"verdict", to_string(report.verdict)},
        {"z", report.z},
        {"gamma_entries", report.gamma_entries},
        {"queries_p", report.queries_p},
        {"queries_q", report.queries_q},
        {"budget_exceeded", report.budget_exceeded},
        {"seed", report.seed},
        {"params", params_to_json(report.params)},
    };
}

inline nlohmann::json check_to_json(const StatCheck& check) {
    return {
        {"name", check.name},
        {"trials", check.trials},
        {"observed", check.observed},
        {"claimed", check.claimed},
        {"margin", check.margin},
        {"pass", check.pass},
    };
}

}  // namespace subcond

#endif
