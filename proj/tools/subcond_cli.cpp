// Command-line harness: model generation, point evaluation, taming checks,
// tolerant closeness testing, scaling benchmarks, and the statistical
// validation suite. All commands are deterministic functions of their
// arguments and the seed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subcond/estimator.hpp"
#include "subcond/model_io.hpp"
#include "subcond/report.hpp"
#include "subcond/stats.hpp"
#include "subcond/taming.hpp"
#include "subcond/tester.hpp"

using nlohmann::json;
using namespace subcond;

namespace {

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

TamingMode parse_mode(const std::string& mode) {
    if (mode == "hypercube") return TamingMode::hypercube;
    if (mode == "hypergrid") return TamingMode::hypergrid;
    throw std::invalid_argument("mode must be hypercube or hypergrid");
}

int run_gen_model(const std::string& kind, int n, int alphabet_size,
                  std::uint64_t seed, const std::string& out_path) {
    auto model = random_model(kind, n, Alphabet(alphabet_size), seed);
    write_output(model_to_json(*model).dump(2) + "\n", out_path);
    return 0;
}

int run_eval_point(const std::string& model_path, const std::string& sigma_str,
                   double eps, std::uint64_t trials, std::uint64_t seed,
                   const std::string& out_path) {
    auto model = load_model(model_path);
    Word sigma = word_from_string(sigma_str, model->alphabet());
    validate_word(sigma, model->n(), model->alphabet());
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("eps must lie in (0, 1/2)");

    double truth = model->point_probability(sigma);
    json doc;
    doc["model"] = model_path;
    doc["sigma"] = word_to_string(sigma);
    doc["eps"] = eps;
    doc["true_probability"] = truth;
    doc["seed"] = seed;

    std::vector<double> estimates;
    double query_sum = 0.0;
    std::uint64_t successes = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        SimulatedOracle oracle(*model, split_seed(seed, i));
        PointEstimate est = sub_to_eval(oracle, eps, sigma);
        estimates.push_back(est.value);
        query_sum += static_cast<double>(est.queries);
        if (truth > 0.0 && est.value >= (1.0 - eps) * truth &&
            est.value <= (1.0 + eps) * truth)
            ++successes;
    }
    doc["estimates"] = estimates;
    doc["mean_queries"] = query_sum / static_cast<double>(trials);
    double expq = expected_queries(*model, sigma, eps);
    if (std::isfinite(expq))
        doc["expected_queries"] = expq;
    else
        doc["expected_queries"] = nullptr;
    if (truth > 0.0)
        doc["success_rate"] = static_cast<double>(successes) / static_cast<double>(trials);
    else
        doc["success_rate"] = nullptr;  // (1 +- eps) event undefined at zero mass
    write_output(doc.dump(2) + "\n", out_path);
    return 0;
}

int run_tame_check(const std::string& model_path, double theta, const std::string& mode_str,
                   const std::string& out_path) {
    auto model = load_model(model_path);
    TamingMode mode = parse_mode(mode_str);
    ExplicitDistribution tamed = tame_exact(*model, theta, mode);
    double tv = exact_tv(*model, tamed);
    double bound = theta * model->n();

    double marginal_min = 1.0, marginal_max = 0.0;
    std::uint64_t total = domain_size(model->n(), model->alphabet());
    Word w(static_cast<std::size_t>(model->n()), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        for (int j = 0; j < model->n(); ++j) {
            Prefix prefix(w.data(), static_cast<std::size_t>(j));
            double p = tamed.marginal(prefix, w[static_cast<std::size_t>(j)]);
            marginal_min = std::min(marginal_min, p);
            marginal_max = std::max(marginal_max, p);
        }
        for (int j = model->n() - 1; j >= 0; --j) {
            if (++w[static_cast<std::size_t>(j)] < model->alphabet().size) break;
            w[static_cast<std::size_t>(j)] = 0;
        }
    }
    double floor = mode == TamingMode::hypercube ? theta : theta / model->alphabet().size;
    double ceiling = mode == TamingMode::hypercube
                         ? 1.0 - theta
                         : 1.0 - theta + theta / model->alphabet().size;
    bool pass = tv <= bound + 1e-9 && marginal_min >= floor - 1e-12 &&
                marginal_max <= ceiling + 1e-12;

    json doc;
    doc["model"] = model_path;
    doc["theta"] = theta;
    doc["mode"] = mode_str;
    doc["tv"] = tv;
    doc["bound"] = bound;
    doc["marginal_min"] = marginal_min;
    doc["marginal_max"] = marginal_max;
    doc["pass"] = pass;
    write_output(doc.dump(2) + "\n", out_path);
    return 0;
}

struct TestConfig {
    std::string p_model;
    std::string q_model;
    double eps1 = 0.0;
    double eps2 = 1.0;
    std::string profile = "engineering";
    std::string mode = "hypercube";
    ProfileMultipliers multipliers{0.02, 0.02, 0.01};
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    std::string out;
};

int run_test(const TestConfig& config) {
    auto p_model = load_model(config.p_model);
    auto q_model = load_model(config.q_model);
    Profile profile = config.profile == "paper" ? Profile::paper : Profile::engineering;
    if (config.profile != "paper" && config.profile != "engineering")
        throw std::invalid_argument("profile must be paper or engineering");
    if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
    TesterParams params =
        derive_params(p_model->n(), p_model->alphabet(), config.eps1, config.eps2,
                      parse_mode(config.mode), profile, config.multipliers);

    json runs = json::array();
    std::uint64_t accepts = 0;
    double query_sum = 0.0;
    for (std::uint64_t i = 0; i < config.trials; ++i) {
        RunReport report = sub_vs_sub(*p_model, *q_model, params, split_seed(config.seed, i));
        if (report.verdict == Verdict::accept) ++accepts;
        query_sum += static_cast<double>(report.queries_p + report.queries_q);
        runs.push_back(report_to_json(report));
    }
    json doc;
    doc["runs"] = runs;
    doc["aggregate"] = {
        {"accept_rate", static_cast<double>(accepts) / static_cast<double>(config.trials)},
        {"mean_queries", query_sum / static_cast<double>(config.trials)},
        {"params", params_to_json(params)},
    };
    doc["seed"] = config.seed;
    doc["trials"] = config.trials;
    write_output(doc.dump(2) + "\n", config.out);
    if (config.trials == 1 && accepts == 0) return 1;  // single-run Reject
    return 0;
}

int run_bench(const std::vector<int>& n_list, double gamma, const std::string& profile_str,
              const ProfileMultipliers& multipliers, std::uint64_t trials,
              std::uint64_t seed, const std::string& out_path) {
    Profile profile = profile_str == "paper" ? Profile::paper : Profile::engineering;
    std::ostringstream csv;
    csv << "n,gamma,mean_queries,M\n";
    for (int n : n_list) {
        double eps1 = 0.5 - gamma;
        double eps2 = 0.5 + gamma;
        TesterParams params = derive_params(n, Alphabet(2), eps1, eps2,
                                            TamingMode::hypercube, profile, multipliers);
        ExplicitDistribution uniform = ExplicitDistribution::uniform(n, Alphabet(2));
        double query_sum = 0.0;
        for (std::uint64_t i = 0; i < trials; ++i) {
            RunReport report = sub_vs_sub(uniform, uniform, params,
                                          split_seed(seed, static_cast<std::uint64_t>(n) * 1000 + i));
            query_sum += static_cast<double>(report.queries_p + report.queries_q);
        }
        csv << n << ',' << gamma << ',' << query_sum / static_cast<double>(trials) << ','
            << params.budget << '\n';
    }
    write_output(csv.str(), out_path);
    return 0;
}

bool subtoeval_success_trial(const Distribution& model, const Word& sigma, double eps,
                             std::uint64_t seed) {
    SimulatedOracle oracle(model, seed);
    PointEstimate est = sub_to_eval(oracle, eps, sigma);
    double truth = model.point_probability(sigma);
    return est.value >= (1.0 - eps) * truth && est.value <= (1.0 + eps) * truth;
}

// The named statistical validation suite: each entry turns one probabilistic
// guarantee into a pass/fail check with an explicit margin.
int run_verify(std::uint64_t seed, const std::string& out_path) {
    std::vector<StatCheck> checks;
    Alphabet binary(2);

    {  // NB moments at (k, p) = (64, 1/2): mean k/p
        ExplicitDistribution uniform1 = ExplicitDistribution::uniform(1, binary);
        std::uint64_t i = 0;
        checks.push_back(check_mean(
            [&] {
                SimulatedOracle oracle(uniform1, split_seed(seed, 1000 + i++));
                return static_cast<double>(negative_binomial_count(oracle, {}, 0, 64));
            },
            128.0, 0.02, 2000, "nb-mean-k64-p05"));
    }
    {  // SubToEval (1 +- eps) success rate >= 2/3 on the uniform cube
        ExplicitDistribution uniform3 = ExplicitDistribution::uniform(3, binary);
        Word sigma{0, 1, 1};
        std::uint64_t i = 0;
        checks.push_back(check_success_rate(
            [&] { return subtoeval_success_trial(uniform3, sigma, 0.45, split_seed(seed, 2000 + i++)); },
            2.0 / 3.0, 300, 0.99, "subtoeval-success-uniform3"));
    }
    {  // Expected query count on uniform {0,1}^4 at eps = 1/2: 8n^2/eps^2 = 512
        ExplicitDistribution uniform4 = ExplicitDistribution::uniform(4, binary);
        std::uint64_t i = 0;
        checks.push_back(check_mean(
            [&] {
                SimulatedOracle oracle(uniform4, split_seed(seed, 3000 + i));
                Rng draw_rng(split_seed(seed, 4000 + i));
                ++i;
                Word sigma = uniform4.sample(draw_rng);
                return static_cast<double>(sub_to_eval(oracle, 0.5, sigma).queries);
            },
            512.0, 0.05, 1000, "subtoeval-expected-queries-uniform4"));
    }
    {  // Taming TV bound on a seeded random model (deterministic exact check)
        auto model = random_model("explicit", 4, binary, split_seed(seed, 5000));
        double tv = exact_tv(*model, tame_exact(*model, 0.05, TamingMode::hypercube));
        StatCheck check;
        check.name = "taming-tv-bound-n4";
        check.trials = 1;
        check.observed = tv;
        check.claimed = 0.05 * 4;
        check.margin = 1e-9;
        check.pass = tv <= check.claimed + check.margin;
        checks.push_back(check);
    }
    {  // Distance estimate with exact evaluators against enumerated TV
        ExplicitDistribution p = ExplicitDistribution::uniform(2, binary);
        ExplicitDistribution q = ExplicitDistribution::point_mass({0, 0}, binary);
        std::uint64_t i = 0;
        checks.push_back(check_mean(
            [&] {
                Rng rng(split_seed(seed, 6000 + i++));
                return distance_estimate(
                    [&] { return q.sample(rng); },
                    [&](const Word& w) { return p.point_probability(w); },
                    [&](const Word& w) { return q.point_probability(w); }, 2000);
            },
            0.75, 0.02, 100, "distance-estimate-exact"));
    }

    json doc;
    doc["seed"] = seed;
    json entries = json::array();
    bool all_pass = true;
    for (const StatCheck& check : checks) {
        entries.push_back(check_to_json(check));
        all_pass = all_pass && check.pass;
    }
    doc["checks"] = entries;
    doc["all_pass"] = all_pass;
    write_output(doc.dump(2) + "\n", out_path);
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tolerant closeness testing of high-dimensional samplers under "
                 "prefix subcube conditioning"};
    app.require_subcommand(1);

    // gen-model
    auto* gen = app.add_subcommand("gen-model", "Emit a random model from a seed");
    std::string gen_kind = "explicit";
    int gen_n = 3, gen_alphabet = 2;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--kind", gen_kind, "explicit|product|chain");
    gen->add_option("--n", gen_n, "dimension")->check(CLI::PositiveNumber);
    gen->add_option("--alphabet", gen_alphabet, "alphabet size")->check(CLI::Range(2, 1 << 20));
    gen->add_option("--seed", gen_seed, "seed");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // eval-point
    auto* ev = app.add_subcommand("eval-point", "Estimate a point probability repeatedly");
    std::string ev_model, ev_sigma, ev_out;
    double ev_eps = 0.25;
    std::uint64_t ev_trials = 100, ev_seed = 0;
    ev->add_option("--model", ev_model, "model JSON path")->required();
    ev->add_option("--sigma", ev_sigma, "target word, e.g. 011")->required();
    ev->add_option("--eps", ev_eps, "accuracy in (0, 1/2)");
    ev->add_option("--trials", ev_trials)->check(CLI::PositiveNumber);
    ev->add_option("--seed", ev_seed);
    ev->add_option("--out", ev_out);

    // tame-check
    auto* tc = app.add_subcommand("tame-check", "Exact TV and marginal floor of a taming");
    std::string tc_model, tc_mode = "hypercube", tc_out;
    double tc_theta = 0.05;
    tc->add_option("--model", tc_model)->required();
    tc->add_option("--theta", tc_theta)->check(CLI::Range(0.0, 0.5));
    tc->add_option("--mode", tc_mode, "hypercube|hypergrid");
    tc->add_option("--out", tc_out);

    // test
    auto* ts = app.add_subcommand("test", "Run the tolerant closeness test");
    std::string ts_config;
    TestConfig config;
    ts->add_option("--config", ts_config, "scenario JSON; flags override its fields");
    ts->add_option("--p-model", config.p_model);
    ts->add_option("--q-model", config.q_model);
    auto* e1 = ts->add_option("--eps1", config.eps1);
    auto* e2 = ts->add_option("--eps2", config.eps2);
    ts->add_option("--profile", config.profile, "paper|engineering");
    ts->add_option("--mode", config.mode, "hypercube|hypergrid");
    ts->add_option("--m-mult", config.multipliers.m);
    ts->add_option("--t-mult", config.multipliers.t);
    ts->add_option("--k-mult", config.multipliers.k);
    ts->add_option("--trials", config.trials);
    ts->add_option("--seed", config.seed);
    ts->add_option("--out", config.out);

    // bench
    auto* be = app.add_subcommand("bench", "Query-count scaling grid, CSV output");
    std::vector<int> be_n{2, 3, 4};
    double be_gamma = 0.3;
    std::string be_profile = "engineering", be_out;
    ProfileMultipliers be_mult{0.02, 0.02, 0.01};
    std::uint64_t be_trials = 5, be_seed = 0;
    be->add_option("--n", be_n, "dimensions, e.g. --n 2 3 4");
    be->add_option("--gamma", be_gamma)->check(CLI::Range(0.0, 0.5));
    be->add_option("--profile", be_profile);
    be->add_option("--m-mult", be_mult.m);
    be->add_option("--t-mult", be_mult.t);
    be->add_option("--k-mult", be_mult.k);
    be->add_option("--trials", be_trials)->check(CLI::PositiveNumber);
    be->add_option("--seed", be_seed);
    be->add_option("--out", be_out);

    // verify
    auto* vf = app.add_subcommand("verify", "Statistical validation scorecard");
    std::uint64_t vf_seed = 0;
    std::string vf_out;
    vf->add_option("--seed", vf_seed);
    vf->add_option("--out", vf_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) return run_gen_model(gen_kind, gen_n, gen_alphabet, gen_seed, gen_out);
        if (*ev) return run_eval_point(ev_model, ev_sigma, ev_eps, ev_trials, ev_seed, ev_out);
        if (*tc) return run_tame_check(tc_model, tc_theta, tc_mode, tc_out);
        if (*ts) {
            if (!ts_config.empty()) {
                std::ifstream in(ts_config);
                if (!in) throw std::runtime_error("cannot open config: " + ts_config);
                json doc;
                in >> doc;
                if (doc.contains("p_model") && config.p_model.empty())
                    config.p_model = doc["p_model"].get<std::string>();
                if (doc.contains("q_model") && config.q_model.empty())
                    config.q_model = doc["q_model"].get<std::string>();
                if (doc.contains("eps1") && e1->count() == 0) config.eps1 = doc["eps1"];
                if (doc.contains("eps2") && e2->count() == 0) config.eps2 = doc["eps2"];
                if (doc.contains("profile") && ts->count("--profile") == 0)
                    config.profile = doc["profile"].get<std::string>();
                if (doc.contains("mode") && ts->count("--mode") == 0)
                    config.mode = doc["mode"].get<std::string>();
                if (doc.contains("trials") && ts->count("--trials") == 0)
                    config.trials = doc["trials"];
                if (doc.contains("seed") && ts->count("--seed") == 0) config.seed = doc["seed"];
                if (doc.contains("out") && config.out.empty())
                    config.out = doc["out"].get<std::string>();
                if (doc.contains("multipliers")) {
                    const auto& mu = doc["multipliers"];
                    if (ts->count("--m-mult") == 0 && mu.contains("m"))
                        config.multipliers.m = mu["m"];
                    if (ts->count("--t-mult") == 0 && mu.contains("t"))
                        config.multipliers.t = mu["t"];
                    if (ts->count("--k-mult") == 0 && mu.contains("k"))
                        config.multipliers.k = mu["k"];
                }
            }
            if (config.p_model.empty() || config.q_model.empty())
                throw std::invalid_argument("both --p-model and --q-model are required");
            return run_test(config);
        }
        if (*be) return run_bench(be_n, be_gamma, be_profile, be_mult, be_trials, be_seed, be_out);
        if (*vf) return run_verify(vf_seed, vf_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
