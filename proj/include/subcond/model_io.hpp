#ifndef SUBCOND_MODEL_IO_HPP
#define SUBCOND_MODEL_IO_HPP

#include <fstream>
#include <memory>
#include <random>
#include <string>

#include <json.hpp>

#include "subcond/models.hpp"

namespace subcond {

// Model documents: {"kind", "n", "alphabet_size", "payload"} where payload is
//   explicit: the dense mass array,
//   product:  a list of per-coordinate marginal vectors,
//   chain:    {"initial": [...], "transitions": [[[...]]]}.

inline nlohmann::json model_to_json(const Distribution& model) {
    nlohmann::json doc;
    doc["n"] = model.n();
    doc["alphabet_size"] = model.alphabet().size;
    if (auto* e = dynamic_cast<const ExplicitDistribution*>(&model)) {
        doc["kind"] = "explicit";
        doc["payload"] = e->mass();
    } else if (auto* p = dynamic_cast<const ProductDistribution*>(&model)) {
        doc["kind"] = "product";
        doc["payload"] = p->marginals();
    } else if (auto* c = dynamic_cast<const ChainDistribution*>(&model)) {
        doc["kind"] = "chain";
        doc["payload"] = {{"initial", c->initial()}, {"transitions", c->transitions()}};
    } else {
        doc["kind"] = "explicit";
        doc["payload"] = model.to_explicit().mass();
    }
    return doc;
}

inline std::unique_ptr<Distribution> model_from_json(const nlohmann::json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    const int n = doc.at("n").get<int>();
    const Alphabet alphabet(doc.at("alphabet_size").get<int>());
    const auto& payload = doc.at("payload");
    if (kind == "explicit") {
        return std::make_unique<ExplicitDistribution>(
            n, alphabet, payload.get<std::vector<double>>());
    }
    if (kind == "product") {
        auto marginals = payload.get<std::vector<std::vector<double>>>();
        if (static_cast<int>(marginals.size()) != n)
            throw std::invalid_argument("product payload length does not match n");
        return std::make_unique<ProductDistribution>(alphabet, std::move(marginals));
    }
    if (kind == "chain") {
        auto initial = payload.at("initial").get<std::vector<double>>();
        auto transitions =
            payload.at("transitions").get<std::vector<std::vector<std::vector<double>>>>();
        if (static_cast<int>(transitions.size()) != n - 1)
            throw std::invalid_argument("chain payload length does not match n");
        return std::make_unique<ChainDistribution>(alphabet, std::move(initial),
                                                   std::move(transitions));
    }
    throw std::invalid_argument("unknown model kind: " + kind);
}

inline std::unique_ptr<Distribution> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    nlohmann::json doc;
    in >> doc;
    return model_from_json(doc);
}

inline void save_model(const Distribution& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << model_to_json(model).dump(2) << '\n';
}

// Symmetric Dirichlet(1) row: normalized Exp(1) draws. Nondegenerate and
// reproducible from the generator state.
inline std::vector<double> random_simplex(std::size_t size, Rng& rng) {
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> row(size);
    double sum = 0.0;
    for (double& x : row) {
        x = exp1(rng);
        sum += x;
    }
    for (double& x : row) x /= sum;
    return row;
}

inline std::unique_ptr<Distribution> random_model(const std::string& kind, int n,
                                                  Alphabet alphabet, std::uint64_t seed) {
    Rng rng(seed);
    if (kind == "explicit") {
        return std::make_unique<ExplicitDistribution>(
            n, alphabet, random_simplex(domain_size(n, alphabet), rng));
    }
    if (kind == "product") {
        std::vector<std::vector<double>> marginals;
        marginals.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            marginals.push_back(random_simplex(static_cast<std::size_t>(alphabet.size), rng));
        return std::make_unique<ProductDistribution>(alphabet, std::move(marginals));
    }
    if (kind == "chain") {
        auto initial = random_simplex(static_cast<std::size_t>(alphabet.size), rng);
        std::vector<std::vector<std::vector<double>>> transitions(
            static_cast<std::size_t>(n - 1));
        for (auto& matrix : transitions) {
            matrix.resize(static_cast<std::size_t>(alphabet.size));
            for (auto& row : matrix)
                row = random_simplex(static_cast<std::size_t>(alphabet.size), rng);
        }
        return std::make_unique<ChainDistribution>(alphabet, std::move(initial),
                                                   std::move(transitions));
    }
    throw std::invalid_argument("unknown model kind: " + kind);
}

}  // namespace subcond

#endif
