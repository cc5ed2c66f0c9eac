#ifndef SUBCOND_MODELS_HPP
#define SUBCOND_MODELS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "subcond/core.hpp"

namespace subcond {

// Enumeration guard for dense tables and exact TV computations.
inline constexpr std::uint64_t kMaxEnumeration = std::uint64_t{1} << 24;

inline std::uint64_t domain_size(int n, const Alphabet& alphabet) {
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        total *= static_cast<std::uint64_t>(alphabet.size);
        if (total > kMaxEnumeration)
            throw std::domain_error("domain too large for enumeration");
    }
    return total;
}

class ExplicitDistribution;

// A fully-known distribution over Sigma^n. Provides exact conditional
// marginals of the next coordinate given a prefix, exact point probabilities,
// and exact ancestral sampling. Immutable after construction.
class Distribution {
public:
    virtual ~Distribution() = default;

    int n() const { return n_; }
    const Alphabet& alphabet() const { return alphabet_; }

    // Conditional distribution of coordinate |prefix|+1 given the prefix.
    virtual std::vector<double> marginal_vector(Prefix prefix) const = 0;

    double marginal(Prefix prefix, Symbol c) const {
        if (c < 0 || c >= alphabet_.size)
            throw std::invalid_argument("symbol out of range");
        return marginal_vector(prefix)[static_cast<std::size_t>(c)];
    }

    // Chain-rule product of conditional marginals along sigma.
    virtual double point_probability(const Word& sigma) const {
        validate_word(sigma, n_, alphabet_);
        double p = 1.0;
        for (int j = 0; j < n_; ++j) {
            Prefix prefix(sigma.data(), static_cast<std::size_t>(j));
            p *= marginal(prefix, sigma[static_cast<std::size_t>(j)]);
        }
        return p;
    }

    // Exact ancestral sampling of a full word extending the given prefix.
    Word sample(Rng& rng, Prefix prefix = {}) const {
        validate_prefix(prefix, n_, alphabet_);
        Word w(prefix.begin(), prefix.end());
        while (static_cast<int>(w.size()) < n_) {
            Prefix p(w.data(), w.size());
            w.push_back(sample_marginal(p, rng));
        }
        return w;
    }

    Symbol sample_marginal(Prefix prefix, Rng& rng) const {
        std::vector<double> mv = marginal_vector(prefix);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double u = unif(rng);
        double acc = 0.0;
        for (std::size_t c = 0; c + 1 < mv.size(); ++c) {
            acc += mv[c];
            if (u < acc) return static_cast<Symbol>(c);
        }
        return static_cast<Symbol>(mv.size() - 1);
    }

    ExplicitDistribution to_explicit() const;

protected:
    Distribution(int n, Alphabet alphabet) : n_(n), alphabet_(alphabet) {
        if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    }

    int n_;
    Alphabet alphabet_;
};

// Dense mass table over Sigma^n, row-major with the first coordinate most
// significant. Masses are normalized at construction.
class ExplicitDistribution : public Distribution {
public:
    ExplicitDistribution(int n, Alphabet alphabet, std::vector<double> mass)
        : Distribution(n, alphabet), mass_(std::move(mass)) {
        std::uint64_t total = domain_size(n, alphabet);
        if (mass_.size() != total)
            throw std::invalid_argument("mass table size mismatch");
        double sum = 0.0;
        for (double m : mass_) {
            if (m < 0.0) throw std::invalid_argument("negative mass");
            sum += m;
        }
        if (sum <= 0.0) throw std::invalid_argument("zero total mass");
        for (double& m : mass_) m /= sum;
    }

    static ExplicitDistribution point_mass(const Word& sigma, Alphabet alphabet) {
        int n = static_cast<int>(sigma.size());
        std::vector<double> mass(domain_size(n, alphabet), 0.0);
        std::uint64_t idx = 0;
        for (Symbol c : sigma)
            idx = idx * static_cast<std::uint64_t>(alphabet.size) +
                  static_cast<std::uint64_t>(c);
        mass[idx] = 1.0;
        return ExplicitDistribution(n, alphabet, std::move(mass));
    }

    static ExplicitDistribution uniform(int n, Alphabet alphabet) {
        std::vector<double> mass(domain_size(n, alphabet), 1.0);
        return ExplicitDistribution(n, alphabet, std::move(mass));
    }

    std::uint64_t index_of(const Word& w) const {
        std::uint64_t idx = 0;
        for (Symbol c : w)
            idx = idx * static_cast<std::uint64_t>(alphabet_.size) +
                  static_cast<std::uint64_t>(c);
        return idx;
    }

    Word word_at(std::uint64_t idx) const {
        Word w(static_cast<std::size_t>(n_));
        for (int j = n_ - 1; j >= 0; --j) {
            w[static_cast<std::size_t>(j)] =
                static_cast<Symbol>(idx % static_cast<std::uint64_t>(alphabet_.size));
            idx /= static_cast<std::uint64_t>(alphabet_.size);
        }
        return w;
    }

    const std::vector<double>& mass() const { return mass_; }

    double point_probability(const Word& sigma) const override {
        validate_word(sigma, n_, alphabet_);
        return mass_[index_of(sigma)];
    }

    // Subcube mass ratio D(S_{prefix c}) / D(S_prefix). A zero-mass prefix
    // falls back to the uniform vector so downstream estimators stay finite.
    std::vector<double> marginal_vector(Prefix prefix) const override {
        validate_prefix(prefix, n_, alphabet_);
        if (static_cast<int>(prefix.size()) >= n_)
            throw std::invalid_argument("prefix fully specifies the word");
        std::vector<double> sums(static_cast<std::size_t>(alphabet_.size), 0.0);
        int suffix_len = n_ - static_cast<int>(prefix.size()) - 1;
        std::uint64_t block = 1;
        for (int i = 0; i < suffix_len; ++i)
            block *= static_cast<std::uint64_t>(alphabet_.size);
        std::uint64_t base = 0;
        for (Symbol c : prefix)
            base = base * static_cast<std::uint64_t>(alphabet_.size) +
                   static_cast<std::uint64_t>(c);
        base *= block * static_cast<std::uint64_t>(alphabet_.size);
        double total = 0.0;
        for (int c = 0; c < alphabet_.size; ++c) {
            std::uint64_t start = base + static_cast<std::uint64_t>(c) * block;
            double s = 0.0;
            for (std::uint64_t i = 0; i < block; ++i) s += mass_[start + i];
            sums[static_cast<std::size_t>(c)] = s;
            total += s;
        }
        if (total <= 0.0)
            return std::vector<double>(static_cast<std::size_t>(alphabet_.size),
                                       1.0 / alphabet_.size);
        for (double& s : sums) s /= total;
        return sums;
    }

    double subcube_mass(Prefix prefix) const {
        validate_prefix(prefix, n_, alphabet_);
        int suffix_len = n_ - static_cast<int>(prefix.size());
        std::uint64_t block = 1;
        for (int i = 0; i < suffix_len; ++i)
            block *= static_cast<std::uint64_t>(alphabet_.size);
        std::uint64_t base = 0;
        for (Symbol c : prefix)
            base = base * static_cast<std::uint64_t>(alphabet_.size) +
                   static_cast<std::uint64_t>(c);
        base *= block;
        double s = 0.0;
        for (std::uint64_t i = 0; i < block; ++i) s += mass_[base + i];
        return s;
    }

private:
    std::vector<double> mass_;
};

// Independent coordinates, one probability vector per coordinate.
class ProductDistribution : public Distribution {
public:
    ProductDistribution(Alphabet alphabet, std::vector<std::vector<double>> marginals)
        : Distribution(static_cast<int>(marginals.size()), alphabet),
          marginals_(std::move(marginals)) {
        for (auto& mv : marginals_) normalize_row(mv, alphabet.size);
    }

    std::vector<double> marginal_vector(Prefix prefix) const override {
        validate_prefix(prefix, n_, alphabet_);
        if (static_cast<int>(prefix.size()) >= n_)
            throw std::invalid_argument("prefix fully specifies the word");
        return marginals_[prefix.size()];
    }

    const std::vector<std::vector<double>>& marginals() const { return marginals_; }

    static void normalize_row(std::vector<double>& row, int size) {
        if (static_cast<int>(row.size()) != size)
            throw std::invalid_argument("probability vector size mismatch");
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0) throw std::invalid_argument("negative probability");
            sum += p;
        }
        if (sum <= 0.0) throw std::invalid_argument("zero probability vector");
        for (double& p : row) p /= sum;
    }

private:
    std::vector<std::vector<double>> marginals_;
};

// First-order chain: coordinate j depends only on coordinate j-1. Gives a
// test family with non-product correlations and closed-form marginals.
class ChainDistribution : public Distribution {
public:
    ChainDistribution(Alphabet alphabet, std::vector<double> initial,
                      std::vector<std::vector<std::vector<double>>> transitions)
        : Distribution(static_cast<int>(transitions.size()) + 1, alphabet),
          initial_(std::move(initial)),
          transitions_(std::move(transitions)) {
        ProductDistribution::normalize_row(initial_, alphabet.size);
        for (auto& matrix : transitions_) {
            if (static_cast<int>(matrix.size()) != alphabet.size)
                throw std::invalid_argument("transition matrix row count mismatch");
            for (auto& row : matrix) ProductDistribution::normalize_row(row, alphabet.size);
        }
    }

    std::vector<double> marginal_vector(Prefix prefix) const override {
        validate_prefix(prefix, n_, alphabet_);
        if (static_cast<int>(prefix.size()) >= n_)
            throw std::invalid_argument("prefix fully specifies the word");
        if (prefix.empty()) return initial_;
        Symbol prev = prefix.back();
        return transitions_[prefix.size() - 1][static_cast<std::size_t>(prev)];
    }

    const std::vector<double>& initial() const { return initial_; }
    const std::vector<std::vector<std::vector<double>>>& transitions() const {
        return transitions_;
    }

private:
    std::vector<double> initial_;
    std::vector<std::vector<std::vector<double>>> transitions_;
};

inline ExplicitDistribution Distribution::to_explicit() const {
    std::uint64_t total = domain_size(n_, alphabet_);
    std::vector<double> mass(total);
    Word w(static_cast<std::size_t>(n_), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        mass[idx] = point_probability(w);
        // mixed-radix increment
        for (int j = n_ - 1; j >= 0; --j) {
            if (++w[static_cast<std::size_t>(j)] < alphabet_.size) break;
            w[static_cast<std::size_t>(j)] = 0;
        }
    }
    return ExplicitDistribution(n_, alphabet_, std::move(mass));
}

// Half the L1 distance, by full enumeration.
inline double exact_tv(const Distribution& p, const Distribution& q) {
    if (p.n() != q.n() || !(p.alphabet() == q.alphabet()))
        throw std::invalid_argument("distributions on different domains");
    std::uint64_t total = domain_size(p.n(), p.alphabet());
    double sum = 0.0;
    Word w(static_cast<std::size_t>(p.n()), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        sum += std::abs(p.point_probability(w) - q.point_probability(w));
        for (int j = p.n() - 1; j >= 0; --j) {
            if (++w[static_cast<std::size_t>(j)] < p.alphabet().size) break;
            w[static_cast<std::size_t>(j)] = 0;
        }
    }
    return 0.5 * sum;
}

}  // namespace subcond

#endif
