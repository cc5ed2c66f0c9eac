#ifndef SUBCOND_TAMING_HPP
#define SUBCOND_TAMING_HPP

#include <cstdint>
#include <stdexcept>

#include "subcond/oracle.hpp"

namespace subcond {

enum class TamingMode { hypercube, hypergrid };

inline void validate_theta(double theta) {
    if (!(theta > 0.0 && theta < 0.5))
        throw std::invalid_argument("taming parameter must lie in (0, 1/2)");
}

// Tamed conditional marginal: every coordinate marginal is mixed with the
// uniform distribution so it is bounded away from zero.
//   hypercube: (1-2*theta)*p + theta          (floor theta)
//   hypergrid: (1-theta)*p + theta/|Sigma|    (floor theta/|Sigma|)
inline double tamed_marginal(double p, double theta, TamingMode mode, int alphabet_size) {
    if (mode == TamingMode::hypercube) return (1.0 - 2.0 * theta) * p + theta;
    return (1.0 - theta) * p + theta / alphabet_size;
}

// Oracle wrapper implementing the taming transform on the fly. The inner
// meter is the meter: the uniform branch costs no inner query, so the budget
// bounds true queries to the wrapped distribution.
class TamedOracle : public SubcondOracle {
public:
    TamedOracle(SubcondOracle& inner, double theta, TamingMode mode,
                std::uint64_t seed)
        : inner_(inner), theta_(theta), mode_(mode), rng_(seed) {
        validate_theta(theta);
        if (mode == TamingMode::hypercube && inner.alphabet().size != 2)
            throw std::invalid_argument("hypercube taming requires a binary alphabet");
    }

    int n() const override { return inner_.n(); }
    const Alphabet& alphabet() const override { return inner_.alphabet(); }
    QueryMeter& meter() override { return inner_.meter(); }

    Symbol sample_next(Prefix prefix) override {
        double delegate_prob =
            mode_ == TamingMode::hypercube ? 1.0 - 2.0 * theta_ : 1.0 - theta_;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        if (unif(rng_) < delegate_prob) return inner_.sample_next(prefix);
        std::uniform_int_distribution<int> sym(0, alphabet().size - 1);
        return static_cast<Symbol>(sym(rng_));
    }

    Word sample_full(Prefix prefix) override {
        validate_prefix(prefix, n(), alphabet());
        Word w(prefix.begin(), prefix.end());
        while (static_cast<int>(w.size()) < n())
            w.push_back(sample_next(Prefix(w.data(), w.size())));
        return w;
    }

private:
    SubcondOracle& inner_;
    double theta_;
    TamingMode mode_;
    Rng rng_;
};

// Exact tamed counterpart D' of a model, built by ancestral recursion over
// the full domain. Verification-only: enumeration-bound.
inline ExplicitDistribution tame_exact(const Distribution& model, double theta,
                                       TamingMode mode) {
    validate_theta(theta);
    if (mode == TamingMode::hypercube && model.alphabet().size != 2)
        throw std::invalid_argument("hypercube taming requires a binary alphabet");
    int n = model.n();
    const Alphabet& alphabet = model.alphabet();
    std::uint64_t total = domain_size(n, alphabet);
    std::vector<double> mass(total);
    Word w(static_cast<std::size_t>(n), 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        double p = 1.0;
        for (int j = 0; j < n; ++j) {
            Prefix prefix(w.data(), static_cast<std::size_t>(j));
            double mj = model.marginal(prefix, w[static_cast<std::size_t>(j)]);
            p *= tamed_marginal(mj, theta, mode, alphabet.size);
        }
        mass[idx] = p;
        for (int j = n - 1; j >= 0; --j) {
            if (++w[static_cast<std::size_t>(j)] < alphabet.size) break;
            w[static_cast<std::size_t>(j)] = 0;
        }
    }
    return ExplicitDistribution(n, alphabet, std::move(mass));
}

}  // namespace subcond

#endif
