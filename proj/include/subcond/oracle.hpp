#ifndef SUBCOND_ORACLE_HPP
#define SUBCOND_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "subcond/models.hpp"

namespace subcond {

struct BudgetExhausted : std::runtime_error {
    BudgetExhausted() : std::runtime_error("query budget exhausted") {}
};

// Counts oracle queries; optionally enforces a hard ceiling. A meter may
// forward charges to a parent meter so that several oracles share one budget.
class QueryMeter {
public:
    QueryMeter() = default;
    explicit QueryMeter(std::uint64_t budget) : budget_(budget) {}

    void set_parent(QueryMeter* parent) { parent_ = parent; }

    // The (budget+1)-th charge throws before the count moves.
    void charge() {
        if (budget_ && count_ >= *budget_) throw BudgetExhausted{};
        if (parent_) parent_->charge();
        ++count_;
    }

    std::uint64_t count() const { return count_; }
    std::optional<std::uint64_t> budget() const { return budget_; }

private:
    std::uint64_t count_ = 0;
    std::optional<std::uint64_t> budget_;
    QueryMeter* parent_ = nullptr;
};

// SUBCOND restricted to prefix patterns: all wildcards form a suffix, so a
// query is "sample coordinate j+1 given the first j coordinates".
class SubcondOracle {
public:
    virtual ~SubcondOracle() = default;

    virtual int n() const = 0;
    virtual const Alphabet& alphabet() const = 0;
    virtual QueryMeter& meter() = 0;

    // One SUBCOND query: a draw from the conditional marginal of the next
    // coordinate. prefix must leave at least one coordinate free.
    virtual Symbol sample_next(Prefix prefix) = 0;

    // One SUBCOND query returning a full word extending prefix.
    virtual Word sample_full(Prefix prefix) = 0;
};

// Oracle backed by a fully-known simulated model. sample_next draws directly
// from the exact conditional marginal; one query charged either way.
class SimulatedOracle : public SubcondOracle {
public:
    SimulatedOracle(const Distribution& model, std::uint64_t seed)
        : model_(model), rng_(seed) {}

    int n() const override { return model_.n(); }
    const Alphabet& alphabet() const override { return model_.alphabet(); }
    QueryMeter& meter() override { return meter_; }

    Symbol sample_next(Prefix prefix) override {
        validate_prefix(prefix, model_.n(), model_.alphabet());
        if (static_cast<int>(prefix.size()) >= model_.n())
            throw std::invalid_argument("prefix fully specifies the word");
        meter_.charge();
        return model_.sample_marginal(prefix, rng_);
    }

    Word sample_full(Prefix prefix) override {
        validate_prefix(prefix, model_.n(), model_.alphabet());
        meter_.charge();
        return model_.sample(rng_, prefix);
    }

    const Distribution& model() const { return model_; }

private:
    const Distribution& model_;
    Rng rng_;
    QueryMeter meter_;
};

}  // namespace subcond

#endif
