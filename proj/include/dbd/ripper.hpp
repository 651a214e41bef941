#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dbd/classifier.hpp"
#include "dbd/dataset.hpp"

namespace dbd {

struct RipperParams {
    std::size_t folds_grow_prune = 3; // grow on (k-1)/k, prune on 1/k
    std::size_t optimizations = 2;
    std::uint64_t seed = 1;
    bool operator==(const RipperParams&) const = default;
};

struct RuleCondition {
    enum class Op { Eq, Le, Ge };
    std::size_t attribute = 0;
    Op op = Op::Eq;
    double value = 0; // value index for Eq on discrete attributes

    /// A condition on a missing cell is not satisfied.
    bool matches(const Instance& x) const {
        double v = x[attribute];
        if (is_missing(v)) return false;
        switch (op) {
        case Op::Eq: return v == value;
        case Op::Le: return v <= value;
        case Op::Ge: return v >= value;
        }
        return false;
    }
};

/// One rule of the decision list; all rules predict the positive class.
struct Rule {
    std::vector<RuleCondition> conditions;
    double train_positive = 0; // first-match coverage on the training set
    double train_negative = 0;
    double prune_positive = 0; // acceptance-time prune-set coverage
    double prune_negative = 0;

    bool matches(const Instance& x) const {
        for (const auto& c : conditions)
            if (!c.matches(x)) return false;
        return true;
    }
};

/// RIPPER output: ordered rules for the positive (minority) class with
/// the remaining class as default.
struct RuleSet {
    std::vector<Rule> rules;
    std::size_t positive_class = 0;
    std::size_t default_class = 1;
    double default_positive = 0; // uncovered training positives
    double default_negative = 0;
    std::size_t num_classes = 2;
};

RuleSet fit_ripper(const Dataset& d, const RipperParams& params = {});

/// First matching rule answers with its Laplace-smoothed training
/// coverage; unmatched instances get the default-class distribution.
ClassDistribution ripper_predict(const RuleSet& rs, const Schema& schema, const Instance& x);

std::string ruleset_to_text(const RuleSet& rs, const Schema& schema);

} // namespace dbd
