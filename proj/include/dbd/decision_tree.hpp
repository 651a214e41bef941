#pragma once

#include <string>
#include <vector>

#include "dbd/classifier.hpp"
#include "dbd/dataset.hpp"

namespace dbd {

struct C45Params {
    double confidence_factor = 0.25;
    double min_leaf = 2; // minimum (weighted) instances per admissible branch
    bool prune = true;
    bool operator==(const C45Params&) const = default;
};

/// Internal nodes test one attribute: numeric `<= threshold` (two
/// children) or discrete multiway (one child per value). Nominal
/// attributes appear at most once per path; numeric may repeat.
struct TreeNode {
    int attribute = -1; // -1 marks a leaf
    double threshold = 0;
    std::vector<TreeNode> children;
    // Class distribution used for prediction. Branches that received no
    // training instances become leaves carrying the parent distribution
    // with reach 0.
    std::vector<double> class_counts;
    double reach = 0; // weighted training instances routed here
    std::size_t majority = 0;

    bool is_leaf() const { return attribute < 0; }
};

struct DecisionTree {
    C45Params params;
    TreeNode root;

    std::size_t num_leaves() const;
    std::size_t depth() const; // leaf-only tree has depth 0
};

/// Grows with the C4.5 gain-ratio criterion (maximal ratio among splits
/// whose gain reaches the mean candidate gain; numeric thresholds are
/// midpoints between sorted distinct values), then applies pessimistic
/// error-based subtree replacement at the given confidence factor.
/// Missing values are fractionally weighted down every branch.
DecisionTree fit_c45(const Dataset& d, const C45Params& params = {});

ClassDistribution tree_predict(const DecisionTree& t, const Schema& schema, const Instance& x);

std::string tree_to_text(const DecisionTree& t, const Schema& schema);

} // namespace dbd
