#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dbd/dataset.hpp"

namespace dbd {

/// Shannon entropy in bits of a count distribution. Counts may be
/// fractional (weighted instances); their sum must be positive.
double entropy(const std::vector<double>& class_counts);

/// Fayyad-Irani supervised discretization: recursive entropy-minimizing
/// binary splits, each accepted only when its gain clears the MDL bound
///   gain > (log2(N-1) + log2(3^k - 2) - k*E + k1*E1 + k2*E2) / N.
/// Returns ascending cut points (possibly none). Missing values must be
/// filtered out by the caller; `values` and `labels` run in parallel.
std::vector<double> mdl_discretize(const std::vector<double>& values,
                                   const std::vector<std::size_t>& labels,
                                   std::size_t num_classes);

/// H(class) - sum_v (n_v/n) H(class|v), computed over the instances
/// whose attribute cell is present. Numeric attributes are
/// MDL-discretized first; zero accepted cuts mean zero gain.
double information_gain(const Dataset& d, std::size_t attribute);

/// |Pearson correlation| between the attribute and the positive-class
/// indicator. Discrete attributes score the frequency-weighted mean of
/// their per-value indicator columns. Zero variance scores 0.
double correlation_eval(const Dataset& d, std::size_t attribute);

enum class Evaluator { InformationGain, Correlation };

std::string_view evaluator_name(Evaluator e);

struct AttributeScore {
    std::string attribute;
    Evaluator evaluator;
    double score;
};

/// Scores sorted descending; ties keep schema order.
struct Ranking {
    Evaluator evaluator;
    std::vector<AttributeScore> scores;
};

Ranking rank_attributes(const Dataset& d, Evaluator evaluator);

/// `rank,attribute,evaluator,score` rows, scores to 4 decimals.
void ranking_csv(const Ranking& ranking, std::ostream& out);

/// Projects the dataset to `keep` plus the class attribute, preserving
/// schema order.
Dataset filter_attributes(const Dataset& d, const std::vector<std::string>& keep);

} // namespace dbd
