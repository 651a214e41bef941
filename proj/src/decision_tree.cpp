#include "dbd/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dbd/error.hpp"
#include "dbd/selection.hpp"
#include "dbd/util.hpp"

namespace dbd {

namespace {

constexpr double kEps = 1e-12;

struct WeightedRow {
    std::size_t row;
    double weight;
};

struct Builder {
    const Dataset& data;
    const C45Params& params;
    std::size_t num_classes;
    std::size_t positive;

    std::vector<double> counts_of(const std::vector<WeightedRow>& rows) const {
        std::vector<double> counts(num_classes, 0);
        for (const auto& wr : rows) counts[data.class_of(wr.row)] += wr.weight;
        return counts;
    }

    std::size_t majority_of(const std::vector<double>& counts) const {
        std::size_t best = positive;
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (counts[c] > counts[best]) best = c;
        return best;
    }

    static double weighted_entropy(const std::vector<double>& counts) {
        double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        if (total <= 0) return 0;
        double h = 0;
        for (double c : counts) {
            if (c <= 0) continue;
            double p = c / total;
            h -= p * std::log2(p);
        }
        return h;
    }

    struct Candidate {
        std::size_t attribute = 0;
        double threshold = 0;
        double gain = 0;
        double ratio = 0;
    };

    // Gain scaled by the known-value fraction; split info includes the
    // missing bucket as an extra branch (classic C4.5 accounting).
    static void finish_candidate(Candidate& cand, double gain_known, double w_known,
                                 double w_total, const std::vector<double>& branch_weights) {
        cand.gain = (w_known / w_total) * gain_known;
        double split_info = 0;
        for (double w : branch_weights) {
            if (w <= 0) continue;
            double f = w / w_total;
            split_info -= f * std::log2(f);
        }
        double w_miss = w_total - w_known;
        if (w_miss > 0) {
            double f = w_miss / w_total;
            split_info -= f * std::log2(f);
        }
        cand.ratio = split_info > kEps ? cand.gain / split_info : 0;
    }

    bool discrete_candidate(const std::vector<WeightedRow>& rows, std::size_t a, double w_total,
                            Candidate& out) const {
        const auto& dom = data.schema()[a].domain();
        std::vector<std::vector<double>> branch_counts(dom.size(),
                                                       std::vector<double>(num_classes, 0));
        std::vector<double> branch_weights(dom.size(), 0);
        std::vector<double> known_counts(num_classes, 0);
        double w_known = 0;
        for (const auto& wr : rows) {
            double v = data[wr.row][a];
            if (is_missing(v)) continue;
            auto idx = static_cast<std::size_t>(v);
            branch_counts[idx][data.class_of(wr.row)] += wr.weight;
            branch_weights[idx] += wr.weight;
            known_counts[data.class_of(wr.row)] += wr.weight;
            w_known += wr.weight;
        }
        if (w_known <= 0) return false;
        std::size_t big_branches = 0;
        for (double w : branch_weights)
            if (w >= params.min_leaf) ++big_branches;
        if (big_branches < 2) return false;

        double h = weighted_entropy(known_counts);
        double cond = 0;
        for (std::size_t v = 0; v < dom.size(); ++v) {
            if (branch_weights[v] <= 0) continue;
            cond += (branch_weights[v] / w_known) * weighted_entropy(branch_counts[v]);
        }
        double gain_known = h - cond;
        if (gain_known <= kEps) return false;
        out.attribute = a;
        finish_candidate(out, gain_known, w_known, w_total, branch_weights);
        return out.gain > kEps;
    }

    bool numeric_candidate(const std::vector<WeightedRow>& rows, std::size_t a, double w_total,
                           Candidate& out) const {
        struct Entry {
            double value;
            double weight;
            std::size_t cls;
        };
        std::vector<Entry> known;
        known.reserve(rows.size());
        std::vector<double> known_counts(num_classes, 0);
        double w_known = 0;
        for (const auto& wr : rows) {
            double v = data[wr.row][a];
            if (is_missing(v)) continue;
            known.push_back({v, wr.weight, data.class_of(wr.row)});
            known_counts[data.class_of(wr.row)] += wr.weight;
            w_known += wr.weight;
        }
        if (known.size() < 2 || w_known <= 0) return false;
        std::sort(known.begin(), known.end(),
                  [](const Entry& a, const Entry& b) { return a.value < b.value; });

        double h = weighted_entropy(known_counts);
        std::vector<double> left(num_classes, 0);
        double w_left = 0;
        bool found = false;
        double best_gain_known = 0;
        double best_threshold = 0;
        for (std::size_t i = 0; i + 1 < known.size(); ++i) {
            left[known[i].cls] += known[i].weight;
            w_left += known[i].weight;
            if (!(known[i].value < known[i + 1].value)) continue;
            double w_right = w_known - w_left;
            if (w_left < params.min_leaf || w_right < params.min_leaf) continue;
            std::vector<double> right(num_classes);
            for (std::size_t c = 0; c < num_classes; ++c) right[c] = known_counts[c] - left[c];
            double cond = (w_left / w_known) * weighted_entropy(left) +
                          (w_right / w_known) * weighted_entropy(right);
            double gain_known = h - cond;
            if (!found || gain_known > best_gain_known + kEps) {
                found = true;
                best_gain_known = gain_known;
                best_threshold = (known[i].value + known[i + 1].value) / 2.0;
            }
        }
        if (!found || best_gain_known <= kEps) return false;

        // branch weights at the chosen threshold, for the split info
        double w_le = 0;
        for (const auto& e : known)
            if (e.value <= best_threshold) w_le += e.weight;
        out.attribute = a;
        out.threshold = best_threshold;
        finish_candidate(out, best_gain_known, w_known, w_total, {w_le, w_known - w_le});
        return out.gain > kEps;
    }

    TreeNode build(const std::vector<WeightedRow>& rows, std::vector<bool>& used_discrete) const {
        TreeNode node;
        node.class_counts = counts_of(rows);
        node.majority = majority_of(node.class_counts);
        double w_total = std::accumulate(node.class_counts.begin(), node.class_counts.end(), 0.0);
        node.reach = w_total;

        std::size_t live_classes = 0;
        for (double c : node.class_counts)
            if (c > 0) ++live_classes;
        if (live_classes <= 1 || w_total < 2 * params.min_leaf) return node;

        const auto& schema = data.schema();
        std::vector<Candidate> candidates;
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (a == schema.class_index()) continue;
            Candidate cand;
            bool ok;
            if (schema[a].discrete()) {
                if (used_discrete[a]) continue;
                ok = discrete_candidate(rows, a, w_total, cand);
            } else {
                ok = numeric_candidate(rows, a, w_total, cand);
            }
            if (ok) candidates.push_back(cand);
        }
        if (candidates.empty()) return node;

        double mean_gain = 0;
        for (const auto& c : candidates) mean_gain += c.gain;
        mean_gain /= static_cast<double>(candidates.size());

        const Candidate* best = nullptr;
        for (const auto& c : candidates) {
            if (c.gain + kEps < mean_gain) continue; // gain-ratio guard
            if (!best || c.ratio > best->ratio + kEps) best = &c;
        }
        if (!best) return node;

        const std::size_t a = best->attribute;
        const bool discrete = schema[a].discrete();
        const std::size_t num_branches = discrete ? schema[a].domain().size() : 2;

        std::vector<std::vector<WeightedRow>> parts(num_branches);
        std::vector<WeightedRow> missing_rows;
        std::vector<double> branch_weight(num_branches, 0);
        double w_known = 0;
        for (const auto& wr : rows) {
            double v = data[wr.row][a];
            if (is_missing(v)) {
                missing_rows.push_back(wr);
                continue;
            }
            std::size_t b = discrete ? static_cast<std::size_t>(v)
                                     : (v <= best->threshold ? 0 : 1);
            parts[b].push_back(wr);
            branch_weight[b] += wr.weight;
            w_known += wr.weight;
        }
        for (const auto& wr : missing_rows) {
            for (std::size_t b = 0; b < num_branches; ++b) {
                if (branch_weight[b] <= 0) continue;
                double share = wr.weight * branch_weight[b] / w_known;
                if (share > kEps) parts[b].push_back({wr.row, share});
            }
        }

        node.attribute = static_cast<int>(a);
        node.threshold = best->threshold;
        node.children.reserve(num_branches);
        if (discrete) used_discrete[a] = true;
        for (std::size_t b = 0; b < num_branches; ++b) {
            if (parts[b].empty()) {
                // empty branch: a leaf carrying the parent distribution
                TreeNode leaf;
                leaf.class_counts = node.class_counts;
                leaf.reach = 0;
                leaf.majority = node.majority;
                node.children.push_back(std::move(leaf));
            } else {
                node.children.push_back(build(parts[b], used_discrete));
            }
        }
        if (discrete) used_discrete[a] = false;
        return node;
    }
};

// Upper-tail standard normal quantile: P(Z > z) = tail.
double normal_upper_quantile(double tail) {
    double lo = -10, hi = 10;
    for (int i = 0; i < 200; ++i) {
        double mid = (lo + hi) / 2;
        double p = 0.5 * std::erfc(mid / std::sqrt(2.0));
        if (p > tail)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2;
}

// C4.5's AddErrs: extra errors granted by the CF upper confidence bound.
double added_errors(double n, double e, double cf, double z) {
    if (n <= 0) return 0;
    if (e < 1e-6) return n * (1 - std::exp(std::log(cf) / n));
    if (e < 0.9999) {
        double v0 = n * (1 - std::exp(std::log(cf) / n));
        return v0 + e * (added_errors(n, 1.0, cf, z) - v0);
    }
    if (e + 0.5 >= n) return 0.67 * (n - e);
    double z2 = z * z;
    double pr = (e + 0.5 + z2 / 2 +
                 z * std::sqrt((e + 0.5) * (1 - (e + 0.5) / n) + z2 / 4)) /
                (n + z2);
    return n * pr - e;
}

struct Pruner {
    double cf;
    double z;

    double leaf_estimate(const TreeNode& node) const {
        double n = node.reach;
        if (n <= 0) return 0;
        double total = std::accumulate(node.class_counts.begin(), node.class_counts.end(), 0.0);
        double e = n - n * node.class_counts[node.majority] / total;
        return e + added_errors(n, e, cf, z);
    }

    double prune(TreeNode& node) const {
        if (node.is_leaf()) return leaf_estimate(node);
        double subtree = 0;
        for (auto& child : node.children) subtree += prune(child);
        double as_leaf = leaf_estimate(node);
        if (as_leaf <= subtree + 1e-9) {
            node.attribute = -1;
            node.children.clear();
            return as_leaf;
        }
        return subtree;
    }
};

std::size_t count_leaves(const TreeNode& node) {
    if (node.is_leaf()) return 1;
    std::size_t n = 0;
    for (const auto& c : node.children) n += count_leaves(c);
    return n;
}

std::size_t node_depth(const TreeNode& node) {
    if (node.is_leaf()) return 0;
    std::size_t d = 0;
    for (const auto& c : node.children) d = std::max(d, node_depth(c));
    return d + 1;
}

void predict_into(const TreeNode& node, const Schema& schema, const Instance& x, double weight,
                  std::vector<double>& acc) {
    if (node.is_leaf()) {
        // Laplace-smoothed leaf distribution
        double total = std::accumulate(node.class_counts.begin(), node.class_counts.end(), 0.0);
        std::size_t k = node.class_counts.size();
        for (std::size_t c = 0; c < k; ++c)
            acc[c] += weight * (node.class_counts[c] + 1.0) / (total + static_cast<double>(k));
        return;
    }
    const std::size_t a = static_cast<std::size_t>(node.attribute);
    double v = x[a];
    if (is_missing(v)) {
        double total = 0;
        for (const auto& child : node.children) total += child.reach;
        for (const auto& child : node.children) {
            double share = total > 0 ? child.reach / total
                                     : 1.0 / static_cast<double>(node.children.size());
            if (share > 0) predict_into(child, schema, x, weight * share, acc);
        }
        return;
    }
    std::size_t b = schema[a].discrete() ? static_cast<std::size_t>(v)
                                         : (v <= node.threshold ? 0 : 1);
    predict_into(node.children[b], schema, x, weight, acc);
}

void describe(const TreeNode& node, const Schema& schema, int indent, std::ostringstream& out) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (node.is_leaf()) {
        out << pad << "-> " << schema.class_attribute().values[node.majority] << " (";
        for (std::size_t c = 0; c < node.class_counts.size(); ++c) {
            if (c) out << '/';
            out << format_double(node.class_counts[c]);
        }
        out << ")\n";
        return;
    }
    const auto& spec = schema[static_cast<std::size_t>(node.attribute)];
    if (spec.discrete()) {
        for (std::size_t b = 0; b < node.children.size(); ++b) {
            out << pad << spec.name << " = " << spec.domain()[b] << ":\n";
            describe(node.children[b], schema, indent + 1, out);
        }
    } else {
        out << pad << spec.name << " <= " << format_double(node.threshold) << ":\n";
        describe(node.children[0], schema, indent + 1, out);
        out << pad << spec.name << " > " << format_double(node.threshold) << ":\n";
        describe(node.children[1], schema, indent + 1, out);
    }
}

} // namespace

std::size_t DecisionTree::num_leaves() const { return count_leaves(root); }

std::size_t DecisionTree::depth() const { return node_depth(root); }

DecisionTree fit_c45(const Dataset& d, const C45Params& params) {
    if (d.empty()) throw InvalidArgument("cannot train a tree on an empty dataset");
    if (params.min_leaf < 1) throw InvalidArgument("min_leaf must be at least 1");

    Builder builder{d, params, d.schema().num_classes(), positive_class_index(d.schema())};
    std::vector<WeightedRow> rows;
    rows.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) rows.push_back({i, 1.0});
    std::vector<bool> used(d.schema().size(), false);

    DecisionTree tree;
    tree.params = params;
    tree.root = builder.build(rows, used);
    if (params.prune) {
        double cf = std::clamp(params.confidence_factor, 1e-6, 0.4999);
        Pruner pruner{cf, normal_upper_quantile(cf)};
        pruner.prune(tree.root);
    }
    return tree;
}

ClassDistribution tree_predict(const DecisionTree& t, const Schema& schema, const Instance& x) {
    ClassDistribution dist;
    dist.probabilities.assign(schema.num_classes(), 0.0);
    predict_into(t.root, schema, x, 1.0, dist.probabilities);
    double total = std::accumulate(dist.probabilities.begin(), dist.probabilities.end(), 0.0);
    if (total > 0)
        for (auto& p : dist.probabilities) p /= total;
    return dist;
}

std::string tree_to_text(const DecisionTree& t, const Schema& schema) {
    std::ostringstream out;
    describe(t.root, schema, 0, out);
    return out.str();
}

} // namespace dbd
