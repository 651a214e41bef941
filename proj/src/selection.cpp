#include "dbd/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "dbd/error.hpp"
#include "dbd/util.hpp"

namespace dbd {

double entropy(const std::vector<double>& class_counts) {
    double total = 0;
    for (double c : class_counts) {
        if (c < 0) throw InvalidArgument("negative class count");
        total += c;
    }
    if (total <= 0) throw InvalidArgument("entropy of an empty distribution");
    double h = 0;
    for (double c : class_counts) {
        if (c <= 0) continue;
        double p = c / total;
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

struct ValueLabel {
    double value;
    std::size_t label;
};

double range_entropy(const std::vector<double>& counts, double total, std::size_t* distinct) {
    if (distinct) *distinct = 0;
    double h = 0;
    for (double c : counts) {
        if (c <= 0) continue;
        if (distinct) ++*distinct;
        double p = c / total;
        h -= p * std::log2(p);
    }
    return h;
}

void mdl_split(const std::vector<ValueLabel>& sorted, std::size_t lo, std::size_t hi,
               std::size_t num_classes, std::vector<double>& cuts) {
    const std::size_t n = hi - lo;
    if (n < 2) return;

    std::vector<double> all(num_classes, 0);
    for (std::size_t i = lo; i < hi; ++i) all[sorted[i].label] += 1;
    std::size_t k = 0;
    const double parent_entropy = range_entropy(all, static_cast<double>(n), &k);
    if (parent_entropy <= 0) return;

    std::vector<double> left(num_classes, 0);
    std::vector<double> best_left;
    double best_weighted = 0;
    std::size_t best_i = 0;
    bool found = false;
    for (std::size_t i = lo; i + 1 < hi; ++i) {
        left[sorted[i].label] += 1;
        if (!(sorted[i].value < sorted[i + 1].value)) continue;
        const double nl = static_cast<double>(i + 1 - lo);
        const double nr = static_cast<double>(hi - i - 1);
        std::vector<double> right(num_classes);
        for (std::size_t c = 0; c < num_classes; ++c) right[c] = all[c] - left[c];
        double weighted =
            (nl * range_entropy(left, nl, nullptr) + nr * range_entropy(right, nr, nullptr)) /
            static_cast<double>(n);
        if (!found || weighted < best_weighted) {
            found = true;
            best_weighted = weighted;
            best_i = i;
            best_left = left;
        }
    }
    if (!found) return;

    const double nl = static_cast<double>(best_i + 1 - lo);
    const double nr = static_cast<double>(hi - best_i - 1);
    std::vector<double> right(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) right[c] = all[c] - best_left[c];
    std::size_t k1 = 0, k2 = 0;
    const double e1 = range_entropy(best_left, nl, &k1);
    const double e2 = range_entropy(right, nr, &k2);
    const double gain = parent_entropy - best_weighted;
    const double bound =
        (std::log2(static_cast<double>(n) - 1.0) +
         std::log2(std::pow(3.0, static_cast<double>(k)) - 2.0) -
         static_cast<double>(k) * parent_entropy + static_cast<double>(k1) * e1 +
         static_cast<double>(k2) * e2) /
        static_cast<double>(n);
    if (gain <= bound) return;

    cuts.push_back((sorted[best_i].value + sorted[best_i + 1].value) / 2.0);
    mdl_split(sorted, lo, best_i + 1, num_classes, cuts);
    mdl_split(sorted, best_i + 1, hi, num_classes, cuts);
}

std::size_t checked_attribute(const Dataset& d, std::size_t attribute) {
    if (attribute >= d.schema().size())
        throw InvalidArgument("unknown attribute index " + std::to_string(attribute));
    if (attribute == d.schema().class_index())
        throw InvalidArgument("attribute is the class");
    return attribute;
}

} // namespace

std::vector<double> mdl_discretize(const std::vector<double>& values,
                                   const std::vector<std::size_t>& labels,
                                   std::size_t num_classes) {
    if (values.size() != labels.size())
        throw InvalidArgument("values and labels differ in length");
    std::vector<ValueLabel> sorted;
    sorted.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sorted.push_back({values[i], labels[i]});
    std::sort(sorted.begin(), sorted.end(),
              [](const ValueLabel& a, const ValueLabel& b) { return a.value < b.value; });
    std::vector<double> cuts;
    mdl_split(sorted, 0, sorted.size(), num_classes, cuts);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

double information_gain(const Dataset& d, std::size_t attribute) {
    const std::size_t a = checked_attribute(d, attribute);
    const auto& spec = d.schema()[a];
    const std::size_t num_classes = d.schema().num_classes();

    std::vector<std::vector<double>> counts; // per value bin, per class
    std::vector<double> class_totals(num_classes, 0);
    double n = 0;

    if (spec.discrete()) {
        counts.assign(spec.domain().size(), std::vector<double>(num_classes, 0));
        for (std::size_t i = 0; i < d.size(); ++i) {
            double v = d[i][a];
            if (is_missing(v)) continue;
            counts[static_cast<std::size_t>(v)][d.class_of(i)] += 1;
            class_totals[d.class_of(i)] += 1;
            n += 1;
        }
    } else {
        std::vector<double> values;
        std::vector<std::size_t> labels;
        for (std::size_t i = 0; i < d.size(); ++i) {
            double v = d[i][a];
            if (is_missing(v)) continue;
            values.push_back(v);
            labels.push_back(d.class_of(i));
        }
        auto cuts = mdl_discretize(values, labels, num_classes);
        counts.assign(cuts.size() + 1, std::vector<double>(num_classes, 0));
        for (std::size_t i = 0; i < values.size(); ++i) {
            auto bin = static_cast<std::size_t>(
                std::upper_bound(cuts.begin(), cuts.end(), values[i]) - cuts.begin());
            counts[bin][labels[i]] += 1;
            class_totals[labels[i]] += 1;
            n += 1;
        }
    }

    if (n <= 0) return 0.0;
    double h = entropy(class_totals);
    double conditional = 0;
    for (const auto& bin : counts) {
        double bin_total = std::accumulate(bin.begin(), bin.end(), 0.0);
        if (bin_total <= 0) continue;
        conditional += (bin_total / n) * entropy(bin);
    }
    return std::max(0.0, h - conditional);
}

namespace {

double abs_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    if (n < 2) return 0.0;
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0 || syy <= 0) return 0.0;
    return std::abs(sxy / std::sqrt(sxx * syy));
}

} // namespace

double correlation_eval(const Dataset& d, std::size_t attribute) {
    const std::size_t a = checked_attribute(d, attribute);
    const auto& spec = d.schema()[a];
    const std::size_t positive = positive_class_index(d.schema());

    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < d.size(); ++i) {
        double v = d[i][a];
        if (is_missing(v)) continue;
        x.push_back(v);
        y.push_back(d.class_of(i) == positive ? 1.0 : 0.0);
    }
    if (x.empty()) return 0.0;

    if (!spec.discrete()) return abs_pearson(x, y);

    const std::size_t num_values = spec.domain().size();
    const double n = static_cast<double>(x.size());
    double score = 0;
    for (std::size_t v = 0; v < num_values; ++v) {
        std::vector<double> indicator(x.size());
        double n_v = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            indicator[i] = static_cast<std::size_t>(x[i]) == v ? 1.0 : 0.0;
            n_v += indicator[i];
        }
        if (n_v <= 0) continue;
        score += (n_v / n) * abs_pearson(indicator, y);
    }
    return score;
}

std::string_view evaluator_name(Evaluator e) {
    return e == Evaluator::InformationGain ? "information_gain" : "correlation";
}

Ranking rank_attributes(const Dataset& d, Evaluator evaluator) {
    Ranking ranking;
    ranking.evaluator = evaluator;
    const auto& schema = d.schema();
    if (schema.size() < 2) throw InvalidArgument("dataset has no non-class attributes");
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (a == schema.class_index()) continue;
        double score = evaluator == Evaluator::InformationGain ? information_gain(d, a)
                                                               : correlation_eval(d, a);
        ranking.scores.push_back({schema[a].name, evaluator, score});
    }
    std::stable_sort(ranking.scores.begin(), ranking.scores.end(),
                     [](const AttributeScore& a, const AttributeScore& b) {
                         return a.score > b.score;
                     });
    return ranking;
}

void ranking_csv(const Ranking& ranking, std::ostream& out) {
    out << "rank,attribute,evaluator,score\n";
    char buf[32];
    for (std::size_t i = 0; i < ranking.scores.size(); ++i) {
        const auto& s = ranking.scores[i];
        std::snprintf(buf, sizeof(buf), "%.4f", s.score);
        out << (i + 1) << ',' << s.attribute << ',' << evaluator_name(s.evaluator) << ',' << buf
            << '\n';
    }
}

Dataset filter_attributes(const Dataset& d, const std::vector<std::string>& keep) {
    const auto& schema = d.schema();
    std::unordered_set<std::string> want(keep.begin(), keep.end());
    for (const auto& name : keep) {
        auto idx = schema.find(name);
        if (!idx) throw InvalidArgument("unknown attribute \"" + name + "\"");
        if (*idx == schema.class_index())
            throw InvalidArgument("keep set must not include the class attribute");
    }

    std::vector<std::size_t> cols;
    for (std::size_t a = 0; a < schema.size(); ++a)
        if (a == schema.class_index() || want.count(schema[a].name)) cols.push_back(a);

    std::vector<AttributeSpec> attrs;
    std::size_t class_idx = 0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        attrs.push_back(schema[cols[i]]);
        if (cols[i] == schema.class_index()) class_idx = i;
    }
    std::vector<Instance> rows;
    rows.reserve(d.size());
    for (const auto& row : d.rows()) {
        Instance inst;
        inst.reserve(cols.size());
        for (auto c : cols) inst.push_back(row[c]);
        rows.push_back(std::move(inst));
    }
    return Dataset(Schema(std::move(attrs), class_idx), std::move(rows));
}

} // namespace dbd
