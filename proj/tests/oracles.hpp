// Independent re-implementations used as test oracles. These stay
// deliberately naive (maps, pairwise loops, direct formulas) so they
// share no code path with the library versions they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dbd/dataset.hpp"
#include "dbd/selection.hpp"

namespace oracle {

inline double entropy_bits(const std::vector<double>& counts) {
    double total = 0;
    for (double c : counts) total += c;
    double h = 0;
    for (double c : counts) {
        if (c <= 0) continue;
        h -= (c / total) * std::log2(c / total);
    }
    return h;
}

// IG by direct counting. Numeric attributes are binned with the
// library's published cut points; the aggregation is recomputed here.
inline double information_gain(const dbd::Dataset& d, std::size_t attr) {
    const auto& schema = d.schema();
    const std::size_t num_classes = schema.num_classes();

    std::map<long long, std::vector<double>> groups;
    std::vector<double> totals(num_classes, 0.0);
    double n = 0;

    std::vector<double> cuts;
    if (!schema[attr].discrete()) {
        std::vector<double> values;
        std::vector<std::size_t> labels;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (dbd::is_missing(d[i][attr])) continue;
            values.push_back(d[i][attr]);
            labels.push_back(d.class_of(i));
        }
        cuts = dbd::mdl_discretize(values, labels, num_classes);
    }

    for (std::size_t i = 0; i < d.size(); ++i) {
        double v = d[i][attr];
        if (dbd::is_missing(v)) continue;
        long long key;
        if (schema[attr].discrete()) {
            key = static_cast<long long>(v);
        } else {
            key = 0;
            for (double c : cuts)
                if (v > c) ++key;
        }
        auto& g = groups[key];
        if (g.empty()) g.assign(num_classes, 0.0);
        g[d.class_of(i)] += 1;
        totals[d.class_of(i)] += 1;
        n += 1;
    }
    if (n <= 0) return 0;

    double h = entropy_bits(totals);
    double cond = 0;
    for (const auto& [key, counts] : groups) {
        double gn = 0;
        for (double c : counts) gn += c;
        cond += (gn / n) * entropy_bits(counts);
    }
    double ig = h - cond;
    return ig < 0 ? 0 : ig;
}

inline double pearson_abs(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    if (n < 2) return 0;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        dx += (x[i] - mx) * (x[i] - mx);
        dy += (y[i] - my) * (y[i] - my);
    }
    if (dx <= 0 || dy <= 0) return 0;
    return std::fabs(num / std::sqrt(dx * dy));
}

inline double correlation(const dbd::Dataset& d, std::size_t attr) {
    const auto& schema = d.schema();
    std::size_t positive = dbd::positive_class_index(schema);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (dbd::is_missing(d[i][attr])) continue;
        xs.push_back(d[i][attr]);
        ys.push_back(d.class_of(i) == positive ? 1.0 : 0.0);
    }
    if (xs.empty()) return 0;
    if (!schema[attr].discrete()) return pearson_abs(xs, ys);
    double score = 0;
    const auto& domain = schema[attr].domain();
    for (std::size_t v = 0; v < domain.size(); ++v) {
        std::vector<double> ind;
        double count = 0;
        for (double x : xs) {
            ind.push_back(static_cast<std::size_t>(x) == v ? 1.0 : 0.0);
            count += ind.back();
        }
        if (count <= 0) continue;
        score += (count / static_cast<double>(xs.size())) * pearson_abs(ind, ys);
    }
    return score;
}

// all (positive, negative) pairs, ties at half credit
inline double roc_area(const std::vector<double>& scores, const std::vector<bool>& pos) {
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!pos[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (pos[j]) continue;
            pairs += 1;
            if (scores[i] > scores[j])
                wins += 1;
            else if (scores[i] == scores[j])
                wins += 0.5;
        }
    }
    return pairs > 0 ? wins / pairs : std::nan("");
}

// threshold sweep recomputing each confusion from scratch
inline double prc_area(const std::vector<double>& scores, const std::vector<bool>& pos) {
    double npos = 0;
    for (bool b : pos) npos += b ? 1 : 0;
    if (npos <= 0) return std::nan("");
    std::set<double, std::greater<double>> thresholds(scores.begin(), scores.end());
    double area = 0, prev_recall = 0;
    for (double t : thresholds) {
        double tp = 0, fp = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] < t) continue;
            (pos[i] ? tp : fp) += 1;
        }
        double rec = tp / npos;
        double prec = tp + fp > 0 ? tp / (tp + fp) : 0;
        area += prec * (rec - prev_recall);
        prev_recall = rec;
    }
    return area;
}

// Naive Bayes posterior straight from the smoothed counts, multiplied
// out in probability space.
inline std::vector<double> nb_posterior(const dbd::Dataset& train, const dbd::Instance& x) {
    const auto& schema = train.schema();
    const std::size_t num_classes = schema.num_classes();
    auto counts = train.class_counts();

    std::vector<double> score(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c)
        score[c] = (static_cast<double>(counts[c]) + 1.0) /
                   (static_cast<double>(train.size()) + static_cast<double>(num_classes));

    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (a == schema.class_index() || dbd::is_missing(x[a])) continue;
        if (schema[a].discrete()) {
            const std::size_t v = static_cast<std::size_t>(x[a]);
            const std::size_t num_values = schema[a].domain().size();
            for (std::size_t c = 0; c < num_classes; ++c) {
                double match = 0, total = 0;
                for (std::size_t i = 0; i < train.size(); ++i) {
                    if (train.class_of(i) != c || dbd::is_missing(train[i][a])) continue;
                    total += 1;
                    if (static_cast<std::size_t>(train[i][a]) == v) match += 1;
                }
                score[c] *= (match + 1.0) / (total + static_cast<double>(num_values));
            }
        } else {
            for (std::size_t c = 0; c < num_classes; ++c) {
                std::vector<double> vals;
                for (std::size_t i = 0; i < train.size(); ++i)
                    if (train.class_of(i) == c && !dbd::is_missing(train[i][a]))
                        vals.push_back(train[i][a]);
                if (vals.empty()) continue;
                double mean = 0;
                for (double v : vals) mean += v;
                mean /= static_cast<double>(vals.size());
                double var = 0;
                for (double v : vals) var += (v - mean) * (v - mean);
                double sd = vals.size() >= 2
                                ? std::sqrt(var / (static_cast<double>(vals.size()) - 1.0))
                                : 0.0;
                sd = std::max(sd, 1e-3);
                double z = (x[a] - mean) / sd;
                score[c] *= std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
            }
        }
    }
    double total = 0;
    for (double s : score) total += s;
    for (double& s : score) s /= total;
    return score;
}

// dotted-quad check by splitting, written without the library's scanner
inline bool ipv4_literal(const std::string& host) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : host) {
        if (c == '.') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4) return false;
    for (const auto& p : parts) {
        if (p.empty() || p.size() > 3) return false;
        for (char c : p)
            if (c < '0' || c > '9') return false;
        if (std::stoi(p) > 255) return false;
    }
    return true;
}

// --- random dataset generation -------------------------------------------

struct GenOptions {
    std::size_t min_instances = 2;
    std::size_t max_instances = 12;
    std::size_t max_attributes = 4;
    double missing_rate = 0.1;
    bool require_both_classes = false;
};

inline dbd::Dataset random_dataset(std::mt19937_64& rng, const GenOptions& opt = {}) {
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
    };
    std::size_t num_attrs = pick(1, opt.max_attributes);
    std::size_t n = pick(opt.min_instances, opt.max_instances);

    std::vector<dbd::AttributeSpec> attrs;
    for (std::size_t a = 0; a < num_attrs; ++a) {
        std::string name = "a" + std::to_string(a);
        switch (rng() % 4) {
        case 0: attrs.push_back(dbd::AttributeSpec::numeric(name)); break;
        case 1: attrs.push_back(dbd::AttributeSpec::numeric(name)); break; // int-valued
        case 2: {
            std::size_t k = pick(2, 3);
            std::vector<std::string> values;
            for (std::size_t v = 0; v < k; ++v) values.push_back("v" + std::to_string(v));
            attrs.push_back(dbd::AttributeSpec::nominal(name, values));
            break;
        }
        default: attrs.push_back(dbd::AttributeSpec::boolean(name)); break;
        }
    }
    std::vector<bool> int_valued(num_attrs);
    for (std::size_t a = 0; a < num_attrs; ++a) int_valued[a] = rng() % 2 == 0;
    attrs.push_back(dbd::AttributeSpec::nominal("class", {"malicious", "benign"}));

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (true) {
        std::vector<dbd::Instance> rows;
        for (std::size_t i = 0; i < n; ++i) {
            dbd::Instance inst(num_attrs + 1, dbd::kMissing);
            for (std::size_t a = 0; a < num_attrs; ++a) {
                if (unit(rng) < opt.missing_rate) continue;
                if (attrs[a].kind == dbd::AttrKind::Numeric)
                    inst[a] = int_valued[a] ? static_cast<double>(rng() % 5)
                                            : std::round(unit(rng) * 1000) / 100.0;
                else
                    inst[a] = static_cast<double>(rng() % attrs[a].domain().size());
            }
            inst[num_attrs] = static_cast<double>(rng() % 2);
            rows.push_back(std::move(inst));
        }
        dbd::Dataset d(dbd::Schema(attrs, num_attrs), std::move(rows));
        if (!opt.require_both_classes) return d;
        auto counts = d.class_counts();
        if (counts[0] > 0 && counts[1] > 0) return d;
    }
}

// Pairwise-distinct instances labeled by a function of their cells, so
// no two identical instances carry different labels. One continuous
// column keeps every node splittable.
inline dbd::Dataset random_consistent_dataset(std::mt19937_64& rng, std::size_t max_instances) {
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
    };
    std::size_t extra_attrs = pick(1, 3);
    std::vector<dbd::AttributeSpec> attrs;
    attrs.push_back(dbd::AttributeSpec::numeric("x0"));
    for (std::size_t a = 0; a < extra_attrs; ++a) {
        std::string name = "x" + std::to_string(a + 1);
        if (rng() % 2 == 0)
            attrs.push_back(dbd::AttributeSpec::numeric(name));
        else
            attrs.push_back(dbd::AttributeSpec::nominal(name, {"p", "q", "r"}));
    }
    std::size_t class_idx = attrs.size();
    attrs.push_back(dbd::AttributeSpec::nominal("class", {"malicious", "benign"}));

    std::size_t n = pick(4, max_instances);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<dbd::Instance> rows;
    std::set<std::vector<long long>> seen;
    while (rows.size() < n) {
        dbd::Instance inst(attrs.size(), 0.0);
        std::vector<long long> key;
        for (std::size_t a = 0; a < class_idx; ++a) {
            if (attrs[a].kind == dbd::AttrKind::Numeric) {
                inst[a] = a == 0 ? unit(rng) * 1e6 : static_cast<double>(rng() % 6);
            } else {
                inst[a] = static_cast<double>(rng() % 3);
            }
            key.push_back(static_cast<long long>(inst[a] * 4096));
        }
        if (!seen.insert(key).second) continue;
        long long h = 1469598103934665603LL;
        for (long long v : key) h = (h ^ v) * 1099511628211LL;
        inst[class_idx] = static_cast<double>((h >> 7) & 1);
        rows.push_back(std::move(inst));
    }
    return dbd::Dataset(dbd::Schema(std::move(attrs), class_idx), std::move(rows));
}

} // namespace oracle
