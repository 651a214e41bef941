#include "dbd/naive_bayes.hpp"

#include <algorithm>
#include <cmath>

#include "dbd/error.hpp"

namespace dbd {

NBModel fit_naive_bayes(const Dataset& d) {
    const auto& schema = d.schema();
    const std::size_t num_classes = schema.num_classes();
    const auto class_counts = d.class_counts();
    for (std::size_t c = 0; c < num_classes; ++c)
        if (class_counts[c] == 0)
            throw InvalidArgument("class \"" + schema.class_attribute().values[c] +
                                  "\" is absent from the training data");

    NBModel m;
    m.priors.resize(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c)
        m.priors[c] = (static_cast<double>(class_counts[c]) + 1.0) /
                      (static_cast<double>(d.size()) + static_cast<double>(num_classes));

    m.attributes.resize(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (a == schema.class_index()) continue;
        auto& am = m.attributes[a];
        const auto& spec = schema[a];
        am.discrete = spec.discrete();
        if (am.discrete) {
            const std::size_t num_values = spec.domain().size();
            std::vector<std::vector<double>> counts(num_classes,
                                                    std::vector<double>(num_values, 0));
            std::vector<double> totals(num_classes, 0);
            for (std::size_t i = 0; i < d.size(); ++i) {
                double v = d[i][a];
                if (is_missing(v)) continue;
                counts[d.class_of(i)][static_cast<std::size_t>(v)] += 1;
                totals[d.class_of(i)] += 1;
            }
            am.frequencies.assign(num_classes, std::vector<double>(num_values, 0));
            for (std::size_t c = 0; c < num_classes; ++c)
                for (std::size_t v = 0; v < num_values; ++v)
                    am.frequencies[c][v] = (counts[c][v] + 1.0) /
                                           (totals[c] + static_cast<double>(num_values));
        } else {
            am.gaussians.assign(num_classes, {});
            std::vector<double> sums(num_classes, 0);
            std::vector<double> ns(num_classes, 0);
            for (std::size_t i = 0; i < d.size(); ++i) {
                double v = d[i][a];
                if (is_missing(v)) continue;
                sums[d.class_of(i)] += v;
                ns[d.class_of(i)] += 1;
            }
            std::vector<double> sq(num_classes, 0);
            for (std::size_t i = 0; i < d.size(); ++i) {
                double v = d[i][a];
                if (is_missing(v)) continue;
                std::size_t c = d.class_of(i);
                double delta = v - sums[c] / ns[c];
                sq[c] += delta * delta;
            }
            for (std::size_t c = 0; c < num_classes; ++c) {
                if (ns[c] <= 0) continue;
                auto& g = am.gaussians[c];
                g.present = true;
                g.mean = sums[c] / ns[c];
                double variance = ns[c] >= 2 ? sq[c] / (ns[c] - 1) : 0.0;
                g.stddev = std::max(std::sqrt(variance), NBModel::kStddevFloor);
            }
        }
    }
    return m;
}

ClassDistribution nb_predict(const NBModel& m, const Schema& schema, const Instance& x) {
    const std::size_t num_classes = m.priors.size();
    std::vector<double> log_scores(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) log_scores[c] = std::log(m.priors[c]);

    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (a == schema.class_index()) continue;
        double v = x[a];
        if (is_missing(v)) continue;
        const auto& am = m.attributes[a];
        if (am.discrete) {
            auto idx = static_cast<std::size_t>(v);
            for (std::size_t c = 0; c < num_classes; ++c)
                log_scores[c] += std::log(am.frequencies[c][idx]);
        } else {
            for (std::size_t c = 0; c < num_classes; ++c) {
                const auto& g = am.gaussians[c];
                if (!g.present) continue; // no evidence for this class; term skipped
                double z = (v - g.mean) / g.stddev;
                log_scores[c] += -0.5 * z * z - std::log(g.stddev) -
                                 0.5 * std::log(2.0 * M_PI);
            }
        }
    }

    double max_log = *std::max_element(log_scores.begin(), log_scores.end());
    ClassDistribution dist;
    dist.probabilities.resize(num_classes);
    double total = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        dist.probabilities[c] = std::exp(log_scores[c] - max_log);
        total += dist.probabilities[c];
    }
    for (auto& p : dist.probabilities) p /= total;
    return dist;
}

} // namespace dbd
