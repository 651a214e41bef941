#include "dbd/ripper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "dbd/error.hpp"
#include "dbd/util.hpp"

namespace dbd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMdlSlackBits = 64.0;
constexpr double kExpectedFpRate = 0.5;

// -k*log2(p) - (t-k)*log2(1-p): bits to identify k marked items among t.
double subset_dl(double t, double k, double p) {
    double bits = 0;
    if (k > 0) {
        if (p <= 0) return kInf;
        bits += -k * std::log2(std::min(p, 1.0));
    }
    if (t - k > 0) {
        if (p >= 1) return kInf;
        bits += -(t - k) * std::log2(1.0 - std::max(p, 0.0));
    }
    return bits;
}

struct Trainer {
    const Dataset& data;
    const RipperParams& params;
    std::size_t positive;
    std::mt19937_64 rng;
    double total_possible_conditions = 0;

    bool is_positive(std::size_t row) const { return data.class_of(row) == positive; }

    // --- description length ---------------------------------------------

    double theory_dl(const Rule& rule) const {
        double k = static_cast<double>(rule.conditions.size());
        if (k <= 0) return 0;
        double tdl = std::log2(k);
        if (k > 1) tdl += 2.0 * std::log2(std::max(tdl, 1e-12));
        tdl += subset_dl(total_possible_conditions, k, k / total_possible_conditions);
        return 0.5 * tdl; // redundancy factor
    }

    double data_dl(double cover, double uncover, double fp, double fn) const {
        double bits = std::log2(cover + uncover + 1.0);
        double cover_bits = 0, uncover_bits = 0;
        if (cover > uncover) {
            double exp_err = kExpectedFpRate * (fp + fn);
            cover_bits = cover > 0 ? subset_dl(cover, fp, exp_err / cover) : 0;
            uncover_bits = uncover > 0 ? subset_dl(uncover, fn, fn / uncover) : 0;
        } else {
            double exp_err = (1.0 - kExpectedFpRate) * (fp + fn);
            cover_bits = cover > 0 ? subset_dl(cover, fp, fp / cover) : 0;
            uncover_bits = uncover > 0 ? subset_dl(uncover, fn, exp_err / uncover) : 0;
        }
        return bits + cover_bits + uncover_bits;
    }

    double ruleset_dl(const std::vector<Rule>& rules) const {
        double cover = 0, uncover = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            bool covered = false;
            for (const auto& r : rules)
                if (r.matches(data[i])) {
                    covered = true;
                    break;
                }
            if (covered) {
                cover += 1;
                if (!is_positive(i)) fp += 1;
            } else {
                uncover += 1;
                if (is_positive(i)) fn += 1;
            }
        }
        double dl = data_dl(cover, uncover, fp, fn);
        for (const auto& r : rules) dl += theory_dl(r);
        return dl;
    }

    // --- grow / prune ------------------------------------------------------

    // Stratified 2:1 split of `rows`; the prune share is floor(n/k) per class.
    void split_grow_prune(const std::vector<std::size_t>& rows, std::vector<std::size_t>& grow,
                          std::vector<std::size_t>& prune) {
        grow.clear();
        prune.clear();
        std::vector<std::size_t> pos, neg;
        for (auto r : rows) (is_positive(r) ? pos : neg).push_back(r);
        seeded_shuffle(pos, rng);
        seeded_shuffle(neg, rng);
        auto deal = [&](std::vector<std::size_t>& group) {
            std::size_t n_prune = group.size() / params.folds_grow_prune;
            for (std::size_t i = 0; i < group.size(); ++i)
                (i < n_prune ? prune : grow).push_back(group[i]);
        };
        deal(pos);
        deal(neg);
    }

    struct Coverage {
        double p = 0, n = 0;
    };

    Coverage coverage(const Rule& rule, const std::vector<std::size_t>& rows) const {
        Coverage c;
        for (auto r : rows)
            if (rule.matches(data[r])) (is_positive(r) ? c.p : c.n) += 1;
        return c;
    }

    Rule grow_rule(const std::vector<std::size_t>& grow_rows) {
        Rule rule;
        std::vector<std::size_t> covered = grow_rows;
        std::vector<bool> used(data.schema().size(), false);
        grow_conditions(rule, covered, used);
        return rule;
    }

    // Greedy FOIL-gain growth, shared by fresh rules and revisions.
    void grow_conditions(Rule& rule, std::vector<std::size_t>& covered,
                         std::vector<bool>& used) {
        const auto& schema = data.schema();
        for (const auto& c : rule.conditions) used[c.attribute] = true;

        while (true) {
            double P = 0, N = 0;
            for (auto r : covered) (is_positive(r) ? P : N) += 1;
            if (P <= 0 || N <= 0) break; // already pure (or hopeless)
            double base = std::log2(P / (P + N));

            double best_gain = 0;
            RuleCondition best;
            bool found = false;
            auto consider = [&](const RuleCondition& cond) {
                double p = 0, n = 0;
                for (auto r : covered)
                    if (cond.matches(data[r])) (is_positive(r) ? p : n) += 1;
                if (p <= 0) return;
                double gain = p * (std::log2(p / (p + n)) - base);
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best = cond;
                    found = true;
                }
            };

            for (std::size_t a = 0; a < schema.size(); ++a) {
                if (a == schema.class_index() || used[a]) continue;
                if (schema[a].discrete()) {
                    for (std::size_t v = 0; v < schema[a].domain().size(); ++v)
                        consider({a, RuleCondition::Op::Eq, static_cast<double>(v)});
                } else {
                    std::set<double> values;
                    for (auto r : covered) {
                        double v = data[r][a];
                        if (!is_missing(v)) values.insert(v);
                    }
                    for (double v : values) {
                        consider({a, RuleCondition::Op::Le, v});
                        consider({a, RuleCondition::Op::Ge, v});
                    }
                }
            }
            if (!found) break;

            rule.conditions.push_back(best);
            used[best.attribute] = true;
            std::vector<std::size_t> next;
            for (auto r : covered)
                if (best.matches(data[r])) next.push_back(r);
            covered = std::move(next);
        }
    }

    // Keep the condition prefix maximizing (p-n)/(p+n) on the prune set;
    // ties go to the shorter rule.
    void prune_rule(Rule& rule, const std::vector<std::size_t>& prune_rows) const {
        if (rule.conditions.empty() || prune_rows.empty()) return;
        double best_worth = -kInf;
        std::size_t best_len = 1;
        for (std::size_t len = 1; len <= rule.conditions.size(); ++len) {
            Rule prefix;
            prefix.conditions.assign(rule.conditions.begin(),
                                     rule.conditions.begin() + static_cast<long>(len));
            auto c = coverage(prefix, prune_rows);
            double worth = (c.p + c.n) > 0 ? (c.p - c.n) / (c.p + c.n) : -1.0;
            if (worth > best_worth + 1e-12) {
                best_worth = worth;
                best_len = len;
            }
        }
        rule.conditions.resize(best_len);
    }

    // Acceptance bar: prune-set error must stay below 50% (so precision
    // stays above 0.5); an empty prune sample accepts vacuously.
    static bool acceptable(const Coverage& prune_cov) {
        return prune_cov.p + prune_cov.n <= 0 || prune_cov.p > prune_cov.n;
    }

    struct GrownRule {
        Rule rule;
        bool ok = false;
    };

    GrownRule make_rule(const std::vector<std::size_t>& rows) {
        std::vector<std::size_t> grow, prune;
        if (rows.size() >= params.folds_grow_prune) {
            split_grow_prune(rows, grow, prune);
        } else {
            grow = rows;
        }
        bool grow_has_positive = false;
        for (auto r : grow) grow_has_positive = grow_has_positive || is_positive(r);
        if (!grow_has_positive) return {};

        GrownRule out;
        out.rule = grow_rule(grow);
        if (out.rule.conditions.empty()) return {};
        prune_rule(out.rule, prune);
        auto pc = coverage(out.rule, prune);
        out.rule.prune_positive = pc.p;
        out.rule.prune_negative = pc.n;
        if (!acceptable(pc)) return {};
        auto full = coverage(out.rule, rows);
        if (full.p <= 0) return {};
        out.ok = true;
        return out;
    }

    // IREP* coverage loop; appends accepted rules and consumes `remaining`.
    void cover_positives(std::vector<Rule>& rules, std::vector<std::size_t>& remaining,
                         double& min_dl) {
        while (true) {
            bool has_positive = false;
            for (auto r : remaining) has_positive = has_positive || is_positive(r);
            if (!has_positive) break;

            auto grown = make_rule(remaining);
            if (!grown.ok) break;

            rules.push_back(grown.rule);
            double dl = ruleset_dl(rules);
            if (dl > min_dl + kMdlSlackBits) {
                rules.pop_back();
                break;
            }
            min_dl = std::min(min_dl, dl);

            std::vector<std::size_t> next;
            for (auto r : remaining)
                if (!grown.rule.matches(data[r])) next.push_back(r);
            remaining = std::move(next);
        }
    }

    void optimize(std::vector<Rule>& rules) {
        for (std::size_t i = 0; i < rules.size(); ++i) {
            // instances the other rules leave for rule i
            std::vector<std::size_t> base;
            for (std::size_t r = 0; r < data.size(); ++r) {
                bool covered_elsewhere = false;
                for (std::size_t j = 0; j < rules.size(); ++j)
                    if (j != i && rules[j].matches(data[r])) {
                        covered_elsewhere = true;
                        break;
                    }
                if (!covered_elsewhere) base.push_back(r);
            }
            if (base.empty()) continue;

            std::vector<Rule> candidates{rules[i]};

            auto replacement = make_rule(base);
            if (replacement.ok) candidates.push_back(replacement.rule);

            auto revision = revise_rule(rules[i], base);
            if (revision.ok) candidates.push_back(revision.rule);

            double best_dl = kInf;
            std::size_t best = 0;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                std::vector<Rule> trial = rules;
                trial[i] = candidates[c];
                double dl = ruleset_dl(trial);
                if (dl < best_dl - 1e-9) {
                    best_dl = dl;
                    best = c;
                }
            }
            rules[i] = candidates[best];
        }
    }

    GrownRule revise_rule(const Rule& original, const std::vector<std::size_t>& rows) {
        std::vector<std::size_t> grow, prune;
        if (rows.size() >= params.folds_grow_prune) {
            split_grow_prune(rows, grow, prune);
        } else {
            grow = rows;
        }
        GrownRule out;
        out.rule = original;
        std::vector<std::size_t> covered;
        for (auto r : grow)
            if (original.matches(data[r])) covered.push_back(r);
        std::vector<bool> used(data.schema().size(), false);
        grow_conditions(out.rule, covered, used);
        if (out.rule.conditions.empty()) return {};
        prune_rule(out.rule, prune);
        auto pc = coverage(out.rule, prune);
        out.rule.prune_positive = pc.p;
        out.rule.prune_negative = pc.n;
        if (!acceptable(pc)) return {};
        if (coverage(out.rule, rows).p <= 0) return {};
        out.ok = true;
        return out;
    }

    // Decision-list training accuracy of a candidate rule list.
    double list_accuracy(const std::vector<Rule>& rules) const {
        double correct = 0;
        for (std::size_t r = 0; r < data.size(); ++r) {
            bool fired = false;
            for (const auto& rule : rules)
                if (rule.matches(data[r])) {
                    fired = true;
                    break;
                }
            bool predicted_positive = fired;
            if (predicted_positive == is_positive(r)) correct += 1;
        }
        return correct / static_cast<double>(data.size());
    }

    // Drop rules whose removal strictly improves training accuracy, so
    // that every kept rule pulls its weight.
    void cleanup(std::vector<Rule>& rules) const {
        bool changed = true;
        while (changed && !rules.empty()) {
            changed = false;
            double current = list_accuracy(rules);
            double best_acc = current;
            std::size_t best_drop = rules.size();
            for (std::size_t i = 0; i < rules.size(); ++i) {
                std::vector<Rule> trial = rules;
                trial.erase(trial.begin() + static_cast<long>(i));
                double acc = list_accuracy(trial);
                if (acc > best_acc + 1e-12) {
                    best_acc = acc;
                    best_drop = i;
                }
            }
            if (best_drop < rules.size()) {
                rules.erase(rules.begin() + static_cast<long>(best_drop));
                changed = true;
            }
        }
    }
};

} // namespace

RuleSet fit_ripper(const Dataset& d, const RipperParams& params) {
    const auto& schema = d.schema();
    if (schema.num_classes() != 2)
        throw InvalidArgument("ripper requires a binary class attribute");
    if (params.folds_grow_prune < 2)
        throw InvalidArgument("grow/prune folds must be at least 2");
    auto counts = d.class_counts();
    if (counts[0] == 0 || counts[1] == 0)
        throw InvalidArgument("ripper needs both classes in the training data");

    // minority class is the rule class; ties prefer "malicious"
    std::size_t preferred = positive_class_index(schema);
    std::size_t positive;
    if (counts[0] == counts[1])
        positive = preferred;
    else
        positive = counts[0] < counts[1] ? 0 : 1;

    Trainer trainer{d, params, positive, std::mt19937_64(params.seed), 0};
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (a == schema.class_index()) continue;
        if (schema[a].discrete()) {
            trainer.total_possible_conditions += static_cast<double>(schema[a].domain().size());
        } else {
            std::set<double> distinct;
            for (std::size_t i = 0; i < d.size(); ++i)
                if (!is_missing(d[i][a])) distinct.insert(d[i][a]);
            trainer.total_possible_conditions += 2.0 * static_cast<double>(distinct.size());
        }
    }
    trainer.total_possible_conditions = std::max(trainer.total_possible_conditions, 1.0);

    std::vector<Rule> rules;
    std::vector<std::size_t> remaining(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) remaining[i] = i;
    double min_dl = trainer.ruleset_dl(rules);

    trainer.cover_positives(rules, remaining, min_dl);
    for (std::size_t pass = 0; pass < params.optimizations; ++pass) trainer.optimize(rules);

    // mop up positives the optimized rules no longer cover
    std::vector<std::size_t> uncovered;
    for (std::size_t r = 0; r < d.size(); ++r) {
        bool covered = false;
        for (const auto& rule : rules) covered = covered || rule.matches(d[r]);
        if (!covered) uncovered.push_back(r);
    }
    min_dl = trainer.ruleset_dl(rules);
    trainer.cover_positives(rules, uncovered, min_dl);

    trainer.cleanup(rules);

    RuleSet rs;
    rs.rules = std::move(rules);
    rs.positive_class = positive;
    rs.default_class = 1 - positive;
    rs.num_classes = 2;

    // first-match training coverage per rule, remainder to the default
    for (std::size_t r = 0; r < d.size(); ++r) {
        bool fired = false;
        for (auto& rule : rs.rules) {
            if (!rule.matches(d[r])) continue;
            (trainer.is_positive(r) ? rule.train_positive : rule.train_negative) += 1;
            fired = true;
            break;
        }
        if (!fired)
            (trainer.is_positive(r) ? rs.default_positive : rs.default_negative) += 1;
    }
    return rs;
}

ClassDistribution ripper_predict(const RuleSet& rs, const Schema& schema, const Instance& x) {
    (void)schema;
    double p, n;
    bool fired = false;
    p = n = 0;
    for (const auto& rule : rs.rules) {
        if (rule.matches(x)) {
            p = rule.train_positive;
            n = rule.train_negative;
            fired = true;
            break;
        }
    }
    if (!fired) {
        p = rs.default_positive;
        n = rs.default_negative;
    }
    ClassDistribution dist;
    dist.probabilities.assign(rs.num_classes, 0.0);
    double positive_prob = (p + 1.0) / (p + n + 2.0);
    dist.probabilities[rs.positive_class] = positive_prob;
    dist.probabilities[rs.default_class] = 1.0 - positive_prob;
    return dist;
}

std::string ruleset_to_text(const RuleSet& rs, const Schema& schema) {
    std::ostringstream out;
    const auto& class_values = schema.class_attribute().values;
    for (const auto& rule : rs.rules) {
        out << "if";
        for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
            const auto& c = rule.conditions[i];
            const auto& spec = schema[c.attribute];
            out << (i ? " and " : " ") << spec.name;
            switch (c.op) {
            case RuleCondition::Op::Eq:
                out << " = "
                    << (spec.discrete() ? spec.domain()[static_cast<std::size_t>(c.value)]
                                        : format_double(c.value));
                break;
            case RuleCondition::Op::Le: out << " <= " << format_double(c.value); break;
            case RuleCondition::Op::Ge: out << " >= " << format_double(c.value); break;
            }
        }
        out << " then " << class_values[rs.positive_class] << " ("
            << format_double(rule.train_positive) << '/' << format_double(rule.train_negative)
            << ")\n";
    }
    out << "default " << class_values[rs.default_class] << " ("
        << format_double(rs.default_positive) << '/' << format_double(rs.default_negative)
        << ")\n";
    return out.str();
}

} // namespace dbd
