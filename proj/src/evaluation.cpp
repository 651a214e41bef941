#include "dbd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "dbd/error.hpp"

namespace dbd {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

ConfusionMatrix confusion(const std::vector<std::size_t>& predicted,
                          const std::vector<std::size_t>& actual, std::size_t positive) {
    if (predicted.size() != actual.size())
        throw InvalidArgument("predicted and actual label lists differ in length");
    if (predicted.empty()) throw InvalidArgument("no labels to tally");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        bool actual_pos = actual[i] == positive;
        bool predicted_pos = predicted[i] == positive;
        if (actual_pos)
            (predicted_pos ? cm.tp : cm.fn) += 1;
        else
            (predicted_pos ? cm.fp : cm.tn) += 1;
    }
    return cm;
}

double tpr(const ConfusionMatrix& cm) { return cm.tp + cm.fn > 0 ? cm.tp / (cm.tp + cm.fn) : kNaN; }

double fpr(const ConfusionMatrix& cm) { return cm.fp + cm.tn > 0 ? cm.fp / (cm.fp + cm.tn) : kNaN; }

double precision(const ConfusionMatrix& cm) {
    return cm.tp + cm.fp > 0 ? cm.tp / (cm.tp + cm.fp) : kNaN;
}

double recall(const ConfusionMatrix& cm) { return tpr(cm); }

double f_measure(const ConfusionMatrix& cm) {
    double p = precision(cm);
    double r = recall(cm);
    if (std::isnan(p) || std::isnan(r) || p + r <= 0) return kNaN;
    return 2 * p * r / (p + r);
}

double mcc(const ConfusionMatrix& cm) {
    double denom = (cm.tp + cm.fp) * (cm.tp + cm.fn) * (cm.tn + cm.fp) * (cm.tn + cm.fn);
    if (denom <= 0) return 0.0; // convention: undefined MCC reports 0
    return (cm.tp * cm.tn - cm.fp * cm.fn) / std::sqrt(denom);
}

double roc_area(const std::vector<double>& scores, const std::vector<bool>& is_positive) {
    if (scores.size() != is_positive.size())
        throw InvalidArgument("scores and labels differ in length");
    std::size_t npos = 0, nneg = 0;
    for (bool b : is_positive) (b ? npos : nneg) += 1;
    if (npos == 0 || nneg == 0) return kNaN;

    // midrank-based Mann-Whitney
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t)
            if (is_positive[order[t]]) rank_sum_pos += midrank;
        i = j;
    }
    double u = rank_sum_pos - static_cast<double>(npos) * (static_cast<double>(npos) + 1) / 2.0;
    return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

double prc_area(const std::vector<double>& scores, const std::vector<bool>& is_positive) {
    if (scores.size() != is_positive.size())
        throw InvalidArgument("scores and labels differ in length");
    std::size_t npos = 0;
    for (bool b : is_positive) npos += b ? 1 : 0;
    if (npos == 0) return kNaN;

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    double area = 0;
    double prev_recall = 0;
    double tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        for (std::size_t t = i; t < j; ++t) (is_positive[order[t]] ? tp : fp) += 1;
        double rec = tp / static_cast<double>(npos);
        double prec = tp + fp > 0 ? tp / (tp + fp) : 0;
        area += prec * (rec - prev_recall);
        prev_recall = rec;
        i = j;
    }
    return area;
}

MetricRow metric_row(const ConfusionMatrix& cm, double roc, double prc) {
    MetricRow row;
    row.tpr = tpr(cm);
    row.fpr = fpr(cm);
    row.precision = precision(cm);
    row.recall = recall(cm);
    row.f_measure = f_measure(cm);
    row.mcc = mcc(cm);
    row.roc_area = roc;
    row.prc_area = prc;
    return row;
}

namespace {

double weighted_entry(const std::vector<double>& values, const std::vector<double>& supports) {
    double acc = 0, weight = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i])) continue;
        acc += values[i] * supports[i];
        weight += supports[i];
    }
    return weight > 0 ? acc / weight : kNaN;
}

} // namespace

MetricRow weighted_average(const std::vector<MetricRow>& rows,
                           const std::vector<double>& supports) {
    if (rows.size() != supports.size())
        throw InvalidArgument("rows and supports differ in length");
    auto gather = [&](double MetricRow::* field) {
        std::vector<double> values;
        values.reserve(rows.size());
        for (const auto& r : rows) values.push_back(r.*field);
        return weighted_entry(values, supports);
    };
    MetricRow out;
    out.tpr = gather(&MetricRow::tpr);
    out.fpr = gather(&MetricRow::fpr);
    out.precision = gather(&MetricRow::precision);
    out.recall = gather(&MetricRow::recall);
    out.f_measure = gather(&MetricRow::f_measure);
    out.mcc = gather(&MetricRow::mcc);
    out.roc_area = gather(&MetricRow::roc_area);
    out.prc_area = gather(&MetricRow::prc_area);
    return out;
}

LearnerFn make_learner(const LearnerSpec& spec) {
    switch (spec.kind) {
    case LearnerKind::NaiveBayes:
        return [](const Dataset& train) -> PredictFn {
            auto model = fit_naive_bayes(train);
            Schema schema = train.schema();
            return [model = std::move(model), schema = std::move(schema)](const Instance& x) {
                return nb_predict(model, schema, x);
            };
        };
    case LearnerKind::Ripper:
        return [params = spec.ripper](const Dataset& train) -> PredictFn {
            auto model = fit_ripper(train, params);
            Schema schema = train.schema();
            return [model = std::move(model), schema = std::move(schema)](const Instance& x) {
                return ripper_predict(model, schema, x);
            };
        };
    case LearnerKind::C45:
        return [params = spec.c45](const Dataset& train) -> PredictFn {
            auto model = fit_c45(train, params);
            Schema schema = train.schema();
            return [model = std::move(model), schema = std::move(schema)](const Instance& x) {
                return tree_predict(model, schema, x);
            };
        };
    }
    throw InvalidArgument("unknown learner kind");
}

EvaluationReport cross_validate(const Dataset& d, const LearnerFn& learner, std::size_t k,
                                std::uint64_t seed) {
    const auto& schema = d.schema();
    if (schema.num_classes() != 2)
        throw InvalidArgument("evaluation assumes a binary class attribute");
    const std::size_t positive = positive_class_index(schema);
    const std::size_t negative = 1 - positive;

    auto folds = stratified_folds(d, k, seed);

    EvaluationReport report;
    report.k = k;
    report.seed = seed;
    report.positive_name = schema.class_attribute().values[positive];
    report.negative_name = schema.class_attribute().values[negative];

    std::vector<double> scores(d.size(), 0);       // positive-class probability
    std::vector<std::size_t> predicted(d.size(), 0);

    for (std::size_t fold = 0; fold < k; ++fold) {
        std::vector<Instance> train_rows;
        std::vector<std::size_t> test_rows;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (folds.fold_of[i] == fold)
                test_rows.push_back(i);
            else
                train_rows.push_back(d[i]);
        }
        if (test_rows.empty()) {
            report.fold_matrices.push_back({});
            report.fold_accuracies.push_back(kNaN);
            continue;
        }
        Dataset train(schema, std::move(train_rows));
        PredictFn predict = learner(train);

        std::vector<std::size_t> fold_pred, fold_actual;
        for (auto i : test_rows) {
            auto dist = predict(d[i]);
            predicted[i] = dist.argmax(positive);
            scores[i] = dist.probabilities[positive];
            fold_pred.push_back(predicted[i]);
            fold_actual.push_back(d.class_of(i));
        }
        auto cm = confusion(fold_pred, fold_actual, positive);
        report.fold_matrices.push_back(cm);
        report.fold_accuracies.push_back(cm.accuracy());
    }

    std::vector<std::size_t> all_actual;
    all_actual.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) all_actual.push_back(d.class_of(i));
    report.pooled = confusion(predicted, all_actual, positive);

    double acc_sum = 0;
    std::size_t acc_n = 0;
    for (double a : report.fold_accuracies) {
        if (std::isnan(a)) continue;
        acc_sum += a;
        ++acc_n;
    }
    report.mean_fold_accuracy = acc_n > 0 ? acc_sum / static_cast<double>(acc_n) : kNaN;

    std::vector<bool> is_positive(d.size());
    std::vector<bool> is_negative(d.size());
    std::vector<double> negative_scores(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        is_positive[i] = all_actual[i] == positive;
        is_negative[i] = !is_positive[i];
        negative_scores[i] = 1.0 - scores[i];
    }
    report.positive_support = report.pooled.tp + report.pooled.fn;
    report.negative_support = report.pooled.fp + report.pooled.tn;
    report.positive_row = metric_row(report.pooled, roc_area(scores, is_positive),
                                     prc_area(scores, is_positive));
    report.negative_row = metric_row(report.pooled.swapped(),
                                     roc_area(negative_scores, is_negative),
                                     prc_area(negative_scores, is_negative));
    report.weighted_row = weighted_average({report.positive_row, report.negative_row},
                                           {report.positive_support, report.negative_support});
    (void)negative;
    return report;
}

namespace {

std::string percent(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", v * 100.0);
    return buf;
}

std::string fraction(double v) {
    if (std::isnan(v)) return "NaN";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void table_line(std::ostream& out, const std::string& name, double a, double b, double c) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-10s %10s %10s %10s", name.c_str(), percent(a).c_str(),
                  percent(b).c_str(), percent(c).c_str());
    out << buf << '\n';
}

} // namespace

void report_table(const EvaluationReport& report, std::ostream& out) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-10s %10s %10s %10s", "", "Malware", "Benign", "Average");
    out << buf << '\n';
    const auto& p = report.positive_row;
    const auto& n = report.negative_row;
    const auto& w = report.weighted_row;
    table_line(out, "TPR", p.tpr, n.tpr, w.tpr);
    table_line(out, "FPR", p.fpr, n.fpr, w.fpr);
    table_line(out, "Precision", p.precision, n.precision, w.precision);
    table_line(out, "Recall", p.recall, n.recall, w.recall);
    table_line(out, "F-Measure", p.f_measure, n.f_measure, w.f_measure);
    table_line(out, "MCC", p.mcc, n.mcc, w.mcc);
    table_line(out, "ROC Area", p.roc_area, n.roc_area, w.roc_area);
    table_line(out, "PRC Area", p.prc_area, n.prc_area, w.prc_area);
}

void report_csv(const EvaluationReport& report, std::ostream& out,
                const std::string& metric_prefix) {
    auto row = [&](const std::string& metric, const std::string& cls, double v) {
        out << metric_prefix << metric << ',' << cls << ',' << fraction(v) << '\n';
    };
    auto rows = [&](const std::string& metric, double MetricRow::* field) {
        row(metric, report.positive_name, report.positive_row.*field);
        row(metric, report.negative_name, report.negative_row.*field);
        row(metric, "average", report.weighted_row.*field);
    };
    out << "metric,class,value\n";
    rows("tpr", &MetricRow::tpr);
    rows("fpr", &MetricRow::fpr);
    rows("precision", &MetricRow::precision);
    rows("recall", &MetricRow::recall);
    rows("f_measure", &MetricRow::f_measure);
    rows("mcc", &MetricRow::mcc);
    rows("roc_area", &MetricRow::roc_area);
    rows("prc_area", &MetricRow::prc_area);
    row("tp", "pooled", report.pooled.tp);
    row("fn", "pooled", report.pooled.fn);
    row("fp", "pooled", report.pooled.fp);
    row("tn", "pooled", report.pooled.tn);
    row("accuracy", "pooled", report.pooled_accuracy());
    row("accuracy", "mean_of_folds", report.mean_fold_accuracy);
}

void confusion_table(const ConfusionMatrix& cm, const std::string& positive_name,
                     const std::string& negative_name, std::ostream& out) {
    auto a = "a=" + positive_name;
    auto b = "b=" + negative_name;
    char buf[160];
    out << "Confusion matrix (rows actual, columns predicted)\n";
    std::snprintf(buf, sizeof(buf), "%-14s %12s %12s", "", a.c_str(), b.c_str());
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%-14s %12.0f %12.0f", a.c_str(), cm.tp, cm.fn);
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%-14s %12.0f %12.0f", b.c_str(), cm.fp, cm.tn);
    out << buf << '\n';
}

} // namespace dbd
