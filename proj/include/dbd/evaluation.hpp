#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dbd/classifier.hpp"
#include "dbd/dataset.hpp"
#include "dbd/decision_tree.hpp"
#include "dbd/model.hpp"
#include "dbd/naive_bayes.hpp"
#include "dbd/ripper.hpp"

namespace dbd {

/// 2x2 counts with malicious as the positive class; rows are actual,
/// columns predicted.
struct ConfusionMatrix {
    double tp = 0;
    double fn = 0;
    double fp = 0;
    double tn = 0;

    double total() const { return tp + fn + fp + tn; }
    double accuracy() const { return total() > 0 ? (tp + tn) / total() : 0; }

    /// The same tallies with the other class taken as positive.
    ConfusionMatrix swapped() const { return {tn, fp, fn, tp}; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp;
        fn += o.fn;
        fp += o.fp;
        tn += o.tn;
        return *this;
    }
    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(const std::vector<std::size_t>& predicted,
                          const std::vector<std::size_t>& actual, std::size_t positive);

/// Eqs.: TPR=TP/(TP+FN), FPR=FP/(FP+TN), Precision=TP/(TP+FP),
/// Recall=TPR, F=2PR/(P+R), MCC=(TP*TN-FP*FN)/sqrt(prod of margins).
/// A zero denominator yields NaN (distinctly undefined), except MCC
/// which is 0 by convention.
double tpr(const ConfusionMatrix& cm);
double fpr(const ConfusionMatrix& cm);
double precision(const ConfusionMatrix& cm);
double recall(const ConfusionMatrix& cm);
double f_measure(const ConfusionMatrix& cm);
double mcc(const ConfusionMatrix& cm);

/// Mann-Whitney statistic: share of (positive, negative) pairs ranked
/// correctly, ties at half weight. NaN when a class is absent.
double roc_area(const std::vector<double>& scores, const std::vector<bool>& is_positive);

/// Area under the precision-recall curve, summing precision * delta
/// recall at each distinct threshold descending (step-wise, no
/// interpolation). NaN without positives.
double prc_area(const std::vector<double>& scores, const std::vector<bool>& is_positive);

struct MetricRow {
    double tpr = 0;
    double fpr = 0;
    double precision = 0;
    double recall = 0;
    double f_measure = 0;
    double mcc = 0;
    double roc_area = 0;
    double prc_area = 0;
};

MetricRow metric_row(const ConfusionMatrix& cm, double roc, double prc);

/// Support-weighted mean per metric; NaN entries are excluded and the
/// weights renormalized.
MetricRow weighted_average(const std::vector<MetricRow>& rows,
                           const std::vector<double>& supports);

using PredictFn = std::function<ClassDistribution(const Instance&)>;
using LearnerFn = std::function<PredictFn(const Dataset&)>;

struct LearnerSpec {
    LearnerKind kind = LearnerKind::NaiveBayes;
    C45Params c45;
    RipperParams ripper;
};

LearnerFn make_learner(const LearnerSpec& spec);

struct EvaluationReport {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::string positive_name;
    std::string negative_name;
    double positive_support = 0;
    double negative_support = 0;
    ConfusionMatrix pooled;
    std::vector<ConfusionMatrix> fold_matrices;
    std::vector<double> fold_accuracies;
    double mean_fold_accuracy = 0;
    MetricRow positive_row;
    MetricRow negative_row;
    MetricRow weighted_row;

    double pooled_accuracy() const { return pooled.accuracy(); }
};

/// Stratified k-fold cross-validation. Each fold is held out once; the
/// held-out predictions are pooled into one matrix and one score list,
/// from which every metric derives. Deterministic per seed.
EvaluationReport cross_validate(const Dataset& d, const LearnerFn& learner, std::size_t k,
                                std::uint64_t seed);

/// Human-readable table in the Malware/Benign/Average layout,
/// percentages to 2 decimals, NaN for undefined entries.
void report_table(const EvaluationReport& report, std::ostream& out);

/// Machine-readable `metric,class,value` rows. `metric_prefix` is
/// prepended to metric names (used when several learners share a file).
void report_csv(const EvaluationReport& report, std::ostream& out,
                const std::string& metric_prefix = "");

void confusion_table(const ConfusionMatrix& cm, const std::string& positive_name,
                     const std::string& negative_name, std::ostream& out);

} // namespace dbd
