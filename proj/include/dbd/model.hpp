#pragma once

#include <string>
#include <variant>

#include "dbd/classifier.hpp"
#include "dbd/dataset.hpp"
#include "dbd/decision_tree.hpp"
#include "dbd/naive_bayes.hpp"
#include "dbd/ripper.hpp"

namespace dbd {

enum class LearnerKind { NaiveBayes, Ripper, C45 };

std::string_view learner_kind_name(LearnerKind kind); // "nb", "jrip", "j48"
std::optional<LearnerKind> learner_kind_from(std::string_view name);

/// A trained classifier bound to the schema it was trained on.
class TrainedModel {
public:
    TrainedModel(Schema schema, NBModel model);
    TrainedModel(Schema schema, DecisionTree model);
    TrainedModel(Schema schema, RuleSet model);

    LearnerKind kind() const;
    const Schema& schema() const { return schema_; }
    const std::string& fingerprint() const { return fingerprint_; }

    /// Posterior for an instance laid out per this model's schema.
    ClassDistribution predict(const Instance& x) const;

    /// Same, but first rejects instances from a different schema.
    ClassDistribution predict(const Schema& instance_schema, const Instance& x) const;

    /// Argmax label with ties toward the positive class.
    std::size_t predict_class(const Instance& x) const;

    const NBModel* naive_bayes() const { return std::get_if<NBModel>(&model_); }
    const DecisionTree* tree() const { return std::get_if<DecisionTree>(&model_); }
    const RuleSet* rules() const { return std::get_if<RuleSet>(&model_); }

private:
    Schema schema_;
    std::string fingerprint_;
    std::variant<NBModel, DecisionTree, RuleSet> model_;
};

/// Versioned human-readable model document: a `dbd-model v1 <kind>`
/// header line followed by a JSON body. Round-trips reproduce
/// predictions bit for bit.
std::string serialize_model(const TrainedModel& m);
TrainedModel deserialize_model(const std::string& text);

} // namespace dbd
