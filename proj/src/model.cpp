#include "dbd/model.hpp"

#include <json.hpp>

#include "dbd/error.hpp"
#include "dbd/util.hpp"

namespace dbd {

using nlohmann::json;

namespace {
constexpr std::string_view kHeaderPrefix = "dbd-model";
constexpr std::string_view kVersionToken = "v1";
} // namespace

std::string_view learner_kind_name(LearnerKind kind) {
    switch (kind) {
    case LearnerKind::NaiveBayes: return "nb";
    case LearnerKind::Ripper: return "jrip";
    case LearnerKind::C45: return "j48";
    }
    return "nb";
}

std::optional<LearnerKind> learner_kind_from(std::string_view name) {
    if (name == "nb") return LearnerKind::NaiveBayes;
    if (name == "jrip") return LearnerKind::Ripper;
    if (name == "j48") return LearnerKind::C45;
    return std::nullopt;
}

TrainedModel::TrainedModel(Schema schema, NBModel model)
    : schema_(std::move(schema)), fingerprint_(schema_.fingerprint()), model_(std::move(model)) {}

TrainedModel::TrainedModel(Schema schema, DecisionTree model)
    : schema_(std::move(schema)), fingerprint_(schema_.fingerprint()), model_(std::move(model)) {}

TrainedModel::TrainedModel(Schema schema, RuleSet model)
    : schema_(std::move(schema)), fingerprint_(schema_.fingerprint()), model_(std::move(model)) {}

LearnerKind TrainedModel::kind() const {
    if (std::holds_alternative<NBModel>(model_)) return LearnerKind::NaiveBayes;
    if (std::holds_alternative<RuleSet>(model_)) return LearnerKind::Ripper;
    return LearnerKind::C45;
}

ClassDistribution TrainedModel::predict(const Instance& x) const {
    if (x.size() != schema_.size())
        throw SchemaMismatch("instance has " + std::to_string(x.size()) +
                             " cells, model schema has " + std::to_string(schema_.size()));
    if (const auto* nb = naive_bayes()) return nb_predict(*nb, schema_, x);
    if (const auto* rs = rules()) return ripper_predict(*rs, schema_, x);
    return tree_predict(*tree(), schema_, x);
}

ClassDistribution TrainedModel::predict(const Schema& instance_schema, const Instance& x) const {
    if (instance_schema.fingerprint() != fingerprint_)
        throw SchemaMismatch("model/feature schema mismatch");
    return predict(x);
}

std::size_t TrainedModel::predict_class(const Instance& x) const {
    return predict(x).argmax(positive_class_index(schema_));
}

namespace {

json schema_to_json(const Schema& schema) {
    json attrs = json::array();
    for (const auto& a : schema.attributes()) {
        json j;
        j["name"] = a.name;
        switch (a.kind) {
        case AttrKind::Numeric: j["kind"] = "numeric"; break;
        case AttrKind::Nominal:
            j["kind"] = "nominal";
            j["values"] = a.values;
            break;
        case AttrKind::Boolean: j["kind"] = "boolean"; break;
        }
        attrs.push_back(std::move(j));
    }
    return json{{"attributes", std::move(attrs)}, {"class_index", schema.class_index()}};
}

Schema schema_from_json(const json& j) {
    std::vector<AttributeSpec> attrs;
    for (const auto& a : j.at("attributes")) {
        std::string kind = a.at("kind");
        std::string name = a.at("name");
        if (kind == "numeric")
            attrs.push_back(AttributeSpec::numeric(std::move(name)));
        else if (kind == "boolean")
            attrs.push_back(AttributeSpec::boolean(std::move(name)));
        else if (kind == "nominal")
            attrs.push_back(AttributeSpec::nominal(std::move(name),
                                                   a.at("values").get<std::vector<std::string>>()));
        else
            throw ParseError("unknown attribute kind \"" + kind + "\" in field attributes");
    }
    return Schema(std::move(attrs), j.at("class_index").get<std::size_t>());
}

json nb_to_json(const NBModel& m) {
    json attrs = json::array();
    for (const auto& am : m.attributes) {
        json j;
        j["discrete"] = am.discrete;
        if (am.discrete) {
            j["frequencies"] = am.frequencies;
        } else {
            json gs = json::array();
            for (const auto& g : am.gaussians)
                gs.push_back(json{{"mean", g.mean}, {"stddev", g.stddev}, {"present", g.present}});
            j["gaussians"] = std::move(gs);
        }
        attrs.push_back(std::move(j));
    }
    return json{{"priors", m.priors}, {"attributes", std::move(attrs)}};
}

NBModel nb_from_json(const json& j) {
    NBModel m;
    m.priors = j.at("priors").get<std::vector<double>>();
    for (const auto& a : j.at("attributes")) {
        NBModel::AttributeModel am;
        am.discrete = a.at("discrete").get<bool>();
        if (am.discrete) {
            am.frequencies = a.at("frequencies").get<std::vector<std::vector<double>>>();
        } else if (a.contains("gaussians")) {
            for (const auto& g : a.at("gaussians")) {
                NBModel::Gaussian gauss;
                gauss.mean = g.at("mean").get<double>();
                gauss.stddev = g.at("stddev").get<double>();
                gauss.present = g.at("present").get<bool>();
                am.gaussians.push_back(gauss);
            }
        }
        m.attributes.push_back(std::move(am));
    }
    return m;
}

json node_to_json(const TreeNode& node) {
    json j;
    j["counts"] = node.class_counts;
    j["reach"] = node.reach;
    j["majority"] = node.majority;
    if (!node.is_leaf()) {
        j["attribute"] = node.attribute;
        j["threshold"] = node.threshold;
        json children = json::array();
        for (const auto& c : node.children) children.push_back(node_to_json(c));
        j["children"] = std::move(children);
    }
    return j;
}

TreeNode node_from_json(const json& j) {
    TreeNode node;
    node.class_counts = j.at("counts").get<std::vector<double>>();
    node.reach = j.at("reach").get<double>();
    node.majority = j.at("majority").get<std::size_t>();
    if (j.contains("children")) {
        node.attribute = j.at("attribute").get<int>();
        node.threshold = j.at("threshold").get<double>();
        for (const auto& c : j.at("children")) node.children.push_back(node_from_json(c));
    }
    return node;
}

json tree_to_json(const DecisionTree& t) {
    return json{{"confidence_factor", t.params.confidence_factor},
                {"min_leaf", t.params.min_leaf},
                {"pruned", t.params.prune},
                {"root", node_to_json(t.root)}};
}

DecisionTree tree_from_json(const json& j) {
    DecisionTree t;
    t.params.confidence_factor = j.at("confidence_factor").get<double>();
    t.params.min_leaf = j.at("min_leaf").get<double>();
    t.params.prune = j.at("pruned").get<bool>();
    t.root = node_from_json(j.at("root"));
    return t;
}

json rules_to_json(const RuleSet& rs) {
    json rules = json::array();
    for (const auto& r : rs.rules) {
        json conds = json::array();
        for (const auto& c : r.conditions) {
            const char* op = c.op == RuleCondition::Op::Eq   ? "eq"
                             : c.op == RuleCondition::Op::Le ? "le"
                                                             : "ge";
            conds.push_back(json{{"attribute", c.attribute}, {"op", op}, {"value", c.value}});
        }
        rules.push_back(json{{"conditions", std::move(conds)},
                             {"train_positive", r.train_positive},
                             {"train_negative", r.train_negative},
                             {"prune_positive", r.prune_positive},
                             {"prune_negative", r.prune_negative}});
    }
    return json{{"rules", std::move(rules)},
                {"positive_class", rs.positive_class},
                {"default_class", rs.default_class},
                {"default_positive", rs.default_positive},
                {"default_negative", rs.default_negative},
                {"num_classes", rs.num_classes}};
}

RuleSet rules_from_json(const json& j) {
    RuleSet rs;
    rs.positive_class = j.at("positive_class").get<std::size_t>();
    rs.default_class = j.at("default_class").get<std::size_t>();
    rs.default_positive = j.at("default_positive").get<double>();
    rs.default_negative = j.at("default_negative").get<double>();
    rs.num_classes = j.at("num_classes").get<std::size_t>();
    for (const auto& rj : j.at("rules")) {
        Rule r;
        for (const auto& cj : rj.at("conditions")) {
            RuleCondition c;
            c.attribute = cj.at("attribute").get<std::size_t>();
            std::string op = cj.at("op");
            if (op == "eq")
                c.op = RuleCondition::Op::Eq;
            else if (op == "le")
                c.op = RuleCondition::Op::Le;
            else if (op == "ge")
                c.op = RuleCondition::Op::Ge;
            else
                throw ParseError("unknown rule operator \"" + op + "\" in field rules");
            c.value = cj.at("value").get<double>();
            r.conditions.push_back(c);
        }
        r.train_positive = rj.at("train_positive").get<double>();
        r.train_negative = rj.at("train_negative").get<double>();
        r.prune_positive = rj.at("prune_positive").get<double>();
        r.prune_negative = rj.at("prune_negative").get<double>();
        rs.rules.push_back(std::move(r));
    }
    return rs;
}

} // namespace

std::string serialize_model(const TrainedModel& m) {
    json body;
    body["version"] = "1";
    body["kind"] = std::string(learner_kind_name(m.kind()));
    body["schema"] = schema_to_json(m.schema());
    if (const auto* nb = m.naive_bayes())
        body["model"] = nb_to_json(*nb);
    else if (const auto* rs = m.rules())
        body["model"] = rules_to_json(*rs);
    else
        body["model"] = tree_to_json(*m.tree());

    std::string out(kHeaderPrefix);
    out += ' ';
    out += kVersionToken;
    out += ' ';
    out += learner_kind_name(m.kind());
    out += '\n';
    out += body.dump(2);
    out += '\n';
    return out;
}

TrainedModel deserialize_model(const std::string& text) {
    auto eol = text.find('\n');
    if (eol == std::string::npos) throw ParseError("truncated model document: missing header");
    std::string_view header(text.data(), eol);

    auto tokens = split(header, ' ');
    if (tokens.size() != 3 || tokens[0] != kHeaderPrefix)
        throw ParseError("not a model document (expected \"dbd-model v1 <kind>\" header)");
    if (tokens[1] != kVersionToken)
        throw ParseError("unsupported version \"" + tokens[1] + "\"");
    auto kind = learner_kind_from(tokens[2]);
    if (!kind) throw ParseError("unknown model kind \"" + tokens[2] + "\"");

    json body;
    try {
        body = json::parse(text.substr(eol + 1));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model document: ") + e.what());
    }

    try {
        if (body.at("version").get<std::string>() != "1")
            throw ParseError("unsupported version \"" + body.at("version").get<std::string>() +
                             "\" in field version");
        if (body.at("kind").get<std::string>() != learner_kind_name(*kind))
            throw ParseError("header kind does not match field kind");
        Schema schema = schema_from_json(body.at("schema"));
        const json& model = body.at("model");
        switch (*kind) {
        case LearnerKind::NaiveBayes: return TrainedModel(std::move(schema), nb_from_json(model));
        case LearnerKind::Ripper: return TrainedModel(std::move(schema), rules_from_json(model));
        case LearnerKind::C45: return TrainedModel(std::move(schema), tree_from_json(model));
        }
        throw ParseError("unknown model kind");
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model document: ") + e.what());
    }
}

} // namespace dbd
