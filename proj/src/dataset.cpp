#include "dbd/dataset.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "dbd/util.hpp"

namespace dbd {

namespace {
const std::vector<std::string> kBoolDomain = {"false", "true"};
}

AttributeSpec AttributeSpec::numeric(std::string name) {
    return {std::move(name), AttrKind::Numeric, {}};
}

AttributeSpec AttributeSpec::nominal(std::string name, std::vector<std::string> values) {
    return {std::move(name), AttrKind::Nominal, std::move(values)};
}

AttributeSpec AttributeSpec::boolean(std::string name) {
    return {std::move(name), AttrKind::Boolean, {}};
}

const std::vector<std::string>& AttributeSpec::domain() const {
    return kind == AttrKind::Boolean ? kBoolDomain : values;
}

std::optional<std::size_t> AttributeSpec::value_index(std::string_view v) const {
    const auto& dom = domain();
    for (std::size_t i = 0; i < dom.size(); ++i)
        if (dom[i] == v) return i;
    return std::nullopt;
}

Schema::Schema(std::vector<AttributeSpec> attributes, std::size_t class_index)
    : attributes_(std::move(attributes)), class_index_(class_index) {
    if (attributes_.empty()) throw InvalidArgument("schema has no attributes");
    std::unordered_set<std::string> names;
    for (const auto& a : attributes_) {
        if (a.name.empty()) throw InvalidArgument("attribute name is empty");
        if (!names.insert(a.name).second)
            throw InvalidArgument("duplicate attribute name \"" + a.name + "\"");
        if (a.kind == AttrKind::Nominal) {
            if (a.values.empty())
                throw InvalidArgument("nominal attribute \"" + a.name + "\" has no values");
            std::unordered_set<std::string> vals;
            for (const auto& v : a.values)
                if (!vals.insert(v).second)
                    throw InvalidArgument("duplicate value \"" + v + "\" in attribute \"" +
                                          a.name + "\"");
        } else if (!a.values.empty()) {
            throw InvalidArgument("attribute \"" + a.name + "\" is not nominal but lists values");
        }
    }
    if (class_index_ >= attributes_.size())
        throw InvalidArgument("class attribute index out of range");
    if (attributes_[class_index_].kind != AttrKind::Nominal)
        throw InvalidArgument("class attribute must be nominal");
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
        if (attributes_[i].name == name) return i;
    return std::nullopt;
}

std::string Schema::fingerprint() const {
    std::string canon;
    for (const auto& a : attributes_) {
        canon += a.name;
        canon += '|';
        if (a.kind == AttrKind::Numeric) {
            canon += "numeric";
        } else {
            canon += "nominal(";
            const auto& dom = a.domain();
            for (std::size_t i = 0; i < dom.size(); ++i) {
                if (i) canon += ',';
                canon += dom[i];
            }
            canon += ')';
        }
        canon += ';';
    }
    canon += "class=" + std::to_string(class_index_);
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon)));
    return std::string(buf);
}

namespace {

void validate_cell(const AttributeSpec& attr, double v) {
    if (is_missing(v)) return;
    if (attr.kind == AttrKind::Numeric) return;
    double r = std::round(v);
    if (r != v || v < 0 || static_cast<std::size_t>(r) >= attr.domain().size())
        throw InvalidArgument("cell value " + format_double(v) +
                              " is not a valid index for attribute \"" + attr.name + "\"");
}

} // namespace

Dataset::Dataset(Schema schema, std::vector<Instance> instances)
    : schema_(std::move(schema)), rows_(std::move(instances)) {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const auto& row = rows_[r];
        if (row.size() != schema_.size())
            throw InvalidArgument("instance " + std::to_string(r) + " has " +
                                  std::to_string(row.size()) + " cells, schema has " +
                                  std::to_string(schema_.size()));
        for (std::size_t a = 0; a < row.size(); ++a) validate_cell(schema_[a], row[a]);
        if (is_missing(row[schema_.class_index()]))
            throw InvalidArgument("instance " + std::to_string(r) + " has a missing class");
    }
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(schema_.num_classes(), 0);
    for (std::size_t i = 0; i < size(); ++i) counts[class_of(i)]++;
    return counts;
}

std::size_t positive_class_index(const Schema& schema) {
    const auto& values = schema.class_attribute().values;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] == "malicious") return i;
    return 0;
}

FoldAssignment stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("fold count must be at least 2");
    if (k > dataset.size())
        throw InvalidArgument("fold count " + std::to_string(k) + " exceeds instance count " +
                              std::to_string(dataset.size()));

    std::vector<std::vector<std::size_t>> by_class(dataset.schema().num_classes());
    for (std::size_t i = 0; i < dataset.size(); ++i) by_class[dataset.class_of(i)].push_back(i);

    std::mt19937_64 rng(seed);
    FoldAssignment out;
    out.k = k;
    out.seed = seed;
    out.fold_of.assign(dataset.size(), 0);
    for (auto& group : by_class) {
        seeded_shuffle(group, rng);
        for (std::size_t p = 0; p < group.size(); ++p) out.fold_of[group[p]] = p % k;
    }
    return out;
}

} // namespace dbd
