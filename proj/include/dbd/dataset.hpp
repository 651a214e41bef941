#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dbd/error.hpp"

namespace dbd {

/// Cell value that stands for "missing" ("?" in files).
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

enum class AttrKind { Numeric, Nominal, Boolean };

/// One column of a dataset. Nominal cells are stored as indices into
/// `values`; boolean cells as 0/1 with the implicit domain {false, true}.
struct AttributeSpec {
    std::string name;
    AttrKind kind = AttrKind::Numeric;
    std::vector<std::string> values; // nominal only

    static AttributeSpec numeric(std::string name);
    static AttributeSpec nominal(std::string name, std::vector<std::string> values);
    static AttributeSpec boolean(std::string name);

    bool discrete() const { return kind != AttrKind::Numeric; }

    /// Value names for discrete attributes ({false, true} for booleans).
    const std::vector<std::string>& domain() const;

    std::optional<std::size_t> value_index(std::string_view v) const;

    bool operator==(const AttributeSpec&) const = default;
};

class Schema {
public:
    Schema(std::vector<AttributeSpec> attributes, std::size_t class_index);

    std::size_t size() const { return attributes_.size(); }
    const AttributeSpec& at(std::size_t i) const { return attributes_.at(i); }
    const AttributeSpec& operator[](std::size_t i) const { return attributes_[i]; }
    const std::vector<AttributeSpec>& attributes() const { return attributes_; }

    std::size_t class_index() const { return class_index_; }
    const AttributeSpec& class_attribute() const { return attributes_[class_index_]; }
    std::size_t num_classes() const { return class_attribute().values.size(); }

    std::optional<std::size_t> find(std::string_view name) const;

    /// Stable identity of the schema. Boolean and nominal{false,true}
    /// columns hash identically so that extracted features and their
    /// CSV/ARFF round-trips stay interchangeable for prediction.
    std::string fingerprint() const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<AttributeSpec> attributes_;
    std::size_t class_index_;
};

using Instance = std::vector<double>;

class Dataset {
public:
    Dataset(Schema schema, std::vector<Instance> instances);

    const Schema& schema() const { return schema_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const Instance& operator[](std::size_t i) const { return rows_[i]; }
    const std::vector<Instance>& rows() const { return rows_; }

    /// Class value index of instance i (never missing).
    std::size_t class_of(std::size_t i) const {
        return static_cast<std::size_t>(rows_[i][schema_.class_index()]);
    }

    std::vector<std::size_t> class_counts() const;

    bool operator==(const Dataset&) const = default;

private:
    Schema schema_;
    std::vector<Instance> rows_;
};

/// Index of the positive class ("malicious" when present, else value 0).
std::size_t positive_class_index(const Schema& schema);

struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> fold_of; // per instance, in [0, k)
    std::uint64_t seed = 0;
};

/// Stratified fold assignment: group by class, shuffle each group with
/// the seed, deal round-robin. Per-fold class counts are always within
/// one of the proportional share.
FoldAssignment stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

} // namespace dbd
