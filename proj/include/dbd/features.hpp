#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dbd/dataset.hpp"
#include "dbd/tabular.hpp"
#include "dbd/url.hpp"

namespace dbd {

enum class SnapshotKind { HostRank, CountryRank, Asn, SafeBrowsing };

/// File-name stem for a snapshot kind ("host_rank", "country_rank",
/// "asn", "safe_browsing"); snapshot directories hold `<kind>.csv`.
std::string_view snapshot_kind_name(SnapshotKind kind);
std::optional<SnapshotKind> snapshot_kind_from(std::string_view name);

enum class SafeBrowsingVerdict { Safe = 0, Unsafe = 1, Unknown = 2 };

/// Offline key->value table for one reputation source. Keys are
/// lowercase hosts or registrable domains; values are positive numbers
/// for ranks/ASN and verdict indices for safe browsing.
struct ReputationSnapshot {
    SnapshotKind kind;
    std::unordered_map<std::string, double> entries;
    std::string loaded_from;

    /// Tries the full host, then each parent domain obtained by
    /// stripping leading labels.
    std::optional<double> lookup(std::string_view host) const;
};

/// CSV `key,value`. Duplicate keys keep the last occurrence.
ReputationSnapshot load_snapshot(std::istream& in, SnapshotKind kind,
                                 std::string loaded_from = "");

/// At most one snapshot per kind.
class ProviderSet {
public:
    void add(ReputationSnapshot snapshot); // ConfigError on duplicate kind
    const ReputationSnapshot* get(SnapshotKind kind) const;

private:
    std::array<std::optional<ReputationSnapshot>, 4> slots_;
};

/// Loads every `<kind>.csv` present in the directory; absent files
/// simply leave that provider empty.
ProviderSet load_snapshot_dir(const std::filesystem::path& dir);

/// The eight per-URL features. Reputation fields are empty/Unknown
/// until a provider lookup fills them.
struct FeatureVector8 {
    std::optional<double> host_rank;
    std::optional<double> country_rank;
    std::optional<double> asn_number;
    std::size_t dots_in_url = 0;     // '.' count over the whole raw URL
    std::size_t length_of_url = 0;   // characters of the raw URL
    bool ip_address = false;         // host is an IP literal
    std::size_t length_of_hostname = 0;
    SafeBrowsingVerdict safe_browsing = SafeBrowsingVerdict::Unknown;

    bool operator==(const FeatureVector8&) const = default;
};

/// Fills only the four lexical fields.
FeatureVector8 lexical_features(const ParsedUrl& url);

/// Fills only the four reputation fields from the providers.
FeatureVector8 reputation_features(const ParsedUrl& url, const ProviderSet& providers);

FeatureVector8 extract_features(const ParsedUrl& url, const ProviderSet& providers);

/// Feature attribute names in their fixed dataset order.
extern const std::array<std::string, 8> kFeatureNames;
extern const std::string kClassAttributeName;

/// The 9-column schema: the eight features plus class {malicious, benign}.
Schema feature_schema();

Instance to_instance(const FeatureVector8& f, std::size_t class_value);

/// Lays extracted features out under an arbitrary (possibly filtered)
/// feature schema, matching attributes by name; used to classify fresh
/// URLs against a trained model. Unmappable attributes raise
/// SchemaMismatch; values absent from a nominal domain stay missing.
Instance feature_instance_for(const Schema& schema, const FeatureVector8& f);

struct SkipReport {
    std::size_t line = 0; // 1-based record number
    std::string reason;
};

struct ExtractResult {
    Dataset dataset;
    std::vector<SkipReport> skipped;
};

/// Builds the feature dataset for a URL list. Unparseable URLs are
/// skipped and reported; an empty result is an error.
ExtractResult extract(const std::vector<UrlRecord>& records, const ProviderSet& providers);

} // namespace dbd
