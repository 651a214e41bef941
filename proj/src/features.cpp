#include "dbd/features.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

#include "dbd/error.hpp"
#include "dbd/util.hpp"

namespace dbd {

const std::array<std::string, 8> kFeatureNames = {
    "HostRank",  "CountryRank", "ASNNumber",        "DotsInURL",
    "LengthOfURL", "IPAddress", "LengthOfHostname", "SafeBrowsing"};
const std::string kClassAttributeName = "class";

namespace {
constexpr std::array<std::string_view, 4> kKindNames = {"host_rank", "country_rank", "asn",
                                                        "safe_browsing"};
}

std::string_view snapshot_kind_name(SnapshotKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<SnapshotKind> snapshot_kind_from(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == name) return static_cast<SnapshotKind>(i);
    return std::nullopt;
}

std::optional<double> ReputationSnapshot::lookup(std::string_view host) const {
    std::string_view probe = host;
    while (true) {
        auto it = entries.find(std::string(probe));
        if (it != entries.end()) return it->second;
        auto dot = probe.find('.');
        if (dot == std::string_view::npos) return std::nullopt;
        probe = probe.substr(dot + 1);
        if (probe.empty()) return std::nullopt;
    }
}

ReputationSnapshot load_snapshot(std::istream& in, SnapshotKind kind, std::string loaded_from) {
    ReputationSnapshot snap;
    snap.kind = kind;
    snap.loaded_from = std::move(loaded_from);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto text = trim(line);
        if (text.empty()) continue;
        auto comma = text.rfind(',');
        if (comma == std::string_view::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key,value");
        auto key = to_lower(trim(text.substr(0, comma)));
        auto value = trim(text.substr(comma + 1));
        if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");

        if (kind == SnapshotKind::SafeBrowsing) {
            auto verdict = to_lower(value);
            if (verdict == "safe")
                snap.entries[key] = static_cast<double>(SafeBrowsingVerdict::Safe);
            else if (verdict == "unsafe")
                snap.entries[key] = static_cast<double>(SafeBrowsingVerdict::Unsafe);
            else
                throw ParseError("line " + std::to_string(lineno) + ": unknown verdict \"" +
                                 std::string(value) + "\"");
        } else {
            const char* noun = kind == SnapshotKind::Asn ? "asn" : "rank";
            auto n = parse_int(value);
            if (!n)
                throw ParseError("line " + std::to_string(lineno) + ": non-integer " + noun);
            if (*n <= 0)
                throw ParseError("line " + std::to_string(lineno) + ": non-positive " + noun);
            snap.entries[key] = static_cast<double>(*n);
        }
    }
    return snap;
}

void ProviderSet::add(ReputationSnapshot snapshot) {
    auto& slot = slots_[static_cast<std::size_t>(snapshot.kind)];
    if (slot)
        throw ConfigError("duplicate provider for kind \"" +
                          std::string(snapshot_kind_name(snapshot.kind)) + "\"");
    slot = std::move(snapshot);
}

const ReputationSnapshot* ProviderSet::get(SnapshotKind kind) const {
    const auto& slot = slots_[static_cast<std::size_t>(kind)];
    return slot ? &*slot : nullptr;
}

ProviderSet load_snapshot_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("snapshot directory not found: " + dir.string());
    ProviderSet providers;
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        auto path = dir / (std::string(kKindNames[i]) + ".csv");
        if (!std::filesystem::exists(path)) continue;
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read snapshot file: " + path.string());
        providers.add(load_snapshot(in, static_cast<SnapshotKind>(i), path.string()));
    }
    return providers;
}

FeatureVector8 lexical_features(const ParsedUrl& url) {
    FeatureVector8 f;
    f.dots_in_url = static_cast<std::size_t>(std::count(url.raw.begin(), url.raw.end(), '.'));
    f.length_of_url = url.raw.size();
    f.ip_address = is_ip_literal(url.host);
    f.length_of_hostname = url.host.size();
    return f;
}

FeatureVector8 reputation_features(const ParsedUrl& url, const ProviderSet& providers) {
    FeatureVector8 f;
    if (const auto* s = providers.get(SnapshotKind::HostRank)) f.host_rank = s->lookup(url.host);
    if (const auto* s = providers.get(SnapshotKind::CountryRank))
        f.country_rank = s->lookup(url.host);
    if (const auto* s = providers.get(SnapshotKind::Asn)) f.asn_number = s->lookup(url.host);
    if (const auto* s = providers.get(SnapshotKind::SafeBrowsing)) {
        if (auto v = s->lookup(url.host))
            f.safe_browsing = static_cast<SafeBrowsingVerdict>(static_cast<int>(*v));
    }
    return f;
}

FeatureVector8 extract_features(const ParsedUrl& url, const ProviderSet& providers) {
    FeatureVector8 f = lexical_features(url);
    FeatureVector8 r = reputation_features(url, providers);
    f.host_rank = r.host_rank;
    f.country_rank = r.country_rank;
    f.asn_number = r.asn_number;
    f.safe_browsing = r.safe_browsing;
    return f;
}

Schema feature_schema() {
    std::vector<AttributeSpec> attrs;
    attrs.push_back(AttributeSpec::numeric(kFeatureNames[0]));
    attrs.push_back(AttributeSpec::numeric(kFeatureNames[1]));
    attrs.push_back(AttributeSpec::numeric(kFeatureNames[2]));
    attrs.push_back(AttributeSpec::numeric(kFeatureNames[3]));
    attrs.push_back(AttributeSpec::numeric(kFeatureNames[4]));
    attrs.push_back(AttributeSpec::boolean(kFeatureNames[5]));
    attrs.push_back(AttributeSpec::numeric(kFeatureNames[6]));
    attrs.push_back(AttributeSpec::nominal(kFeatureNames[7], {"safe", "unsafe", "unknown"}));
    attrs.push_back(AttributeSpec::nominal(kClassAttributeName, {"malicious", "benign"}));
    const std::size_t class_idx = attrs.size() - 1;
    return Schema(std::move(attrs), class_idx);
}

Instance to_instance(const FeatureVector8& f, std::size_t class_value) {
    Instance inst(9, kMissing);
    if (f.host_rank) inst[0] = *f.host_rank;
    if (f.country_rank) inst[1] = *f.country_rank;
    if (f.asn_number) inst[2] = *f.asn_number;
    inst[3] = static_cast<double>(f.dots_in_url);
    inst[4] = static_cast<double>(f.length_of_url);
    inst[5] = f.ip_address ? 1.0 : 0.0;
    inst[6] = static_cast<double>(f.length_of_hostname);
    inst[7] = static_cast<double>(f.safe_browsing);
    inst[8] = static_cast<double>(class_value);
    return inst;
}

Instance feature_instance_for(const Schema& schema, const FeatureVector8& f) {
    Instance inst(schema.size(), kMissing);
    inst[schema.class_index()] = 0; // placeholder, never read by predict
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (a == schema.class_index()) continue;
        const auto& spec = schema[a];
        const auto& name = spec.name;
        auto need_numeric = [&](std::optional<double> v) {
            if (spec.kind != AttrKind::Numeric)
                throw SchemaMismatch("model/feature schema mismatch: attribute \"" + name +
                                     "\" is not numeric");
            if (v) inst[a] = *v;
        };
        if (name == "HostRank") {
            need_numeric(f.host_rank);
        } else if (name == "CountryRank") {
            need_numeric(f.country_rank);
        } else if (name == "ASNNumber") {
            need_numeric(f.asn_number);
        } else if (name == "DotsInURL") {
            need_numeric(static_cast<double>(f.dots_in_url));
        } else if (name == "LengthOfURL") {
            need_numeric(static_cast<double>(f.length_of_url));
        } else if (name == "LengthOfHostname") {
            need_numeric(static_cast<double>(f.length_of_hostname));
        } else if (name == "IPAddress") {
            if (spec.kind == AttrKind::Numeric) {
                inst[a] = f.ip_address ? 1.0 : 0.0;
            } else {
                auto idx = spec.value_index(f.ip_address ? "true" : "false");
                if (idx) inst[a] = static_cast<double>(*idx);
            }
        } else if (name == "SafeBrowsing") {
            if (spec.kind == AttrKind::Numeric)
                throw SchemaMismatch(
                    "model/feature schema mismatch: attribute \"SafeBrowsing\" is numeric");
            const char* verdict = f.safe_browsing == SafeBrowsingVerdict::Safe     ? "safe"
                                  : f.safe_browsing == SafeBrowsingVerdict::Unsafe ? "unsafe"
                                                                                   : "unknown";
            auto idx = spec.value_index(verdict);
            if (idx) inst[a] = static_cast<double>(*idx); // unseen verdicts stay missing
        } else {
            throw SchemaMismatch("model/feature schema mismatch: unknown attribute \"" + name +
                                 "\"");
        }
    }
    return inst;
}

ExtractResult extract(const std::vector<UrlRecord>& records, const ProviderSet& providers) {
    if (records.empty()) throw InvalidArgument("no url records to extract");
    Schema schema = feature_schema();
    std::vector<Instance> rows;
    std::vector<SkipReport> skipped;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        try {
            ParsedUrl url = parse_url(rec.url);
            std::size_t cls = rec.label == "malicious" ? 0 : 1;
            rows.push_back(to_instance(extract_features(url, providers), cls));
        } catch (const ParseError& e) {
            skipped.push_back({i + 1, e.what()});
        }
    }
    if (rows.empty())
        throw ParseError("no url could be parsed (" + std::to_string(skipped.size()) +
                         " skipped)");
    return {Dataset(std::move(schema), std::move(rows)), std::move(skipped)};
}

} // namespace dbd
