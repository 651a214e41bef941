#include "dbd/tabular.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "dbd/error.hpp"
#include "dbd/util.hpp"

namespace dbd {

namespace {

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::optional<double> parse_finite(std::string_view s) {
    auto v = parse_double(s);
    if (v && !std::isfinite(*v)) return std::nullopt;
    return v;
}

std::string cell_text(const AttributeSpec& attr, double v) {
    if (is_missing(v)) return "?";
    if (attr.kind == AttrKind::Numeric) return format_double(v);
    return attr.domain()[static_cast<std::size_t>(v)];
}

// Column order for writers: loaders take the last column as the class.
std::vector<std::size_t> write_order(const Schema& schema) {
    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < schema.size(); ++c)
        if (c != schema.class_index()) order.push_back(c);
    order.push_back(schema.class_index());
    return order;
}

} // namespace

std::vector<UrlRecord> load_url_list(std::istream& in) {
    std::vector<UrlRecord> out;
    std::string line;
    std::size_t lineno = 0;
    bool first_content = true;
    while (next_line(in, line)) {
        ++lineno;
        auto text = trim(line);
        if (text.empty()) continue;
        if (first_content) {
            first_content = false;
            if (to_lower(text) == "url,label") continue; // optional header
        }
        auto comma = text.rfind(',');
        if (comma == std::string_view::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected url,label");
        auto url = trim(text.substr(0, comma));
        auto label = to_lower(trim(text.substr(comma + 1)));
        if (url.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty url");
        if (label != "malicious" && label != "benign")
            throw ParseError("line " + std::to_string(lineno) + ": unknown label \"" + label +
                             "\"");
        out.push_back({std::string(url), std::move(label)});
    }
    return out;
}

namespace {

Dataset load_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> names;
    while (next_line(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        for (auto& f : split(trim(line), ',')) names.push_back(std::string(trim(f)));
        break;
    }
    if (names.empty()) throw ParseError("empty csv: no header row");
    if (names.size() < 2) throw ParseError("csv header needs at least one attribute and a class");

    std::vector<std::vector<std::string>> cells; // row-major, "?" for missing
    while (next_line(in, line)) {
        ++lineno;
        auto text = trim(line);
        if (text.empty()) continue;
        auto fields = split(text, ',');
        if (fields.size() == names.size() - 1)
            throw ParseError("row " + std::to_string(lineno) + ": missing class");
        if (fields.size() != names.size())
            throw ParseError("row " + std::to_string(lineno) + ": expected " +
                             std::to_string(names.size()) + " fields, got " +
                             std::to_string(fields.size()));
        std::vector<std::string> row;
        row.reserve(fields.size());
        for (auto& f : fields) {
            auto t = trim(f);
            row.emplace_back(t.empty() ? "?" : std::string(t));
        }
        if (row.back() == "?")
            throw ParseError("row " + std::to_string(lineno) + ": missing class");
        cells.push_back(std::move(row));
    }
    if (cells.empty()) throw ParseError("csv has no data rows");

    const std::size_t ncols = names.size();
    const std::size_t class_col = ncols - 1;
    std::vector<AttributeSpec> attrs;
    for (std::size_t c = 0; c < ncols; ++c) {
        bool all_numeric = true;
        bool all_boolean = true;
        std::vector<std::string> values;
        for (const auto& row : cells) {
            const auto& v = row[c];
            if (v == "?") continue;
            if (all_numeric && !parse_finite(v)) all_numeric = false;
            if (all_boolean && v != "false" && v != "true") all_boolean = false;
            bool seen = false;
            for (const auto& known : values) seen = seen || known == v;
            if (!seen) values.push_back(v);
        }
        if (c == class_col) {
            attrs.push_back(AttributeSpec::nominal(names[c], std::move(values)));
        } else if (all_numeric) {
            attrs.push_back(AttributeSpec::numeric(names[c]));
        } else if (all_boolean) {
            attrs.push_back(AttributeSpec::boolean(names[c]));
        } else {
            attrs.push_back(AttributeSpec::nominal(names[c], std::move(values)));
        }
    }

    Schema schema(std::move(attrs), class_col);
    std::vector<Instance> rows;
    rows.reserve(cells.size());
    for (const auto& row : cells) {
        Instance inst(ncols, kMissing);
        for (std::size_t c = 0; c < ncols; ++c) {
            const auto& v = row[c];
            if (v == "?") continue;
            if (schema[c].kind == AttrKind::Numeric)
                inst[c] = *parse_finite(v);
            else
                inst[c] = static_cast<double>(*schema[c].value_index(v));
        }
        rows.push_back(std::move(inst));
    }
    return Dataset(std::move(schema), std::move(rows));
}

Dataset load_arff(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool seen_relation = false;
    bool in_data = false;
    std::vector<AttributeSpec> attrs;
    std::vector<std::vector<std::string>> raw_rows;
    std::vector<std::size_t> row_lines;

    while (next_line(in, line)) {
        ++lineno;
        auto text = trim(line);
        if (text.empty() || text.front() == '%') continue;

        if (!in_data && (text.front() == '@')) {
            auto space = text.find_first_of(" \t");
            auto directive = to_lower(space == std::string_view::npos ? text
                                                                      : text.substr(0, space));
            auto rest = space == std::string_view::npos ? std::string_view{}
                                                        : trim(text.substr(space));
            if (directive == "@relation") {
                seen_relation = true;
            } else if (directive == "@attribute") {
                auto name_end = rest.find_first_of(" \t");
                if (name_end == std::string_view::npos)
                    throw ParseError("row " + std::to_string(lineno) +
                                     ": @attribute needs a name and a type");
                std::string name(rest.substr(0, name_end));
                auto type = trim(rest.substr(name_end));
                auto type_lower = to_lower(type);
                if (type_lower == "numeric" || type_lower == "real" || type_lower == "integer") {
                    attrs.push_back(AttributeSpec::numeric(std::move(name)));
                } else if (!type.empty() && type.front() == '{') {
                    if (type.back() != '}')
                        throw ParseError("row " + std::to_string(lineno) +
                                         ": unterminated nominal value list");
                    std::vector<std::string> values;
                    for (auto& v : split(type.substr(1, type.size() - 2), ','))
                        values.push_back(std::string(trim(v)));
                    attrs.push_back(AttributeSpec::nominal(std::move(name), std::move(values)));
                } else if (type_lower == "string") {
                    throw ParseError("row " + std::to_string(lineno) +
                                     ": string attributes unsupported");
                } else if (type_lower.rfind("date", 0) == 0) {
                    throw ParseError("row " + std::to_string(lineno) +
                                     ": date attributes unsupported");
                } else {
                    throw ParseError("row " + std::to_string(lineno) +
                                     ": unknown attribute type \"" + std::string(type) + "\"");
                }
            } else if (directive == "@data") {
                if (!seen_relation)
                    throw ParseError("row " + std::to_string(lineno) + ": @data before @relation");
                if (attrs.empty())
                    throw ParseError("row " + std::to_string(lineno) + ": @data with no attributes");
                in_data = true;
            } else {
                throw ParseError("row " + std::to_string(lineno) + ": unknown directive \"" +
                                 std::string(directive) + "\"");
            }
            continue;
        }

        if (!in_data)
            throw ParseError("row " + std::to_string(lineno) + ": data before @data section");
        if (text.front() == '{')
            throw ParseError("row " + std::to_string(lineno) + ": sparse ARFF unsupported");
        auto fields = split(text, ',');
        if (fields.size() != attrs.size())
            throw ParseError("row " + std::to_string(lineno) + ": expected " +
                             std::to_string(attrs.size()) + " fields, got " +
                             std::to_string(fields.size()));
        std::vector<std::string> row;
        for (auto& f : fields) row.push_back(std::string(trim(f)));
        raw_rows.push_back(std::move(row));
        row_lines.push_back(lineno);
    }

    if (!in_data) throw ParseError("arff has no @data section");

    const std::size_t class_idx = attrs.size() - 1; // last attribute is the class
    Schema schema(std::move(attrs), class_idx);

    std::vector<Instance> rows;
    for (std::size_t r = 0; r < raw_rows.size(); ++r) {
        const auto& raw = raw_rows[r];
        Instance inst(schema.size(), kMissing);
        for (std::size_t c = 0; c < schema.size(); ++c) {
            const auto& v = raw[c];
            if (v == "?") continue;
            if (schema[c].kind == AttrKind::Numeric) {
                auto num = parse_finite(v);
                if (!num)
                    throw ParseError("row " + std::to_string(row_lines[r]) +
                                     ": invalid numeric value \"" + v + "\" for attribute \"" +
                                     schema[c].name + "\"");
                inst[c] = *num;
            } else {
                auto idx = schema[c].value_index(v);
                if (!idx)
                    throw ParseError("row " + std::to_string(row_lines[r]) +
                                     ": undeclared nominal value \"" + v + "\" for attribute \"" +
                                     schema[c].name + "\"");
                inst[c] = static_cast<double>(*idx);
            }
        }
        if (is_missing(inst[schema.class_index()]))
            throw ParseError("row " + std::to_string(row_lines[r]) + ": missing class");
        rows.push_back(std::move(inst));
    }
    return Dataset(std::move(schema), std::move(rows));
}

} // namespace

Dataset load_tabular(std::istream& in, TabularFormat format) {
    return format == TabularFormat::Csv ? load_csv(in) : load_arff(in);
}

void save_csv(const Dataset& d, std::ostream& out) {
    const auto& schema = d.schema();
    const auto order = write_order(schema);
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i) out << ',';
        out << schema[order[i]].name;
    }
    out << '\n';
    for (const auto& row : d.rows()) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i) out << ',';
            out << cell_text(schema[order[i]], row[order[i]]);
        }
        out << '\n';
    }
}

void save_arff(const Dataset& d, std::ostream& out, const std::string& relation) {
    const auto& schema = d.schema();
    const auto order = write_order(schema);
    out << "@relation " << relation << '\n';
    for (auto c : order) {
        const auto& attr = schema[c];
        out << "@attribute " << attr.name << ' ';
        if (attr.kind == AttrKind::Numeric) {
            out << "numeric";
        } else {
            out << '{';
            const auto& dom = attr.domain();
            for (std::size_t i = 0; i < dom.size(); ++i) {
                if (i) out << ',';
                out << dom[i];
            }
            out << '}';
        }
        out << '\n';
    }
    out << "@data\n";
    for (const auto& row : d.rows()) {
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i) out << ',';
            out << cell_text(schema[order[i]], row[order[i]]);
        }
        out << '\n';
    }
}

} // namespace dbd
