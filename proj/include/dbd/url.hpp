#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace dbd {

/// Minimal URL decomposition: scheme://host[:port][path][?query].
/// Deliberately not a full RFC 3986 parser; the feature extractors
/// only need these parts.
struct ParsedUrl {
    std::string scheme;
    std::string host; // lowercase, nonempty ("[...]" for IPv6 literals)
    std::optional<unsigned> port;
    std::string path;  // leading '/' included; empty when absent
    std::string query; // text after the first '?', without it
    std::string raw;   // original input, unmodified

    bool operator==(const ParsedUrl&) const = default;
};

/// Scheme-less input is treated as http://<input>. Throws ParseError
/// for empty input, embedded whitespace, an empty host or a bad port.
ParsedUrl parse_url(std::string_view raw);

/// True for dotted-quad IPv4 literals (each octet 0-255) and bracketed
/// IPv6 literals.
bool is_ip_literal(std::string_view host);

} // namespace dbd
