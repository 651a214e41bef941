#include "dbd/url.hpp"

#include <cctype>

#include "dbd/error.hpp"
#include "dbd/util.hpp"

namespace dbd {

namespace {

bool valid_ipv4(std::string_view host) {
    int octets = 0;
    std::size_t i = 0;
    while (i <= host.size()) {
        std::size_t start = i;
        unsigned value = 0;
        std::size_t digits = 0;
        while (i < host.size() && host[i] >= '0' && host[i] <= '9') {
            value = value * 10 + static_cast<unsigned>(host[i] - '0');
            ++digits;
            ++i;
        }
        if (digits == 0 || digits > 3 || value > 255) return false;
        (void)start;
        ++octets;
        if (i == host.size()) break;
        if (host[i] != '.') return false;
        ++i;
        if (i == host.size()) return false; // trailing dot
    }
    return octets == 4;
}

bool valid_bracketed_ipv6(std::string_view host) {
    if (host.size() < 4 || host.front() != '[' || host.back() != ']') return false;
    auto inner = host.substr(1, host.size() - 2);
    bool has_colon = false;
    for (char c : inner) {
        if (c == ':') {
            has_colon = true;
        } else if (!std::isxdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return has_colon;
}

} // namespace

bool is_ip_literal(std::string_view host) {
    return valid_ipv4(host) || valid_bracketed_ipv6(host);
}

ParsedUrl parse_url(std::string_view input) {
    auto raw = trim(input);
    if (raw.empty()) throw ParseError("empty url");
    for (char c : raw)
        if (c == ' ' || c == '\t')
            throw ParseError("url contains whitespace: \"" + std::string(raw) + "\"");

    ParsedUrl out;
    out.raw = std::string(raw);

    std::string_view rest = raw;
    auto scheme_end = rest.find("://");
    if (scheme_end != std::string_view::npos) {
        if (scheme_end == 0) throw ParseError("empty scheme: \"" + std::string(raw) + "\"");
        out.scheme = to_lower(rest.substr(0, scheme_end));
        rest = rest.substr(scheme_end + 3);
    } else {
        out.scheme = "http";
    }

    auto authority_end = rest.find_first_of("/?");
    auto authority = rest.substr(0, authority_end);
    std::string_view tail =
        authority_end == std::string_view::npos ? std::string_view{} : rest.substr(authority_end);

    std::string_view host = authority;
    std::string_view port_text;
    if (!authority.empty() && authority.front() == '[') {
        auto close = authority.find(']');
        if (close == std::string_view::npos)
            throw ParseError("unterminated ipv6 literal: \"" + std::string(raw) + "\"");
        host = authority.substr(0, close + 1);
        auto after = authority.substr(close + 1);
        if (!after.empty()) {
            if (after.front() != ':')
                throw ParseError("invalid authority: \"" + std::string(raw) + "\"");
            port_text = after.substr(1);
        }
    } else {
        auto colon = authority.rfind(':');
        if (colon != std::string_view::npos) {
            host = authority.substr(0, colon);
            port_text = authority.substr(colon + 1);
        }
    }

    if (host.empty()) throw ParseError("empty host: \"" + std::string(raw) + "\"");
    out.host = to_lower(host);

    if (!port_text.empty()) {
        auto p = parse_int(port_text);
        if (!p || *p < 0 || *p > 65535)
            throw ParseError("invalid port \"" + std::string(port_text) + "\"");
        out.port = static_cast<unsigned>(*p);
    }

    if (!tail.empty()) {
        auto q = tail.find('?');
        if (q == std::string_view::npos) {
            out.path = std::string(tail);
        } else {
            out.path = std::string(tail.substr(0, q));
            out.query = std::string(tail.substr(q + 1));
        }
    }
    return out;
}

} // namespace dbd
