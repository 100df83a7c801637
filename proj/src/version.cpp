#include "micropat/version.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace micropat {

std::string Version::str() const
{
    return fmt::format("{}.{}.{}", major, minor, patch);
}

std::optional<Version> parse_version(std::string_view text)
{
    Version v;
    int* parts[] = {&v.major, &v.minor, &v.patch};
    std::size_t pos = 0;
    int count = 0;
    while (count < 3) {
        std::size_t end = pos;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end])))
            ++end;
        if (end == pos)
            return std::nullopt;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, *parts[count]);
        if (ec != std::errc{})
            return std::nullopt;
        ++count;
        pos = end;
        if (pos == text.size())
            break;
        if (text[pos] != '.')
            return std::nullopt;
        ++pos;
    }
    if (pos != text.size())
        return std::nullopt;
    return v;
}

namespace {

bool below(const Version& v, const VersionRange::Bound& upper)
{
    return upper.inclusive ? v <= upper.version : v < upper.version;
}

VersionRange::Bound tighter_lower(const VersionRange::Bound& a, const VersionRange::Bound& b)
{
    if (a.version != b.version)
        return a.version > b.version ? a : b;
    return {a.version, a.inclusive && b.inclusive};
}

VersionRange::Bound tighter_upper(const VersionRange::Bound& a, const VersionRange::Bound& b)
{
    if (a.version != b.version)
        return a.version < b.version ? a : b;
    return {a.version, a.inclusive && b.inclusive};
}

// Caret semantics as used by solc/npm: the first non-zero component is locked.
Version caret_upper(const Version& v)
{
    if (v.major > 0)
        return {v.major + 1, 0, 0};
    if (v.minor > 0)
        return {0, v.minor + 1, 0};
    return {0, 0, v.patch + 1};
}

}  // namespace

std::optional<Version> VersionRange::minimum() const
{
    Version candidate{};
    if (lower) {
        candidate = lower->version;
        if (!lower->inclusive)
            ++candidate.patch;
    }
    if (upper && !below(candidate, *upper))
        return std::nullopt;
    return candidate;
}

bool VersionRange::empty() const
{
    return !minimum().has_value();
}

VersionRange VersionRange::intersect(const VersionRange& other) const
{
    VersionRange out;
    if (lower && other.lower)
        out.lower = tighter_lower(*lower, *other.lower);
    else
        out.lower = lower ? lower : other.lower;
    if (upper && other.upper)
        out.upper = tighter_upper(*upper, *other.upper);
    else
        out.upper = upper ? upper : other.upper;
    return out;
}

std::optional<VersionRange> parse_constraint(std::string_view text)
{
    VersionRange range;
    bool any = false;
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    while (true) {
        skip_ws();
        if (pos == text.size())
            break;
        std::string_view op;
        for (std::string_view candidate : {">=", "<=", "^", "~", ">", "<", "="}) {
            if (text.substr(pos, candidate.size()) == candidate) {
                op = candidate;
                break;
            }
        }
        pos += op.size();
        skip_ws();
        std::size_t end = pos;
        while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) || text[end] == '.'))
            ++end;
        auto version = parse_version(text.substr(pos, end - pos));
        if (!version)
            return std::nullopt;
        pos = end;
        if (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])))
            return std::nullopt;

        VersionRange term;
        if (op == "^") {
            term.lower = VersionRange::Bound{*version, true};
            term.upper = VersionRange::Bound{caret_upper(*version), false};
        } else if (op == "~") {
            term.lower = VersionRange::Bound{*version, true};
            term.upper = VersionRange::Bound{Version{version->major, version->minor + 1, 0}, false};
        } else if (op == ">=") {
            term.lower = VersionRange::Bound{*version, true};
        } else if (op == ">") {
            term.lower = VersionRange::Bound{*version, false};
        } else if (op == "<=") {
            term.upper = VersionRange::Bound{*version, true};
        } else if (op == "<") {
            term.upper = VersionRange::Bound{*version, false};
        } else {
            term.lower = VersionRange::Bound{*version, true};
            term.upper = VersionRange::Bound{*version, true};
        }
        range = range.intersect(term);
        any = true;
    }
    if (!any)
        return std::nullopt;
    return range;
}

}  // namespace micropat
