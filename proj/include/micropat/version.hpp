#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace micropat {

struct Version {
    int major = 0;
    int minor = 0;
    int patch = 0;

    std::string str() const;
    auto operator<=>(const Version&) const = default;
};

std::optional<Version> parse_version(std::string_view text);

// Closed/open interval over versions. A missing bound is unbounded.
struct VersionRange {
    struct Bound {
        Version version;
        bool inclusive = true;
    };
    std::optional<Bound> lower;
    std::optional<Bound> upper;

    bool empty() const;
    // Smallest version inside the range; nullopt when empty.
    std::optional<Version> minimum() const;
    VersionRange intersect(const VersionRange& other) const;
};

// Parses the constraint text of a `pragma solidity` directive, e.g.
// "^0.8.0", ">=0.6.0 <0.9.0", "=0.8.1", "0.4.24". Returns nullopt for syntax
// outside the recognized operator set (`||` alternatives, wildcards, ...).
std::optional<VersionRange> parse_constraint(std::string_view text);

}  // namespace micropat
