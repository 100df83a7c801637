#include "micropat/catalog.hpp"

namespace micropat {

namespace {

struct Entry {
    PatternId id;
    std::string_view name;
    std::string_view label;
    PatternCategory category;
    bool contract, interface, library;
};

constexpr Entry kCatalog[kPatternCount] = {
    {PatternId::Ownable, "Ownable", "Ownable", PatternCategory::Security, true, false, false},
    {PatternId::Stoppable, "Stoppable", "Stoppable", PatternCategory::Security, true, false, false},
    {PatternId::PullPayment, "PullPayment", "Pull Payment", PatternCategory::Security, true, false, false},
    {PatternId::ReentrancyGuard, "ReentrancyGuard", "Reentrancy Guard", PatternCategory::Security, true, false, false},
    {PatternId::Payable, "Payable", "Payable", PatternCategory::Functional, true, false, false},
    {PatternId::Borrower, "Borrower", "Borrower", PatternCategory::Functional, true, false, false},
    {PatternId::Implementer, "Implementer", "Implementer", PatternCategory::Functional, true, false, false},
    {PatternId::ModifierUsage, "ModifierUsage", "Modifier Usage", PatternCategory::Functional, true, false, true},
    {PatternId::StorageSaver, "StorageSaver", "Storage Saver", PatternCategory::Optimization, true, false, false},
    {PatternId::Reader, "Reader", "Reader", PatternCategory::Optimization, true, true, true},
    {PatternId::Operator, "Operator", "Operator", PatternCategory::Optimization, true, true, true},
    {PatternId::Provider, "Provider", "Provider", PatternCategory::Interaction, true, true, true},
    {PatternId::Supporter, "Supporter", "Supporter", PatternCategory::Interaction, true, true, true},
    {PatternId::Delegator, "Delegator", "Delegator", PatternCategory::Interaction, true, false, true},
    {PatternId::NamedReturn, "NamedReturn", "Named Return", PatternCategory::Feedback, true, true, true},
    {PatternId::Returnless, "Returnless", "Returnless", PatternCategory::Feedback, true, true, true},
    {PatternId::Emitter, "Emitter", "Emitter", PatternCategory::Feedback, true, false, true},
    {PatternId::Muted, "Muted", "Muted", PatternCategory::Feedback, true, false, true},
};

const Entry& entry(PatternId id) { return kCatalog[index_of(id)]; }

}  // namespace

const std::array<PatternId, kPatternCount>& all_patterns()
{
    static const std::array<PatternId, kPatternCount> ids = [] {
        std::array<PatternId, kPatternCount> out{};
        for (std::size_t i = 0; i < kPatternCount; ++i)
            out[i] = kCatalog[i].id;
        return out;
    }();
    return ids;
}

std::string_view pattern_name(PatternId id) { return entry(id).name; }
std::string_view pattern_label(PatternId id) { return entry(id).label; }
PatternCategory pattern_category(PatternId id) { return entry(id).category; }

std::optional<PatternId> pattern_from_name(std::string_view name)
{
    for (const auto& e : kCatalog)
        if (e.name == name || e.label == name)
            return e.id;
    return std::nullopt;
}

std::string_view to_string(PatternCategory c)
{
    switch (c) {
    case PatternCategory::Security: return "Security";
    case PatternCategory::Functional: return "Functional";
    case PatternCategory::Optimization: return "Optimization";
    case PatternCategory::Interaction: return "Interaction";
    case PatternCategory::Feedback: return "Feedback";
    }
    return "Security";
}

bool is_eligible(PatternId id, EntityKind kind)
{
    const Entry& e = entry(id);
    switch (kind) {
    case EntityKind::contract:
    case EntityKind::abstract_contract: return e.contract;
    case EntityKind::interface: return e.interface;
    case EntityKind::library: return e.library;
    }
    return false;
}

}  // namespace micropat
