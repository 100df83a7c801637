#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "micropat/model.hpp"

namespace micropat {

enum class PatternId {
    Ownable,
    Stoppable,
    PullPayment,
    ReentrancyGuard,
    Payable,
    Borrower,
    Implementer,
    ModifierUsage,
    StorageSaver,
    Reader,
    Operator,
    Provider,
    Supporter,
    Delegator,
    NamedReturn,
    Returnless,
    Emitter,
    Muted,
};

inline constexpr std::size_t kPatternCount = 18;

enum class PatternCategory { Security, Functional, Optimization, Interaction, Feedback };

// Catalog order; also the column order of the pattern matrix.
const std::array<PatternId, kPatternCount>& all_patterns();

std::string_view pattern_name(PatternId id);  // CamelCase, e.g. "PullPayment"
std::string_view pattern_label(PatternId id);  // "Pull Payment"
std::optional<PatternId> pattern_from_name(std::string_view name);
PatternCategory pattern_category(PatternId id);
std::string_view to_string(PatternCategory c);

// Abstract contracts count as contracts here.
bool is_eligible(PatternId id, EntityKind kind);

inline std::size_t index_of(PatternId id) { return static_cast<std::size_t>(id); }

}  // namespace micropat
