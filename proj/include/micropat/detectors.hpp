#pragma once

#include <array>
#include <string>
#include <vector>

#include "micropat/catalog.hpp"
#include "micropat/semantic.hpp"

namespace micropat {

struct PatternMatch {
    std::string entity;
    PatternId pattern = PatternId::Ownable;
    bool matched = false;
    std::vector<std::string> evidence;  // witnessing members; empty when unmatched
};

// Every detector returns false when the entity kind is not eligible.
PatternMatch detect(PatternId pattern, const FlattenedEntity& flat);

bool match_ownable(const FlattenedEntity& flat);
bool match_stoppable(const FlattenedEntity& flat);
bool match_pull_payment(const FlattenedEntity& flat);
bool match_reentrancy_guard(const FlattenedEntity& flat);
bool match_payable(const FlattenedEntity& flat);
bool match_borrower(const FlattenedEntity& flat);
bool match_implementer(const FlattenedEntity& flat);
bool match_modifier_usage(const FlattenedEntity& flat);
bool match_storage_saver(const FlattenedEntity& flat);
bool match_reader(const FlattenedEntity& flat);
bool match_operator(const FlattenedEntity& flat);
bool match_provider(const FlattenedEntity& flat);
bool match_supporter(const FlattenedEntity& flat);
bool match_delegator(const FlattenedEntity& flat);
bool match_named_return(const FlattenedEntity& flat);
bool match_returnless(const FlattenedEntity& flat);
bool match_emitter(const FlattenedEntity& flat);
bool match_muted(const FlattenedEntity& flat);

using PatternRow = std::array<bool, kPatternCount>;

PatternRow detect_row(const FlattenedEntity& flat);

struct MatrixRow {
    std::string name;
    std::string file_path;  // corpus-relative; the first component is the project id
    std::string compiler_version;
    EntityKind kind = EntityKind::contract;
    bool skipped = false;  // failed parsing or flattening; excluded from metrics
    PatternRow patterns{};

    std::string project_id() const;
    friend bool operator==(const MatrixRow&, const MatrixRow&) = default;
};

struct PatternMatrix {
    std::vector<MatrixRow> rows;

    // Rows in (project_id, file_path, name) order.
    void sort();
    std::size_t analyzed_count() const;
    friend bool operator==(const PatternMatrix&, const PatternMatrix&) = default;
};

struct SkippedEntity {
    std::string name;
    EntityKind kind = EntityKind::contract;
    std::string file_path;
    std::string compiler_version;
    std::string reason;
};

PatternMatrix detect_all(const std::vector<FlattenedEntity>& entities, const std::vector<SkippedEntity>& skipped = {});

}  // namespace micropat
