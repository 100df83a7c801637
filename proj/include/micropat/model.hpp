#pragma once

// Semantic model shared by the frontend, the inheritance flattener and the
// pattern detectors. Everything here is plain data; construction happens in
// the frontend and the model is treated as immutable afterwards.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace micropat {

enum class EntityKind { contract, abstract_contract, interface, library };

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> entity_kind_from_string(std::string_view text);

enum class Visibility { default_, public_, external, internal, private_ };
enum class StateMutability { nonpayable, payable, view, pure };
enum class VarMutability { plain, constant, immutable };
enum class FunctionSpecial { none, constructor, fallback, receive };

std::string_view to_string(Visibility v);
std::string_view to_string(StateMutability m);
std::string_view to_string(VarMutability m);
std::string_view to_string(FunctionSpecial s);

enum class FactKind {
    reads_var,
    assigns_var,
    conditional_check,
    external_member_call,
    library_qualified_call,
    ether_transfer,
    emit_event,
    placeholder_marker,
    // `value.member(...)` on a receiver that is not contract-typed; the
    // candidate shape for `using L for T` attached library calls.
    attached_call,
};

std::string_view to_string(FactKind kind);

// How a fact's subject identifier resolved in the scope of the enclosing body.
enum class SubjectScope { state, local, type, global, unresolved };

std::string_view to_string(SubjectScope scope);

enum class AssignDetail { none, bool_literal, negation, indexed, other };
enum class Recipient { none, msg_sender, other };

struct SourceFact {
    FactKind kind = FactKind::reads_var;
    std::string subject;
    SubjectScope scope = SubjectScope::unresolved;
    std::string context;  // enclosing function or modifier name
    std::string member;   // called member name for call facts
    AssignDetail assign = AssignDetail::none;
    Recipient recipient = Recipient::none;
    bool keyed_by_sender = false;

    friend bool operator==(const SourceFact&, const SourceFact&) = default;
};

// Storage footprint of a state variable; `full_slot` covers mappings,
// dynamic arrays, strings, bytes, structs, and unknown types.
struct SlotSize {
    static constexpr int full_slot = 0;
    int bytes = full_slot;

    bool is_full_slot() const { return bytes == full_slot; }
    friend bool operator==(const SlotSize&, const SlotSize&) = default;
};

enum class TypeCategory {
    value,         // bool, intN, uintN, bytesN, fixed
    address,
    contract_ref,  // contract, abstract contract or interface type
    enumeration,
    mapping,
    dynamic_array,
    static_array,
    string_or_bytes,
    structure,
    function,
    unknown,
};

struct StateVar {
    std::string name;
    std::string declared_type;  // normalized source text, e.g. "mapping(address=>uint256)"
    Visibility visibility = Visibility::internal;
    VarMutability mutability = VarMutability::plain;
    int decl_index = 0;
    // Filled in by type binding once the project universe is known.
    TypeCategory category = TypeCategory::unknown;
    SlotSize size;

    friend bool operator==(const StateVar&, const StateVar&) = default;
};

struct Param {
    std::string type;  // normalized, data location stripped
    std::string name;  // empty when unnamed

    friend bool operator==(const Param&, const Param&) = default;
};

struct FunctionDef {
    std::string name;
    Visibility visibility = Visibility::public_;
    StateMutability mutability = StateMutability::nonpayable;
    std::vector<std::string> modifiers_invoked;
    std::vector<Param> params;
    std::vector<Param> return_params;
    bool has_body = false;
    FunctionSpecial special = FunctionSpecial::none;
    std::vector<SourceFact> facts;
    std::string declared_in;  // owning entity name

    // name + parameter types, e.g. "transfer(address,uint256)"
    std::string signature() const;
    friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

struct ModifierDef {
    std::string name;
    std::vector<Param> params;
    bool has_body = false;
    std::vector<SourceFact> facts;
    std::vector<std::size_t> placeholder_positions;
    std::string declared_in;

    friend bool operator==(const ModifierDef&, const ModifierDef&) = default;
};

struct EventDef {
    std::string name;
    std::vector<Param> params;

    friend bool operator==(const EventDef&, const EventDef&) = default;
};

struct UsingDirective {
    std::string library;  // empty for `using {f, g} for T`
    std::string target;   // "*" for wildcard

    friend bool operator==(const UsingDirective&, const UsingDirective&) = default;
};

struct Entity {
    std::string name;
    EntityKind kind = EntityKind::contract;
    std::string file_path;  // relative to the corpus root
    std::string project_id;
    std::string compiler_version;  // governing pragma constraint text
    std::vector<StateVar> state_vars;
    std::vector<FunctionDef> functions;
    std::vector<ModifierDef> modifiers;
    std::vector<EventDef> events;
    std::vector<std::string> bases;
    std::vector<UsingDirective> using_directives;
    std::vector<std::string> struct_names;
    std::vector<std::string> enum_names;
    // user-defined value types declared in the entity: alias -> underlying
    std::vector<std::pair<std::string, std::string>> value_type_aliases;

    friend bool operator==(const Entity&, const Entity&) = default;
};

}  // namespace micropat
