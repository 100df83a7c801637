#include "micropat/model.hpp"

#include "syntax_util.hpp"

namespace micropat {

std::string_view to_string(EntityKind kind)
{
    switch (kind) {
    case EntityKind::contract: return "contract";
    case EntityKind::abstract_contract: return "abstract_contract";
    case EntityKind::interface: return "interface";
    case EntityKind::library: return "library";
    }
    return "contract";
}

std::optional<EntityKind> entity_kind_from_string(std::string_view text)
{
    for (auto k : {EntityKind::contract, EntityKind::abstract_contract, EntityKind::interface, EntityKind::library})
        if (to_string(k) == text)
            return k;
    return std::nullopt;
}

std::string_view to_string(Visibility v)
{
    switch (v) {
    case Visibility::default_: return "default";
    case Visibility::public_: return "public";
    case Visibility::external: return "external";
    case Visibility::internal: return "internal";
    case Visibility::private_: return "private";
    }
    return "default";
}

std::string_view to_string(StateMutability m)
{
    switch (m) {
    case StateMutability::nonpayable: return "nonpayable";
    case StateMutability::payable: return "payable";
    case StateMutability::view: return "view";
    case StateMutability::pure: return "pure";
    }
    return "nonpayable";
}

std::string_view to_string(VarMutability m)
{
    switch (m) {
    case VarMutability::plain: return "plain";
    case VarMutability::constant: return "constant";
    case VarMutability::immutable: return "immutable";
    }
    return "plain";
}

std::string_view to_string(FunctionSpecial s)
{
    switch (s) {
    case FunctionSpecial::none: return "none";
    case FunctionSpecial::constructor: return "constructor";
    case FunctionSpecial::fallback: return "fallback";
    case FunctionSpecial::receive: return "receive";
    }
    return "none";
}

std::string_view to_string(FactKind kind)
{
    switch (kind) {
    case FactKind::reads_var: return "reads_var";
    case FactKind::assigns_var: return "assigns_var";
    case FactKind::conditional_check: return "conditional_check";
    case FactKind::external_member_call: return "external_member_call";
    case FactKind::library_qualified_call: return "library_qualified_call";
    case FactKind::ether_transfer: return "ether_transfer";
    case FactKind::emit_event: return "emit_event";
    case FactKind::placeholder_marker: return "placeholder_marker";
    case FactKind::attached_call: return "attached_call";
    }
    return "reads_var";
}

std::string_view to_string(SubjectScope scope)
{
    switch (scope) {
    case SubjectScope::state: return "state";
    case SubjectScope::local: return "local";
    case SubjectScope::type: return "type";
    case SubjectScope::global: return "global";
    case SubjectScope::unresolved: return "unresolved";
    }
    return "unresolved";
}

std::string FunctionDef::signature() const
{
    std::string out = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i)
            out += ',';
        out += detail::abi_type(params[i].type);
    }
    return out + ")";
}

}  // namespace micropat
