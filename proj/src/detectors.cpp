#include "micropat/detectors.hpp"

#include <algorithm>
#include <optional>
#include <tuple>

#include "syntax_util.hpp"

namespace micropat {

namespace {

using Evidence = std::optional<std::vector<std::string>>;

bool invokes(const FunctionDef& f, const std::string& modifier)
{
    return std::find(f.modifiers_invoked.begin(), f.modifiers_invoked.end(), modifier) != f.modifiers_invoked.end();
}

bool has_fact(const std::vector<SourceFact>& facts, FactKind kind, const std::string& subject, SubjectScope scope)
{
    return std::any_of(facts.begin(), facts.end(), [&](const SourceFact& f) {
        return f.kind == kind && f.subject == subject && f.scope == scope;
    });
}

bool checks_state_var(const ModifierDef& m, const std::string& var)
{
    return has_fact(m.facts, FactKind::conditional_check, var, SubjectScope::state);
}

const FunctionDef* first_user(const std::vector<const FunctionDef*>& domain, const std::string& modifier)
{
    for (const FunctionDef* f : domain)
        if (invokes(*f, modifier))
            return f;
    return nullptr;
}

std::vector<std::string> names_of(const std::vector<const FunctionDef*>& domain)
{
    std::vector<std::string> out;
    for (const FunctionDef* f : domain)
        out.push_back(f->name);
    return out;
}

template <typename Pred>
Evidence for_all(const std::vector<const FunctionDef*>& domain, Pred pred)
{
    if (domain.empty() || !std::all_of(domain.begin(), domain.end(), [&](const FunctionDef* f) { return pred(*f); }))
        return std::nullopt;
    return names_of(domain);
}

Evidence ownable(const FlattenedEntity& flat)
{
    auto domain = quantification_domain(flat, PatternId::Ownable);
    for (const auto& v : flat.all_state_vars) {
        if (v.category != TypeCategory::address || v.visibility != Visibility::public_)
            continue;
        for (const auto& m : flat.all_modifiers)
            if (checks_state_var(m, v.name))
                if (const FunctionDef* f = first_user(domain, m.name))
                    return std::vector<std::string>{v.name, m.name, f->name};
    }
    return std::nullopt;
}

Evidence stoppable(const FlattenedEntity& flat)
{
    auto domain = quantification_domain(flat, PatternId::Stoppable);
    for (const auto& v : flat.all_state_vars) {
        if (v.declared_type != "bool")
            continue;
        const FunctionDef* toggler = nullptr;
        for (const FunctionDef* f : domain) {
            bool toggles = std::any_of(f->facts.begin(), f->facts.end(), [&](const SourceFact& fact) {
                return fact.kind == FactKind::assigns_var && fact.subject == v.name && fact.scope == SubjectScope::state
                    && (fact.assign == AssignDetail::bool_literal || fact.assign == AssignDetail::negation);
            });
            if (toggles) {
                toggler = f;
                break;
            }
        }
        if (!toggler)
            continue;
        for (const auto& m : flat.all_modifiers)
            if (checks_state_var(m, v.name))
                if (const FunctionDef* user = first_user(domain, m.name))
                    return std::vector<std::string>{v.name, m.name, user->name, toggler->name};
    }
    return std::nullopt;
}

Evidence pull_payment(const FlattenedEntity& flat)
{
    auto domain = quantification_domain(flat, PatternId::PullPayment);
    for (const auto& v : flat.all_state_vars) {
        std::string key, value;
        if (!detail::split_mapping(v.declared_type, key, value))
            continue;
        if ((key != "address" && key != "address payable") || !value.starts_with("uint"))
            continue;
        for (const FunctionDef* f : domain) {
            bool reads = std::any_of(f->facts.begin(), f->facts.end(), [&](const SourceFact& fact) {
                return fact.kind == FactKind::reads_var && fact.subject == v.name && fact.scope == SubjectScope::state
                    && fact.keyed_by_sender;
            });
            bool pays_sender = std::any_of(f->facts.begin(), f->facts.end(), [](const SourceFact& fact) {
                return fact.kind == FactKind::ether_transfer && fact.recipient == Recipient::msg_sender;
            });
            if (reads && pays_sender)
                return std::vector<std::string>{v.name, f->name};
        }
    }
    return std::nullopt;
}

bool guard_sequence(const ModifierDef& m, const std::string& var)
{
    int stage = 0;
    for (const auto& fact : m.facts) {
        bool on_var = fact.subject == var && fact.scope == SubjectScope::state;
        if (stage == 0 && fact.kind == FactKind::conditional_check && on_var)
            stage = 1;
        else if ((stage == 1 || stage == 3) && fact.kind == FactKind::assigns_var && on_var)
            ++stage;
        else if (stage == 2 && fact.kind == FactKind::placeholder_marker)
            stage = 3;
        if (stage == 4)
            return true;
    }
    return false;
}

Evidence reentrancy_guard(const FlattenedEntity& flat)
{
    auto domain = quantification_domain(flat, PatternId::ReentrancyGuard);
    for (const auto& m : flat.all_modifiers) {
        const FunctionDef* user = first_user(domain, m.name);
        if (!user)
            continue;
        for (const auto& v : flat.all_state_vars)
            if (guard_sequence(m, v.name))
                return std::vector<std::string>{m.name, v.name, user->name};
    }
    return std::nullopt;
}

Evidence payable(const FlattenedEntity& flat)
{
    auto has = [&](FunctionSpecial s) {
        return std::any_of(flat.all_functions.begin(), flat.all_functions.end(),
                           [&](const FunctionDef& f) { return f.special == s; });
    };
    if (has(FunctionSpecial::fallback) && has(FunctionSpecial::receive))
        return std::vector<std::string>{"fallback", "receive"};
    return std::nullopt;
}

std::string last_segment(const std::string& name)
{
    auto dot = name.rfind('.');
    return dot == std::string::npos ? name : name.substr(dot + 1);
}

Evidence borrower(const FlattenedEntity& flat)
{
    auto domain = quantification_domain(flat, PatternId::Borrower);
    const auto& libs = flat.reachable_libraries;
    for (const FunctionDef* f : domain)
        for (const auto& fact : f->facts)
            if (fact.kind == FactKind::library_qualified_call && libs.contains(last_segment(fact.subject)))
                return std::vector<std::string>{last_segment(fact.subject), f->name};
    for (const auto& u : flat.using_directives) {
        if (u.library.empty())
            continue;
        auto lib = libs.find(last_segment(u.library));
        if (lib == libs.end())
            continue;
        for (const FunctionDef* f : domain)
            for (const auto& fact : f->facts)
                if ((fact.kind == FactKind::attached_call || fact.kind == FactKind::external_member_call)
                    && lib->second.contains(fact.member))
                    return std::vector<std::string>{lib->first, f->name};
    }
    return std::nullopt;
}

Evidence implementer(const FlattenedEntity& flat)
{
    auto domain = quantification_domain(flat, PatternId::Implementer);
    if (domain.empty() || flat.inherited_declarations.empty())
        return std::nullopt;
    std::vector<std::string> evidence;
    for (const FunctionDef* f : domain) {
        if (!f->has_body)
            continue;
        if (!flat.inherited_declarations.contains(f->signature()))
            return std::nullopt;
        evidence.push_back(f->name);
    }
    if (evidence.empty())
        return std::nullopt;
    return evidence;
}

Evidence modifier_usage(const FlattenedEntity& flat)
{
    auto domain = quantification_domain(flat, PatternId::ModifierUsage);
    for (const auto& m : flat.all_modifiers)
        if (const FunctionDef* f = first_user(domain, m.name))
            return std::vector<std::string>{m.name, f->name};
    return std::nullopt;
}

Evidence storage_saver(const FlattenedEntity& flat)
{
    StorageLayout layout = compute_layout(flat);
    int max_free_before = -1;
    for (const auto& slot : layout.slots) {
        const SlotOccupant& first = slot.occupants.front();
        int size = first.var.size.bytes;
        if (!first.var.size.is_full_slot() && size <= 31 && max_free_before >= size)
            return std::nullopt;
        max_free_before = std::max(max_free_before, slot.free_bytes);
    }
    std::vector<std::string> evidence;
    for (const auto& slot : layout.slots)
        for (const auto& o : slot.occupants)
            evidence.push_back(o.var.name);
    return evidence;
}

Evidence delegator(const FlattenedEntity& flat)
{
    auto domain = quantification_domain(flat, PatternId::Delegator);
    for (const auto& v : flat.all_state_vars) {
        if (v.category != TypeCategory::contract_ref)
            continue;
        for (const FunctionDef* f : domain)
            if (has_fact(f->facts, FactKind::external_member_call, v.name, SubjectScope::state))
                return std::vector<std::string>{v.name, f->name};
    }
    return std::nullopt;
}

bool emits(const FunctionDef& f)
{
    return std::any_of(f.facts.begin(), f.facts.end(),
                       [](const SourceFact& fact) { return fact.kind == FactKind::emit_event; });
}

Evidence evaluate(PatternId id, const FlattenedEntity& flat)
{
    auto domain = [&] { return quantification_domain(flat, id); };
    switch (id) {
    case PatternId::Ownable: return ownable(flat);
    case PatternId::Stoppable: return stoppable(flat);
    case PatternId::PullPayment: return pull_payment(flat);
    case PatternId::ReentrancyGuard: return reentrancy_guard(flat);
    case PatternId::Payable: return payable(flat);
    case PatternId::Borrower: return borrower(flat);
    case PatternId::Implementer: return implementer(flat);
    case PatternId::ModifierUsage: return modifier_usage(flat);
    case PatternId::StorageSaver: return storage_saver(flat);
    case PatternId::Reader:
        return for_all(domain(), [](const FunctionDef& f) { return f.mutability == StateMutability::view; });
    case PatternId::Operator:
        return for_all(domain(), [](const FunctionDef& f) { return f.mutability == StateMutability::pure; });
    case PatternId::Provider:
        return for_all(domain(), [](const FunctionDef& f) { return f.visibility == Visibility::external; });
    case PatternId::Supporter:
        return for_all(domain(), [](const FunctionDef& f) { return f.visibility == Visibility::internal; });
    case PatternId::Delegator: return delegator(flat);
    case PatternId::NamedReturn:
        return for_all(domain(), [](const FunctionDef& f) {
            return !f.return_params.empty() && std::all_of(f.return_params.begin(), f.return_params.end(),
                                                           [](const Param& p) { return !p.name.empty(); });
        });
    case PatternId::Returnless:
        return for_all(domain(), [](const FunctionDef& f) { return f.return_params.empty(); });
    case PatternId::Emitter: return for_all(domain(), emits);
    case PatternId::Muted: return for_all(domain(), [](const FunctionDef& f) { return !emits(f); });
    }
    return std::nullopt;
}

}  // namespace

PatternMatch detect(PatternId pattern, const FlattenedEntity& flat)
{
    PatternMatch m;
    m.entity = flat.entity.name;
    m.pattern = pattern;
    if (!is_eligible(pattern, flat.entity.kind))
        return m;
    if (Evidence ev = evaluate(pattern, flat)) {
        m.matched = true;
        m.evidence = std::move(*ev);
    }
    return m;
}

bool match_ownable(const FlattenedEntity& f) { return detect(PatternId::Ownable, f).matched; }
bool match_stoppable(const FlattenedEntity& f) { return detect(PatternId::Stoppable, f).matched; }
bool match_pull_payment(const FlattenedEntity& f) { return detect(PatternId::PullPayment, f).matched; }
bool match_reentrancy_guard(const FlattenedEntity& f) { return detect(PatternId::ReentrancyGuard, f).matched; }
bool match_payable(const FlattenedEntity& f) { return detect(PatternId::Payable, f).matched; }
bool match_borrower(const FlattenedEntity& f) { return detect(PatternId::Borrower, f).matched; }
bool match_implementer(const FlattenedEntity& f) { return detect(PatternId::Implementer, f).matched; }
bool match_modifier_usage(const FlattenedEntity& f) { return detect(PatternId::ModifierUsage, f).matched; }
bool match_storage_saver(const FlattenedEntity& f) { return detect(PatternId::StorageSaver, f).matched; }
bool match_reader(const FlattenedEntity& f) { return detect(PatternId::Reader, f).matched; }
bool match_operator(const FlattenedEntity& f) { return detect(PatternId::Operator, f).matched; }
bool match_provider(const FlattenedEntity& f) { return detect(PatternId::Provider, f).matched; }
bool match_supporter(const FlattenedEntity& f) { return detect(PatternId::Supporter, f).matched; }
bool match_delegator(const FlattenedEntity& f) { return detect(PatternId::Delegator, f).matched; }
bool match_named_return(const FlattenedEntity& f) { return detect(PatternId::NamedReturn, f).matched; }
bool match_returnless(const FlattenedEntity& f) { return detect(PatternId::Returnless, f).matched; }
bool match_emitter(const FlattenedEntity& f) { return detect(PatternId::Emitter, f).matched; }
bool match_muted(const FlattenedEntity& f) { return detect(PatternId::Muted, f).matched; }

PatternRow detect_row(const FlattenedEntity& flat)
{
    PatternRow row{};
    for (PatternId id : all_patterns())
        row[index_of(id)] = detect(id, flat).matched;
    return row;
}

std::string MatrixRow::project_id() const
{
    auto slash = file_path.find('/');
    return slash == std::string::npos ? std::string{} : file_path.substr(0, slash);
}

void PatternMatrix::sort()
{
    std::stable_sort(rows.begin(), rows.end(), [](const MatrixRow& a, const MatrixRow& b) {
        return std::make_tuple(a.project_id(), std::cref(a.file_path), std::cref(a.name))
             < std::make_tuple(b.project_id(), std::cref(b.file_path), std::cref(b.name));
    });
}

std::size_t PatternMatrix::analyzed_count() const
{
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const MatrixRow& r) { return !r.skipped; }));
}

PatternMatrix detect_all(const std::vector<FlattenedEntity>& entities, const std::vector<SkippedEntity>& skipped)
{
    PatternMatrix m;
    for (const auto& flat : entities) {
        MatrixRow row;
        row.name = flat.entity.name;
        row.file_path = flat.entity.file_path;
        row.compiler_version = flat.entity.compiler_version;
        row.kind = flat.entity.kind;
        row.patterns = detect_row(flat);
        m.rows.push_back(std::move(row));
    }
    for (const auto& s : skipped) {
        MatrixRow row;
        row.name = s.name;
        row.file_path = s.file_path;
        row.compiler_version = s.compiler_version;
        row.kind = s.kind;
        row.skipped = true;
        m.rows.push_back(std::move(row));
    }
    m.sort();
    return m;
}

}  // namespace micropat
