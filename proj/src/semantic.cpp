#include "micropat/semantic.hpp"

#include <algorithm>
#include <deque>

#include <fmt/format.h>

#include "syntax_util.hpp"

namespace micropat {

namespace {

std::string last_segment(const std::string& name)
{
    auto dot = name.rfind('.');
    return dot == std::string::npos ? name : name.substr(dot + 1);
}

std::optional<int> numeric_suffix(std::string_view s)
{
    if (s.empty() || s.size() > 3)
        return std::nullopt;
    int n = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            return std::nullopt;
        n = n * 10 + (c - '0');
    }
    return n;
}

TypeBinding bind(const std::string& t, const Universe& u, int depth)
{
    auto full = [](TypeCategory c) { return TypeBinding{c, SlotSize{SlotSize::full_slot}}; };
    auto sized = [](TypeCategory c, int bytes) { return TypeBinding{c, SlotSize{bytes}}; };

    if (t.starts_with("mapping("))
        return full(TypeCategory::mapping);
    if (t.starts_with("function("))
        return full(TypeCategory::function);
    if (t.ends_with("[]"))
        return full(TypeCategory::dynamic_array);
    if (t.ends_with("]"))
        return full(TypeCategory::static_array);
    if (t == "bool")
        return sized(TypeCategory::value, 1);
    if (t == "address" || t == "address payable")
        return sized(TypeCategory::address, 20);
    if (t == "string" || t == "bytes")
        return full(TypeCategory::string_or_bytes);
    if (detail::is_elementary_type_name(t)) {
        std::string n = detail::normalize_elementary(t);
        if (n.starts_with("uint"))
            return sized(TypeCategory::value, *numeric_suffix(std::string_view(n).substr(4)) / 8);
        if (n.starts_with("int"))
            return sized(TypeCategory::value, *numeric_suffix(std::string_view(n).substr(3)) / 8);
        if (n.starts_with("bytes"))
            return sized(TypeCategory::value, *numeric_suffix(std::string_view(n).substr(5)));
        std::string_view rest = std::string_view(n).substr(n.starts_with("ufixed") ? 6 : 5);
        auto bits = numeric_suffix(rest.substr(0, rest.find('x')));
        if (bits)
            return sized(TypeCategory::value, *bits / 8);
        return full(TypeCategory::unknown);
    }
    if (depth < 8) {
        for (const std::string& key : {t, last_segment(t)}) {
            if (auto it = u.value_type_aliases.find(key); it != u.value_type_aliases.end())
                return bind(it->second, u, depth + 1);
        }
    }
    if (const Entity* e = u.find(last_segment(t)); e && e->kind != EntityKind::library)
        return sized(TypeCategory::contract_ref, 20);
    if (u.enum_names.contains(t) || u.enum_names.contains(last_segment(t)))
        return sized(TypeCategory::enumeration, 1);
    if (u.struct_names.contains(t) || u.struct_names.contains(last_segment(t)))
        return full(TypeCategory::structure);
    return full(TypeCategory::unknown);
}

class Linearizer {
public:
    explicit Linearizer(const Universe& u) : u_(u) {}

    std::vector<const Entity*> order;
    std::vector<std::string> unresolved;

    void visit(const Entity& e)
    {
        if (on_stack_.contains(e.name))
            throw FlattenError(fmt::format("inheritance cycle through {}", e.name));
        if (done_.contains(e.name))
            return;
        on_stack_.insert(e.name);
        for (const auto& base : e.bases) {
            const Entity* b = u_.find(last_segment(base));
            if (!b || b->kind == EntityKind::library) {
                if (std::find(unresolved.begin(), unresolved.end(), base) == unresolved.end())
                    unresolved.push_back(base);
                continue;
            }
            visit(*b);
        }
        on_stack_.erase(e.name);
        done_.insert(e.name);
        order.push_back(&e);
    }

private:
    const Universe& u_;
    std::set<std::string> on_stack_;
    std::set<std::string> done_;
};

}  // namespace

Universe Universe::of(const ParsedProject& project)
{
    Universe u = of(project.entities);
    u.struct_names.insert(project.struct_names.begin(), project.struct_names.end());
    u.enum_names.insert(project.enum_names.begin(), project.enum_names.end());
    for (const auto& kv : project.value_type_aliases)
        u.value_type_aliases.insert(kv);
    u.import_graph = project.import_graph;
    return u;
}

Universe Universe::of(const std::vector<Entity>& entities)
{
    Universe u;
    for (const auto& e : entities) {
        u.entities.emplace(e.name, &e);
        for (const auto& s : e.struct_names) {
            u.struct_names.insert(s);
            u.struct_names.insert(e.name + "." + s);
        }
        for (const auto& s : e.enum_names) {
            u.enum_names.insert(s);
            u.enum_names.insert(e.name + "." + s);
        }
        for (const auto& [alias, underlying] : e.value_type_aliases) {
            u.value_type_aliases.emplace(alias, underlying);
            u.value_type_aliases.emplace(e.name + "." + alias, underlying);
        }
    }
    return u;
}

const Entity* Universe::find(const std::string& name) const
{
    auto it = entities.find(name);
    return it == entities.end() ? nullptr : it->second;
}

std::set<std::string> Universe::import_closure(const std::string& file) const
{
    std::set<std::string> seen{file};
    std::deque<std::string> pending{file};
    while (!pending.empty()) {
        auto it = import_graph.find(pending.front());
        pending.pop_front();
        if (it == import_graph.end())
            continue;
        for (const auto& next : it->second)
            if (seen.insert(next).second)
                pending.push_back(next);
    }
    return seen;
}

TypeBinding bind_type(const std::string& declared_type, const Universe& universe)
{
    return bind(declared_type, universe, 0);
}

Entity FlattenedEntity::as_entity() const
{
    Entity e = entity;
    e.bases.clear();
    e.state_vars = all_state_vars;
    e.functions = all_functions;
    e.modifiers = all_modifiers;
    e.events = all_events;
    e.using_directives = using_directives;
    return e;
}

FlattenedEntity flatten(const Entity& entity, const Universe& universe)
{
    Linearizer lin(universe);
    lin.visit(entity);

    FlattenedEntity flat;
    flat.entity = entity;
    flat.unresolved_bases = lin.unresolved;

    std::map<std::string, std::size_t> fn_index;
    std::map<std::string, std::size_t> mod_index;
    std::set<std::string> event_names;
    std::set<std::string> unknown;

    for (const Entity* e : lin.order) {
        bool is_self = e == &entity;
        flat.linearization.push_back(e->name);
        for (StateVar v : e->state_vars) {
            TypeBinding b = bind_type(v.declared_type, universe);
            v.category = b.category;
            v.size = b.size;
            if (b.category == TypeCategory::unknown && unknown.insert(v.declared_type).second)
                flat.unknown_types.push_back(v.declared_type);
            flat.all_state_vars.push_back(std::move(v));
        }
        for (const auto& f : e->functions) {
            std::string sig = f.signature();
            if (!is_self && !f.has_body)
                flat.inherited_declarations.insert(sig);
            auto it = fn_index.find(sig);
            if (it == fn_index.end()) {
                fn_index.emplace(sig, flat.all_functions.size());
                flat.all_functions.push_back(f);
            } else if (f.has_body || !flat.all_functions[it->second].has_body) {
                flat.all_functions[it->second] = f;
            }
        }
        for (const auto& m : e->modifiers) {
            auto it = mod_index.find(m.name);
            if (it == mod_index.end()) {
                mod_index.emplace(m.name, flat.all_modifiers.size());
                flat.all_modifiers.push_back(m);
            } else if (m.has_body || !flat.all_modifiers[it->second].has_body) {
                flat.all_modifiers[it->second] = m;
            }
        }
        for (const auto& ev : e->events)
            if (event_names.insert(ev.name).second)
                flat.all_events.push_back(ev);
        for (const auto& u : e->using_directives)
            if (std::find(flat.using_directives.begin(), flat.using_directives.end(), u) == flat.using_directives.end())
                flat.using_directives.push_back(u);
    }

    // public state variables provide getters that implement same-named declarations
    std::set<std::string> getters;
    for (const auto& v : flat.all_state_vars)
        if (v.visibility == Visibility::public_)
            getters.insert(v.name);
    for (const auto& sig : flat.inherited_declarations) {
        const FunctionDef& f = flat.all_functions[fn_index.at(sig)];
        if (!f.has_body && !getters.contains(f.name))
            flat.inherited_unimplemented.push_back(sig);
    }

    std::set<std::string> closure = universe.import_closure(entity.file_path);
    for (const auto& [name, e] : universe.entities) {
        if (e->kind != EntityKind::library || !closure.contains(e->file_path))
            continue;
        auto& fns = flat.reachable_libraries[name];
        for (const auto& f : e->functions)
            fns.insert(f.name);
    }
    return flat;
}

StorageLayout compute_layout(const FlattenedEntity& flat)
{
    StorageLayout layout;
    for (const auto& v : flat.all_state_vars) {
        if (v.mutability != VarMutability::plain)
            continue;
        if (v.category == TypeCategory::unknown
            && std::find(layout.unknown_types.begin(), layout.unknown_types.end(), v.declared_type)
                   == layout.unknown_types.end())
            layout.unknown_types.push_back(v.declared_type);
        int size = v.size.is_full_slot() ? 32 : v.size.bytes;
        bool fits = !layout.slots.empty() && !v.size.is_full_slot() && layout.slots.back().free_bytes >= size;
        if (!fits) {
            StorageSlot slot;
            slot.index = static_cast<int>(layout.slots.size());
            layout.slots.push_back(std::move(slot));
        }
        StorageSlot& slot = layout.slots.back();
        slot.occupants.push_back(SlotOccupant{v, 32 - slot.free_bytes});
        slot.free_bytes -= size;
        // nothing may share a slot with a full-slot variable
        if (v.size.is_full_slot())
            slot.free_bytes = 0;
    }
    return layout;
}

std::vector<const FunctionDef*> quantification_domain(const FlattenedEntity& flat, PatternId pattern)
{
    std::vector<const FunctionDef*> domain;
    for (const auto& f : flat.all_functions) {
        if (f.special == FunctionSpecial::constructor)
            continue;
        if (pattern == PatternId::Emitter && !f.has_body)
            continue;
        domain.push_back(&f);
    }
    return domain;
}

}  // namespace micropat
