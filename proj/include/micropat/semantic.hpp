#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "micropat/catalog.hpp"
#include "micropat/frontend.hpp"
#include "micropat/model.hpp"

namespace micropat {

class FlattenError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Everything a single entity may refer to: the parsed entities of its project
// plus the project's type names and import graph.
struct Universe {
    std::map<std::string, const Entity*> entities;  // by name, first declaration wins
    std::set<std::string> struct_names;
    std::set<std::string> enum_names;
    std::map<std::string, std::string> value_type_aliases;
    std::map<std::string, std::set<std::string>> import_graph;  // keyed like Entity::file_path

    // Pointers refer into `project.entities`, which must outlive the universe.
    static Universe of(const ParsedProject& project);
    static Universe of(const std::vector<Entity>& entities);

    const Entity* find(const std::string& name) const;
    // Files reachable from `file` through imports, `file` included.
    std::set<std::string> import_closure(const std::string& file) const;
};

struct TypeBinding {
    TypeCategory category = TypeCategory::unknown;
    SlotSize size;
};

// Category and storage size of a declared type. Unknown names bind to a
// full slot with category unknown.
TypeBinding bind_type(const std::string& declared_type, const Universe& universe);

struct FlattenedEntity {
    Entity entity;
    std::vector<std::string> linearization;  // most-base-first, ends with the entity itself
    std::vector<StateVar> all_state_vars;    // bases first, bound to categories and sizes
    std::vector<FunctionDef> all_functions;
    std::vector<ModifierDef> all_modifiers;
    std::vector<EventDef> all_events;
    std::vector<std::string> inherited_unimplemented;
    // bodiless signatures declared by any base, implemented or not
    std::set<std::string> inherited_declarations;
    std::vector<UsingDirective> using_directives;
    // library name -> its function names, for libraries declared in the
    // entity's file or in a file it (transitively) imports
    std::map<std::string, std::set<std::string>> reachable_libraries;
    std::vector<std::string> unresolved_bases;
    std::vector<std::string> unknown_types;

    // The flattened members as a base-less entity.
    Entity as_entity() const;
};

// Throws FlattenError on an inheritance cycle.
FlattenedEntity flatten(const Entity& entity, const Universe& universe);

struct SlotOccupant {
    StateVar var;
    int offset = 0;

    friend bool operator==(const SlotOccupant&, const SlotOccupant&) = default;
};

struct StorageSlot {
    int index = 0;
    std::vector<SlotOccupant> occupants;
    int free_bytes = 32;

    friend bool operator==(const StorageSlot&, const StorageSlot&) = default;
};

struct StorageLayout {
    std::vector<StorageSlot> slots;
    std::vector<std::string> unknown_types;
};

StorageLayout compute_layout(const FlattenedEntity& flat);

// Functions a universally quantified pattern ranges over: all flattened
// functions except constructors; Emitter additionally keeps only bodied ones.
std::vector<const FunctionDef*> quantification_domain(const FlattenedEntity& flat, PatternId pattern);

}  // namespace micropat
