#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "micropat/ast.hpp"
#include "micropat/corpus.hpp"
#include "micropat/model.hpp"

namespace micropat {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error(what), line_(line)
    {
    }
    int line() const { return line_; }

private:
    int line_;
};

struct ParseIssue {
    std::string file;
    int line = 0;
    std::string entity;  // empty for file-level problems
    std::string message;
};

// An entity that could not be parsed; still reported so that divergences
// from the reference toolchain stay visible.
struct FailedEntity {
    std::string name;
    EntityKind kind = EntityKind::contract;
    std::string file_path;
    std::string reason;
};

// Entity declarations plus the syntax trees of their bodies, parallel to
// entity.functions / entity.modifiers (null for bodiless members).
struct EntitySyntax {
    Entity entity;
    std::vector<ast::BlockPtr> function_bodies;
    std::vector<ast::BlockPtr> modifier_bodies;
};

struct SourceUnit {
    std::string file_path;
    std::string pragma;  // first `pragma solidity` constraint, if any
    std::vector<std::string> imports;
    std::vector<EntitySyntax> entities;
    std::vector<FailedEntity> failed;
    std::vector<std::string> struct_names;  // file-level
    std::vector<std::string> enum_names;
    std::vector<std::pair<std::string, std::string>> value_type_aliases;
    std::vector<ParseIssue> issues;
};

// Parses one file. Entity-level syntax errors are isolated: the entity goes
// to `failed` and parsing resumes after its closing brace. Throws ParseError
// or LexError only when the file as a whole cannot be tokenized or braced.
SourceUnit parse_source(std::string_view text, const std::string& file_path);

// Symbols visible across a project, used to classify identifiers and types.
struct ProjectSymbols {
    std::map<std::string, EntityKind> entity_kinds;
    std::map<std::string, std::set<std::string>> library_functions;
    std::set<std::string> struct_names;
    std::set<std::string> enum_names;
    std::map<std::string, std::string> value_type_aliases;
    std::map<std::string, const Entity*> entities;

    void add(const SourceUnit& unit);
    bool is_contract_type(const std::string& type_name) const;
    bool is_library(const std::string& name) const;
};

// Emits body facts for every function and modifier of `syntax.entity`,
// storing them on the members. Returns all facts in member order.
std::vector<SourceFact> extract_facts(EntitySyntax& syntax, const ProjectSymbols& symbols);

struct ParsedProject {
    std::string project_id;
    std::vector<Entity> entities;  // in (file, declaration) order
    std::vector<FailedEntity> failed;
    std::vector<ParseIssue> issues;
    // importing file -> imported files (project-relative paths)
    std::map<std::string, std::set<std::string>> import_graph;
    // type names visible anywhere in the project, file-level and entity-level
    std::set<std::string> struct_names;
    std::set<std::string> enum_names;
    std::map<std::string, std::string> value_type_aliases;
};

// Parses every file of a successfully ingested project and extracts facts.
ParsedProject parse_project(const ProjectRecord& project);

// Same, from in-memory sources keyed by project-relative path.
ParsedProject parse_sources(const std::string& project_id, const std::map<std::string, std::string>& sources);

// Prints declarations and bodies back as Solidity source. Re-parsing the
// output reproduces the same model.
std::string print_source(const SourceUnit& unit);

}  // namespace micropat
