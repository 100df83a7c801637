#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "micropat/frontend.hpp"
#include "micropat/lexer.hpp"

namespace micropat {

namespace {

std::string entity_path(const std::string& project_id, const std::string& rel)
{
    if (project_id.empty() || (!rel.empty() && rel.front() == '/'))
        return rel;
    return project_id + "/" + rel;
}

struct LoadedFile {
    std::string key;  // path as it appears in Entity::file_path
    std::string text;
};

ParsedProject parse_loaded(const std::string& project_id, const std::vector<LoadedFile>& files,
                           const std::string& fallback_pragma)
{
    ParsedProject out;
    out.project_id = project_id;

    std::vector<SourceUnit> units;
    units.reserve(files.size());
    for (const auto& f : files) {
        try {
            units.push_back(parse_source(f.text, f.key));
        } catch (const LexError& e) {
            out.issues.push_back(ParseIssue{f.key, e.line(), "", fmt::format("lex error: {}", e.what())});
        } catch (const ParseError& e) {
            out.issues.push_back(ParseIssue{f.key, e.line(), "", fmt::format("parse error: {}", e.what())});
        }
    }

    ProjectSymbols symbols;
    for (const auto& u : units)
        symbols.add(u);
    out.struct_names = symbols.struct_names;
    out.enum_names = symbols.enum_names;
    out.value_type_aliases = symbols.value_type_aliases;

    std::set<std::string> seen;
    for (auto& u : units) {
        for (auto& syn : u.entities) {
            Entity& e = syn.entity;
            e.project_id = project_id;
            if (e.compiler_version.empty())
                e.compiler_version = u.pragma.empty() ? fallback_pragma : u.pragma;
            if (!seen.insert(e.name).second)
                out.issues.push_back(ParseIssue{u.file_path, 0, e.name, "duplicate entity name"});
            extract_facts(syn, symbols);
        }
        for (auto& failed : u.failed)
            out.failed.push_back(failed);
        for (auto& issue : u.issues)
            out.issues.push_back(issue);
    }
    for (auto& u : units)
        for (auto& syn : u.entities)
            out.entities.push_back(syn.entity);
    return out;
}

}  // namespace

ParsedProject parse_project(const ProjectRecord& project)
{
    std::vector<LoadedFile> files;
    ParsedProject unreadable;
    for (const auto& rel : project.files) {
        fs::path p(rel);
        fs::path abs = p.is_absolute() ? p : project.root / p;
        std::ifstream in(abs, std::ios::binary);
        if (!in) {
            unreadable.issues.push_back(ParseIssue{entity_path(project.project_id, rel), 0, "", "unreadable file"});
            continue;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        files.push_back(LoadedFile{entity_path(project.project_id, rel), ss.str()});
    }
    ParsedProject out = parse_loaded(project.project_id, files, project.pragma_range);
    out.issues.insert(out.issues.begin(), unreadable.issues.begin(), unreadable.issues.end());
    for (const auto& r : project.resolved_imports)
        out.import_graph[entity_path(project.project_id, r.from_file)].insert(
            entity_path(project.project_id, r.target_file));
    return out;
}

ParsedProject parse_sources(const std::string& project_id, const std::map<std::string, std::string>& sources)
{
    std::vector<LoadedFile> files;
    for (const auto& [rel, text] : sources)
        files.push_back(LoadedFile{entity_path(project_id, rel), text});
    ParsedProject out = parse_loaded(project_id, files, "");
    for (const auto& [rel, text] : sources) {
        SourceDirectives d;
        try {
            d = scan_directives(text);
        } catch (const LexError&) {
            continue;
        }
        fs::path dir = fs::path(rel).parent_path();
        for (const auto& imp : d.imports) {
            for (const fs::path& cand : {(dir / imp).lexically_normal(), fs::path(imp).lexically_normal()}) {
                if (sources.contains(cand.generic_string())) {
                    out.import_graph[entity_path(project_id, rel)].insert(
                        entity_path(project_id, cand.generic_string()));
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace micropat
