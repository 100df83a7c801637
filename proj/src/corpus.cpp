#include "micropat/corpus.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "micropat/lexer.hpp"

namespace micropat {

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

bool read_text(const fs::path& path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        return false;
    out = ss.str();
    return true;
}

bool is_regular(const fs::path& p)
{
    std::error_code ec;
    return fs::is_regular_file(p, ec);
}

// Relative to `root` when the path lies inside it, absolute otherwise.
std::string project_relative(const fs::path& root, const fs::path& p)
{
    fs::path rel = p.lexically_normal().lexically_relative(root.lexically_normal());
    if (!rel.empty() && *rel.begin() != "..")
        return rel.generic_string();
    return p.lexically_normal().generic_string();
}

fs::path absolute_in(const fs::path& root, const std::string& file)
{
    fs::path p(file);
    return p.is_absolute() ? p : root / p;
}

const RemapRule* longest_prefix(const std::vector<RemapRule>& remaps, const std::string& import)
{
    const RemapRule* best = nullptr;
    for (const auto& rule : remaps) {
        if (!rule.prefix.empty() && import.starts_with(rule.prefix)
            && (!best || rule.prefix.size() > best->prefix.size()))
            best = &rule;
    }
    return best;
}

std::string failure_category(const std::string& reason)
{
    auto colon = reason.find(':');
    return colon == std::string::npos ? reason : reason.substr(0, colon);
}

}  // namespace

std::vector<RemapRule> parse_remaps(const std::string& text)
{
    std::vector<RemapRule> rules;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::string body = trim(line);
        if (body.empty())
            continue;
        auto eq = body.find('=');
        if (eq == std::string::npos || eq == 0)
            throw IngestError(fmt::format("remap line {}: expected prefix=target", line_no));
        rules.push_back(RemapRule{trim(body.substr(0, eq)), fs::path(trim(body.substr(eq + 1)))});
    }
    return rules;
}

std::vector<RemapRule> load_remap_file(const fs::path& path)
{
    std::string text;
    if (!read_text(path, text))
        throw IngestError(fmt::format("cannot read remap file {}", path.string()));
    return parse_remaps(text);
}

std::vector<ProjectRecord> discover_projects(const fs::path& root, const std::string& corpus_label)
{
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw IngestError(fmt::format("corpus root {} is not a readable directory", root.string()));
    fs::directory_iterator it(root, ec);
    if (ec)
        throw IngestError(fmt::format("cannot read corpus root {}: {}", root.string(), ec.message()));

    std::vector<fs::path> subdirs;
    for (; it != fs::directory_iterator(); it.increment(ec)) {
        if (ec)
            throw IngestError(fmt::format("cannot read corpus root {}: {}", root.string(), ec.message()));
        std::error_code type_ec;
        if (it->is_directory(type_ec))
            subdirs.push_back(it->path());
    }
    std::sort(subdirs.begin(), subdirs.end());

    std::vector<ProjectRecord> projects;
    for (const auto& dir : subdirs) {
        ProjectRecord rec;
        rec.project_id = dir.filename().string();
        rec.corpus_label = corpus_label;
        rec.root = dir;

        std::error_code walk_ec;
        fs::recursive_directory_iterator walk(dir, walk_ec);
        std::string walk_error = walk_ec ? walk_ec.message() : std::string{};
        if (!walk_ec) {
            for (; walk != fs::recursive_directory_iterator(); walk.increment(walk_ec)) {
                if (walk_ec) {
                    walk_error = walk_ec.message();
                    break;
                }
                std::error_code type_ec;
                if (walk->is_regular_file(type_ec) && walk->path().extension() == ".sol")
                    rec.files.push_back(walk->path().lexically_relative(dir).generic_string());
            }
        }
        std::sort(rec.files.begin(), rec.files.end());
        if (!walk_error.empty()) {
            rec.status = ProjectStatus::failed;
            rec.failure_reason = "unreadable directory: " + walk_error;
        } else if (rec.files.empty()) {
            continue;
        }
        projects.push_back(std::move(rec));
    }
    return projects;
}

ProjectRecord resolve_imports(ProjectRecord project, const std::vector<RemapRule>& remaps)
{
    if (project.status == ProjectStatus::failed)
        return project;
    if (project.files.empty()) {
        project.status = ProjectStatus::failed;
        project.failure_reason = "no source files";
        return project;
    }

    const fs::path& root = project.root;
    std::set<std::string> known(project.files.begin(), project.files.end());
    std::deque<std::string> pending(project.files.begin(), project.files.end());
    std::map<std::string, SourceDirectives> directives;
    std::vector<ResolvedImport> resolved;

    auto fail = [&](std::string reason) {
        project.status = ProjectStatus::failed;
        project.failure_reason = std::move(reason);
        return project;
    };

    while (!pending.empty()) {
        std::string file = pending.front();
        pending.pop_front();
        if (directives.contains(file))
            continue;
        fs::path abs = absolute_in(root, file);
        std::string text;
        if (!read_text(abs, text))
            return fail("unreadable file: " + file);
        try {
            directives[file] = scan_directives(text);
        } catch (const LexError& e) {
            return fail(fmt::format("lex error: {}:{}: {}", file, e.line(), e.what()));
        }
        for (const auto& imp : directives[file].imports) {
            std::vector<fs::path> candidates;
            candidates.push_back(abs.parent_path() / imp);
            if (const RemapRule* rule = longest_prefix(remaps, imp)) {
                fs::path target = rule->target.is_absolute() ? rule->target : root / rule->target;
                candidates.push_back(target / imp.substr(rule->prefix.size()));
            }
            candidates.push_back(root / imp);

            auto hit = std::find_if(candidates.begin(), candidates.end(), [](const fs::path& p) { return is_regular(p); });
            if (hit == candidates.end())
                return fail("unresolved import: " + imp);
            std::string target = project_relative(root, *hit);
            resolved.push_back(ResolvedImport{file, imp, target});
            if (known.insert(target).second) {
                project.files.push_back(target);
                pending.push_back(target);
            }
        }
    }

    std::sort(project.files.begin(), project.files.end());
    std::sort(resolved.begin(), resolved.end(), [](const ResolvedImport& a, const ResolvedImport& b) {
        return std::tie(a.from_file, a.import_path) < std::tie(b.from_file, b.import_path);
    });
    resolved.erase(std::unique(resolved.begin(), resolved.end()), resolved.end());
    project.resolved_imports = std::move(resolved);

    project.pragma_constraints.clear();
    for (const auto& file : project.files)
        for (const auto& p : directives[file].solidity_pragmas)
            project.pragma_constraints.push_back(p);
    project.pragma_range.clear();
    for (const auto& p : project.pragma_constraints) {
        if (!project.pragma_range.empty())
            project.pragma_range += ' ';
        project.pragma_range += p;
    }

    // Cycles are legal in Solidity; only note them.
    std::map<std::string, std::vector<std::string>> graph;
    for (const auto& r : project.resolved_imports)
        graph[r.from_file].push_back(r.target_file);
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    bool cycle = false;
    std::function<void(const std::string&)> dfs = [&](const std::string& node) {
        state[node] = 1;
        for (const auto& next : graph[node]) {
            if (state[next] == 1)
                cycle = true;
            else if (state[next] == 0)
                dfs(next);
        }
        state[node] = 2;
    };
    for (const auto& file : project.files)
        if (state[file] == 0)
            dfs(file);
    project.has_import_cycle = cycle;
    return project;
}

std::optional<Version> minimum_compiler_version(const ProjectRecord& project)
{
    std::optional<VersionRange> combined;
    for (const auto& constraint : project.pragma_constraints) {
        auto range = parse_constraint(constraint);
        if (!range)
            continue;
        combined = combined ? combined->intersect(*range) : *range;
    }
    if (!combined)
        return std::nullopt;
    auto min = combined->minimum();
    if (!min)
        throw IngestError("pragma conflict");
    return min;
}

std::vector<ProjectRecord> order_by_pragma(std::vector<ProjectRecord> projects)
{
    struct Keyed {
        std::optional<Version> version;
        ProjectRecord project;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(projects.size());
    for (auto& p : projects) {
        std::optional<Version> v;
        if (p.status == ProjectStatus::parsed) {
            try {
                v = minimum_compiler_version(p);
            } catch (const IngestError&) {
                p.status = ProjectStatus::failed;
                p.failure_reason = "pragma conflict";
            }
        }
        keyed.push_back(Keyed{v, std::move(p)});
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.version.has_value() != b.version.has_value())
            return a.version.has_value();
        if (a.version && *a.version != *b.version)
            return *a.version < *b.version;
        return a.project.project_id < b.project.project_id;
    });
    std::vector<ProjectRecord> out;
    out.reserve(keyed.size());
    for (auto& k : keyed)
        out.push_back(std::move(k.project));
    return out;
}

std::string IngestSummary::success_rate() const
{
    if (total == 0)
        return "n/a";
    // hundredths of a percent, rounded half-up in integer arithmetic
    std::size_t scaled = (parsed * 20000 + total) / (2 * total);
    return fmt::format("{}.{:02}%", scaled / 100, scaled % 100);
}

std::string IngestSummary::render() const
{
    std::string out;
    out += fmt::format("projects: {}\nparsed: {}\nfailed: {}\nsuccess rate: {}\n", total, parsed, failed, success_rate());
    if (!failure_categories.empty()) {
        out += "failure categories:\n";
        for (const auto& [category, count] : failure_categories)
            out += fmt::format("  {}: {}\n", category, count);
        out += "failures:\n";
        for (const auto& [id, reason] : failures)
            out += fmt::format("  {}: {}\n", id, reason);
    }
    return out;
}

IngestSummary ingest_report(const std::vector<ProjectRecord>& projects)
{
    IngestSummary s;
    s.total = projects.size();
    for (const auto& p : projects) {
        if (p.status == ProjectStatus::parsed) {
            ++s.parsed;
            continue;
        }
        ++s.failed;
        std::string reason = p.failure_reason.value_or("unknown");
        ++s.failure_categories[failure_category(reason)];
        s.failures[p.project_id] = reason;
    }
    return s;
}

std::vector<ProjectRecord> ingest_corpus(const fs::path& root, const std::vector<RemapRule>& remaps,
                                         const std::string& corpus_label)
{
    auto projects = discover_projects(root, corpus_label);
    for (auto& p : projects)
        p = resolve_imports(std::move(p), remaps);
    return order_by_pragma(std::move(projects));
}

}  // namespace micropat
