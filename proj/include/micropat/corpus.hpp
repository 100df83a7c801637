#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "micropat/version.hpp"

namespace micropat {

namespace fs = std::filesystem;

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProjectStatus { parsed, failed };

struct ResolvedImport {
    std::string from_file;    // importing file, relative to the project root
    std::string import_path;  // the string literal in the import directive
    std::string target_file;  // resolved file, relative to the project root when inside it

    friend bool operator==(const ResolvedImport&, const ResolvedImport&) = default;
};

struct ProjectRecord {
    std::string project_id;
    std::string corpus_label;
    fs::path root;                   // project directory
    std::vector<std::string> files;  // relative to `root`, lexicographic
    std::vector<ResolvedImport> resolved_imports;
    std::vector<std::string> pragma_constraints;  // one per pragma directive, file order
    std::string pragma_range;                     // constraints joined with a space
    bool has_import_cycle = false;
    ProjectStatus status = ProjectStatus::parsed;
    std::optional<std::string> failure_reason;

    friend bool operator==(const ProjectRecord&, const ProjectRecord&) = default;
};

struct RemapRule {
    std::string prefix;
    fs::path target;

    friend bool operator==(const RemapRule&, const RemapRule&) = default;
};

// One rule per `prefix=target` line; blank lines and `#` comments skipped.
std::vector<RemapRule> parse_remaps(const std::string& text);
std::vector<RemapRule> load_remap_file(const fs::path& path);

// One record per immediate subdirectory holding at least one `.sol` file
// (searched recursively). Throws IngestError when `root` is unreadable.
std::vector<ProjectRecord> discover_projects(const fs::path& root, const std::string& corpus_label = {});

// Maps every import directive (transitively) to a file. Resolution order:
// relative to the importing file, longest-prefix remap, project-root
// relative. Files reached outside the project directory are appended to
// `files` under their absolute path.
ProjectRecord resolve_imports(ProjectRecord project, const std::vector<RemapRule>& remaps);

// Minimum version satisfying all of the project's pragmas; nullopt when the
// project has no recognizable pragma. Throws IngestError on a conflict.
std::optional<Version> minimum_compiler_version(const ProjectRecord& project);

// Stable sort by minimum compatible compiler version, pragma-less projects
// last, ties by project_id. Projects with contradictory pragmas are marked
// failed with reason "pragma conflict".
std::vector<ProjectRecord> order_by_pragma(std::vector<ProjectRecord> projects);

struct IngestSummary {
    std::size_t total = 0;
    std::size_t parsed = 0;
    std::size_t failed = 0;
    std::map<std::string, std::size_t> failure_categories;
    std::map<std::string, std::string> failures;  // project_id -> reason

    // "93.00%" or "n/a" for an empty corpus
    std::string success_rate() const;
    std::string render() const;
};

IngestSummary ingest_report(const std::vector<ProjectRecord>& projects);

// discover -> resolve -> order, the full ingestion pass.
std::vector<ProjectRecord> ingest_corpus(const fs::path& root, const std::vector<RemapRule>& remaps,
                                         const std::string& corpus_label = {});

}  // namespace micropat
