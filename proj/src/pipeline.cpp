#include "micropat/pipeline.hpp"

#include <atomic>
#include <thread>

#include "micropat/semantic.hpp"

namespace micropat {

namespace {

bool inside_project(const std::string& entity_file, const std::string& project_id)
{
    return entity_file.starts_with(project_id + "/");
}

}  // namespace

ProjectAnalysis analyze_project(const ProjectRecord& project)
{
    ProjectAnalysis out;
    ParsedProject parsed = parse_project(project);
    out.issues = parsed.issues;
    Universe universe = Universe::of(parsed);
    for (const auto& e : parsed.entities) {
        if (!inside_project(e.file_path, project.project_id))
            continue;
        try {
            out.entities.push_back(flatten(e, universe));
        } catch (const FlattenError& err) {
            out.skipped.push_back(SkippedEntity{e.name, e.kind, e.file_path, e.compiler_version, err.what()});
            out.issues.push_back(ParseIssue{e.file_path, 0, e.name, err.what()});
        }
    }
    for (const auto& f : parsed.failed) {
        if (!inside_project(f.file_path, project.project_id))
            continue;
        out.skipped.push_back(SkippedEntity{f.name, f.kind, f.file_path, project.pragma_range, f.reason});
    }
    return out;
}

ScanResult scan_corpus(const std::filesystem::path& root, const std::vector<RemapRule>& remaps,
                       const std::string& corpus_label, unsigned jobs)
{
    ScanResult result;
    result.projects = ingest_corpus(root, remaps, corpus_label);
    result.summary = ingest_report(result.projects);

    std::vector<ProjectAnalysis> analyses(result.projects.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < result.projects.size(); i = next++)
            if (result.projects[i].status == ProjectStatus::parsed)
                analyses[i] = analyze_project(result.projects[i]);
    };
    unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(result.projects.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    std::vector<FlattenedEntity> all;
    for (auto& a : analyses) {
        for (auto& e : a.entities)
            all.push_back(std::move(e));
        result.skipped.insert(result.skipped.end(), a.skipped.begin(), a.skipped.end());
        result.issues.insert(result.issues.end(), a.issues.begin(), a.issues.end());
    }
    result.matrix = detect_all(all, result.skipped);
    return result;
}

}  // namespace micropat
