#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "micropat/corpus.hpp"
#include "micropat/detectors.hpp"
#include "micropat/frontend.hpp"

namespace micropat {

struct ProjectAnalysis {
    std::vector<FlattenedEntity> entities;
    std::vector<SkippedEntity> skipped;
    std::vector<ParseIssue> issues;
};

// parse -> flatten for one ingested project. Entities declared in files
// outside the project directory serve only as dependencies and get no row.
ProjectAnalysis analyze_project(const ProjectRecord& project);

struct ScanResult {
    std::vector<ProjectRecord> projects;
    IngestSummary summary;
    PatternMatrix matrix;
    std::vector<ParseIssue> issues;
    std::vector<SkippedEntity> skipped;
};

// ingest -> parse -> flatten -> detect over a corpus root. Failed projects
// contribute no rows. `jobs` bounds the number of worker threads.
ScanResult scan_corpus(const std::filesystem::path& root, const std::vector<RemapRule>& remaps,
                       const std::string& corpus_label = {}, unsigned jobs = 1);

}  // namespace micropat
