#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "micropat/catalog.hpp"
#include "micropat/detectors.hpp"

namespace micropat {

// Counts only analyzed (non-skipped) rows whose kind is eligible.
std::size_t frequency(const PatternMatrix& matrix, PatternId pattern);
std::size_t eligible_count(const PatternMatrix& matrix, PatternId pattern);
// Same quantity from a per-kind tally; used to audit eligible_count.
std::size_t eligible_count_by_kind(const PatternMatrix& matrix, PatternId pattern);

// nullopt when no entity is eligible.
std::optional<double> coverage(const PatternMatrix& matrix, PatternId pattern);
// nullopt when the corpus has no matches at all.
std::optional<double> prevalence(const PatternMatrix& matrix, PatternId pattern);

struct AggregateStats {
    double mean = 0;
    double sigma = 0;  // population standard deviation
    double median = 0;
};

// Throws std::invalid_argument on an empty input.
AggregateStats aggregate_coverage(const std::vector<double>& coverages);

struct ProjectDistribution {
    std::map<std::string, std::size_t> distinct_patterns;  // project_id -> count
    double mean = 0;
    double median = 0;
    double sigma = 0;
    double any_pattern_rate = 0;  // fraction of projects with at least one pattern
};

ProjectDistribution patterns_per_project(const PatternMatrix& matrix);

struct PatternMetrics {
    std::size_t frequency = 0;
    std::size_t eligible = 0;
    std::optional<double> coverage;
    std::optional<double> prevalence;
};

struct CorpusMetrics {
    std::string label;
    std::size_t analyzed = 0;
    std::size_t skipped = 0;
    std::size_t total_frequency = 0;
    std::array<PatternMetrics, kPatternCount> patterns;
    ProjectDistribution per_project;
};

CorpusMetrics corpus_metrics(const std::string& label, const PatternMatrix& matrix);

struct MetricsReport {
    std::vector<CorpusMetrics> corpora;
    // cross-corpus statistics of coverage in percent; nullopt when no corpus defines it
    std::array<std::optional<AggregateStats>, kPatternCount> totals;
};

MetricsReport build_report(const std::vector<std::pair<std::string, PatternMatrix>>& corpora);

// Two decimals, half-up: 0.013279 -> "1.33%"; nullopt -> "n/a".
std::string format_percent(std::optional<double> fraction);
// Two decimals, half-up, no unit.
std::string format_fixed2(double value);

std::string render_report(const MetricsReport& report);
nlohmann::ordered_json report_to_json(const MetricsReport& report);

}  // namespace micropat
