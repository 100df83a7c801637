#include "micropat/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace micropat {

namespace {

double median_of(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Rounds to two decimals, half away from zero; the tiny bias absorbs binary
// representation error in values such as 2.675.
long long hundredths(double value)
{
    double scaled = std::abs(value) * 100.0;
    auto r = static_cast<long long>(std::floor(scaled + 0.5 + 1e-9));
    return value < 0 ? -r : r;
}

nlohmann::ordered_json optional_number(std::optional<double> v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json("n/a");
}

}  // namespace

std::size_t frequency(const PatternMatrix& matrix, PatternId pattern)
{
    std::size_t n = 0;
    for (const auto& row : matrix.rows)
        if (!row.skipped && is_eligible(pattern, row.kind) && row.patterns[index_of(pattern)])
            ++n;
    return n;
}

std::size_t eligible_count(const PatternMatrix& matrix, PatternId pattern)
{
    return static_cast<std::size_t>(std::count_if(matrix.rows.begin(), matrix.rows.end(), [&](const MatrixRow& r) {
        return !r.skipped && is_eligible(pattern, r.kind);
    }));
}

std::size_t eligible_count_by_kind(const PatternMatrix& matrix, PatternId pattern)
{
    std::map<EntityKind, std::size_t> tally;
    for (const auto& row : matrix.rows)
        if (!row.skipped)
            ++tally[row.kind];
    std::size_t n = 0;
    for (const auto& [kind, count] : tally)
        if (is_eligible(pattern, kind))
            n += count;
    return n;
}

std::optional<double> coverage(const PatternMatrix& matrix, PatternId pattern)
{
    std::size_t eligible = eligible_count(matrix, pattern);
    if (eligible == 0)
        return std::nullopt;
    return static_cast<double>(frequency(matrix, pattern)) / static_cast<double>(eligible);
}

std::optional<double> prevalence(const PatternMatrix& matrix, PatternId pattern)
{
    std::size_t total = 0;
    for (PatternId id : all_patterns())
        total += frequency(matrix, id);
    if (total == 0)
        return std::nullopt;
    return static_cast<double>(frequency(matrix, pattern)) / static_cast<double>(total);
}

AggregateStats aggregate_coverage(const std::vector<double>& coverages)
{
    if (coverages.empty())
        throw std::invalid_argument("aggregate_coverage needs at least one corpus");
    double n = static_cast<double>(coverages.size());
    AggregateStats s;
    s.mean = std::accumulate(coverages.begin(), coverages.end(), 0.0) / n;
    double ss = 0;
    for (double c : coverages)
        ss += (c - s.mean) * (c - s.mean);
    s.sigma = std::sqrt(ss / n);
    s.median = median_of(coverages);
    return s;
}

ProjectDistribution patterns_per_project(const PatternMatrix& matrix)
{
    std::map<std::string, PatternRow> seen;
    for (const auto& row : matrix.rows) {
        if (row.skipped)
            continue;
        PatternRow& acc = seen[row.project_id()];
        for (PatternId id : all_patterns())
            if (is_eligible(id, row.kind) && row.patterns[index_of(id)])
                acc[index_of(id)] = true;
    }
    ProjectDistribution d;
    std::vector<double> counts;
    std::size_t any = 0;
    for (const auto& [project, acc] : seen) {
        auto n = static_cast<std::size_t>(std::count(acc.begin(), acc.end(), true));
        d.distinct_patterns[project] = n;
        counts.push_back(static_cast<double>(n));
        if (n > 0)
            ++any;
    }
    if (!counts.empty()) {
        AggregateStats s = aggregate_coverage(counts);
        d.mean = s.mean;
        d.median = s.median;
        d.sigma = s.sigma;
        d.any_pattern_rate = static_cast<double>(any) / static_cast<double>(counts.size());
    }
    return d;
}

CorpusMetrics corpus_metrics(const std::string& label, const PatternMatrix& matrix)
{
    CorpusMetrics m;
    m.label = label;
    m.analyzed = matrix.analyzed_count();
    m.skipped = matrix.rows.size() - m.analyzed;
    for (PatternId id : all_patterns()) {
        PatternMetrics& p = m.patterns[index_of(id)];
        p.frequency = frequency(matrix, id);
        p.eligible = eligible_count(matrix, id);
        if (p.eligible > 0)
            p.coverage = static_cast<double>(p.frequency) / static_cast<double>(p.eligible);
        m.total_frequency += p.frequency;
    }
    if (m.total_frequency > 0)
        for (auto& p : m.patterns)
            p.prevalence = static_cast<double>(p.frequency) / static_cast<double>(m.total_frequency);
    m.per_project = patterns_per_project(matrix);
    return m;
}

MetricsReport build_report(const std::vector<std::pair<std::string, PatternMatrix>>& corpora)
{
    MetricsReport r;
    for (const auto& [label, matrix] : corpora)
        r.corpora.push_back(corpus_metrics(label, matrix));
    for (PatternId id : all_patterns()) {
        std::vector<double> values;
        for (const auto& c : r.corpora)
            if (auto cov = c.patterns[index_of(id)].coverage)
                values.push_back(*cov * 100.0);
        if (!values.empty())
            r.totals[index_of(id)] = aggregate_coverage(values);
    }
    return r;
}

std::string format_fixed2(double value)
{
    long long h = hundredths(value);
    long long a = h < 0 ? -h : h;
    return fmt::format("{}{}.{:02d}", h < 0 ? "-" : "", a / 100, a % 100);
}

std::string format_percent(std::optional<double> fraction)
{
    if (!fraction)
        return "n/a";
    return format_fixed2(*fraction * 100.0) + "%";
}

std::string render_report(const MetricsReport& report)
{
    std::string out;
    std::string header = fmt::format("{:<13} {:<17}", "Category", "Pattern");
    for (const auto& c : report.corpora)
        header += fmt::format(" | {:>8} {:>8} {:>8}", c.label.substr(0, 8), "Cov.", "Prev.");
    header += " | Total Cov. Stats (%)";
    out += header + "\n";
    std::string sub = fmt::format("{:<13} {:<17}", "", "");
    for (std::size_t i = 0; i < report.corpora.size(); ++i)
        sub += fmt::format(" | {:>8} {:>8} {:>8}", "Freq.", "", "");
    out += sub + " | Mean±σ Median\n";
    for (PatternId id : all_patterns()) {
        std::string line = fmt::format("{:<13} {:<17}", to_string(pattern_category(id)), pattern_label(id));
        for (const auto& c : report.corpora) {
            const PatternMetrics& p = c.patterns[index_of(id)];
            line += fmt::format(" | {:>8} {:>8} {:>8}", p.frequency, format_percent(p.coverage),
                                format_percent(p.prevalence));
        }
        const auto& t = report.totals[index_of(id)];
        line += t ? fmt::format(" | {}±{} {}", format_fixed2(t->mean), format_fixed2(t->sigma), format_fixed2(t->median))
                  : std::string(" | n/a");
        out += line + "\n";
    }
    out += "\n";
    for (const auto& c : report.corpora) {
        const ProjectDistribution& d = c.per_project;
        out += fmt::format("{}: {} entities analyzed, {} skipped, {} projects; patterns per project mean {} median {} "
                           "sd {}; projects with a pattern {}\n",
                           c.label, c.analyzed, c.skipped, d.distinct_patterns.size(), format_fixed2(d.mean),
                           format_fixed2(d.median), format_fixed2(d.sigma),
                           d.distinct_patterns.empty() ? std::string("n/a") : format_percent(d.any_pattern_rate));
    }
    return out;
}

nlohmann::ordered_json report_to_json(const MetricsReport& report)
{
    nlohmann::ordered_json j;
    j["corpora"] = nlohmann::ordered_json::array();
    for (const auto& c : report.corpora) {
        nlohmann::ordered_json jc;
        jc["label"] = c.label;
        jc["analyzed"] = c.analyzed;
        jc["skipped"] = c.skipped;
        jc["total_frequency"] = c.total_frequency;
        for (PatternId id : all_patterns()) {
            const PatternMetrics& p = c.patterns[index_of(id)];
            jc["patterns"][std::string(pattern_name(id))] = {
                {"frequency", p.frequency},
                {"eligible", p.eligible},
                {"coverage", optional_number(p.coverage)},
                {"prevalence", optional_number(p.prevalence)},
            };
        }
        const ProjectDistribution& d = c.per_project;
        jc["per_project"] = {
            {"projects", d.distinct_patterns.size()},
            {"mean", d.mean},
            {"median", d.median},
            {"sigma", d.sigma},
            {"any_pattern_rate", d.distinct_patterns.empty() ? nlohmann::ordered_json("n/a") : nlohmann::ordered_json(d.any_pattern_rate)},
        };
        j["corpora"].push_back(std::move(jc));
    }
    for (PatternId id : all_patterns()) {
        const auto& t = report.totals[index_of(id)];
        j["totals"][std::string(pattern_name(id))] =
            t ? nlohmann::ordered_json{{"mean", t->mean}, {"sigma", t->sigma}, {"median", t->median}} : nlohmann::ordered_json("n/a");
    }
    return j;
}

}  // namespace micropat
