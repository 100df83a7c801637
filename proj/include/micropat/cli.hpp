#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace micropat {

enum class OutputFormat { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInsufficient = 2;

struct ScanOptions {
    std::string root;
    std::optional<std::string> remap_file;
    std::optional<std::string> out;  // stdout when absent
    OutputFormat format = OutputFormat::csv;
    unsigned jobs = 1;
};

struct LabeledMatrix {
    std::string label;
    std::string path;
};

// "label=path"; a bare path uses its stem as the label.
LabeledMatrix parse_labeled_matrix(const std::string& arg);

struct MetricsOptions {
    std::vector<LabeledMatrix> inputs;
    std::optional<std::string> out;
    bool json = false;
};

struct StatsOptions {
    std::vector<LabeledMatrix> inputs;
    bool phi = false;
    bool chi2 = false;
    bool spearman = false;
    bool mantel = false;
    std::size_t permutations = 9999;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

struct PowerOptions {
    double w = 0;
    double alpha = 0;
    double power = 0;
    int df = 1;
};

// Each returns an exit code; results go to `out` unless a file is named,
// diagnostics to `err`.
int cmd_scan(const ScanOptions& opts, std::ostream& out, std::ostream& err);
int cmd_metrics(const MetricsOptions& opts, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err);
int cmd_power(const PowerOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace micropat
