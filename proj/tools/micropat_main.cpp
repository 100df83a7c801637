#include <iostream>

#include <CLI11.hpp>

#include "micropat/cli.hpp"

int main(int argc, char** argv)
{
    using namespace micropat;

    CLI::App app{"Solidity micro-pattern detector and corpus statistics"};
    app.require_subcommand(1);

    ScanOptions scan;
    std::string remap, scan_out, format = "csv";
    auto* scan_cmd = app.add_subcommand("scan", "detect patterns in a corpus of projects");
    scan_cmd->add_option("root", scan.root, "corpus root, one project per subdirectory")->required();
    scan_cmd->add_option("--remap", remap, "import remapping file");
    scan_cmd->add_option("--out", scan_out, "matrix output file");
    scan_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    scan_cmd->add_option("--jobs", scan.jobs)->check(CLI::PositiveNumber);

    std::vector<std::string> metric_inputs;
    std::string metrics_out;
    bool metrics_json = false;
    auto* metrics_cmd = app.add_subcommand("metrics", "frequency, coverage and prevalence per corpus");
    metrics_cmd->add_option("matrices", metric_inputs, "label=matrix pairs")->required();
    metrics_cmd->add_option("--out", metrics_out);
    metrics_cmd->add_flag("--json", metrics_json);

    StatsOptions stats;
    std::vector<std::string> stats_inputs;
    std::string stats_out;
    std::uint64_t seed = 0;
    auto* stats_cmd = app.add_subcommand("stats", "pattern relationships and cross-corpus tests");
    stats_cmd->add_option("matrices", stats_inputs, "label=matrix pairs")->required();
    stats_cmd->add_flag("--phi", stats.phi);
    stats_cmd->add_flag("--chi2", stats.chi2);
    stats_cmd->add_flag("--spearman", stats.spearman);
    stats_cmd->add_flag("--mantel", stats.mantel);
    stats_cmd->add_option("--permutations", stats.permutations);
    auto* seed_opt = stats_cmd->add_option("--seed", seed);
    stats_cmd->add_option("--out", stats_out);

    PowerOptions power;
    auto* power_cmd = app.add_subcommand("power", "minimum sample size for a chi-square test");
    power_cmd->add_option("--w", power.w)->required();
    power_cmd->add_option("--alpha", power.alpha)->required();
    power_cmd->add_option("--power", power.power)->required();
    power_cmd->add_option("--df", power.df)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    try {
        if (*scan_cmd) {
            if (!remap.empty())
                scan.remap_file = remap;
            if (!scan_out.empty())
                scan.out = scan_out;
            scan.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
            return cmd_scan(scan, std::cout, std::cerr);
        }
        if (*metrics_cmd) {
            MetricsOptions m;
            for (const auto& a : metric_inputs)
                m.inputs.push_back(parse_labeled_matrix(a));
            if (!metrics_out.empty())
                m.out = metrics_out;
            m.json = metrics_json;
            return cmd_metrics(m, std::cout, std::cerr);
        }
        if (*stats_cmd) {
            for (const auto& a : stats_inputs)
                stats.inputs.push_back(parse_labeled_matrix(a));
            if (!stats_out.empty())
                stats.out = stats_out;
            if (seed_opt->count() > 0)
                stats.seed = seed;
            return cmd_stats(stats, std::cout, std::cerr);
        }
        return cmd_power(power, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
}
