#include "micropat/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "micropat/corpus.hpp"
#include "micropat/matrix_io.hpp"
#include "micropat/metrics.hpp"
#include "micropat/pipeline.hpp"
#include "micropat/stats.hpp"

namespace micropat {

namespace {

namespace fs = std::filesystem;

void write_text(const std::optional<std::string>& path, const std::string& text, std::ostream& out)
{
    if (!path) {
        out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error(fmt::format("cannot open {} for writing", *path));
    f << text;
    if (!f)
        throw std::runtime_error(fmt::format("write to {} failed", *path));
}

std::vector<std::pair<std::string, PatternMatrix>> load_inputs(const std::vector<LabeledMatrix>& inputs)
{
    std::vector<std::pair<std::string, PatternMatrix>> out;
    for (const auto& in : inputs) {
        try {
            out.emplace_back(in.label, load_matrix(in.path));
        } catch (const MatrixFormatError& e) {
            throw std::runtime_error(fmt::format("{}:{}: {}", in.path, e.line(), e.what()));
        }
    }
    return out;
}

std::string fmt_opt(std::optional<double> v, int digits)
{
    return v ? fmt::format("{:.{}f}", *v, digits) : std::string("n/a");
}

std::string render_phi(const std::string& label, const PatternMatrix& matrix)
{
    CorrelationMatrix m = phi_matrix(matrix);
    std::string s = fmt::format("phi matrix [{}] ({} entities)\n", label, matrix.analyzed_count());
    s += fmt::format("{:<16}", "");
    for (PatternId id : all_patterns())
        s += fmt::format(" {:>6}", pattern_name(id).substr(0, 6));
    s += "\n";
    for (PatternId a : all_patterns()) {
        s += fmt::format("{:<16}", pattern_name(a));
        for (PatternId b : all_patterns())
            s += fmt::format(" {:>6}", fmt_opt(m.at(index_of(a), index_of(b)), 3));
        s += "\n";
    }
    s += fmt::format("pairs [{}]\n", label);
    for (std::size_t i = 0; i < kPatternCount; ++i)
        for (std::size_t j = i + 1; j < kPatternCount; ++j)
            s += fmt::format("  {} ~ {}: {} ({})\n", pattern_name(all_patterns()[i]), pattern_name(all_patterns()[j]),
                             fmt_opt(m.at(i, j), 3), to_string(m.strength(i, j)));
    return s;
}

std::string render_chi2(const std::vector<std::pair<std::string, PatternMatrix>>& corpora)
{
    std::map<std::string, PatternMatrix> by_label(corpora.begin(), corpora.end());
    std::string s = "pairwise chi-square tests\n";
    for (PatternId id : all_patterns()) {
        s += fmt::format("{}\n", pattern_name(id));
        for (const auto& t : pairwise_platform_tests(by_label, id)) {
            if (t.skipped) {
                s += fmt::format("  {} vs {}: skipped ({})\n", t.corpus_a, t.corpus_b, *t.skipped);
                continue;
            }
            const TestResult& r = t.result;
            s += fmt::format("  {} vs {}: chi2={} p={} V={} alpha={:.6g} significant={} practical={}\n", t.corpus_a,
                             t.corpus_b, fmt_opt(r.statistic, 2), fmt_opt(r.p_value, 4), fmt_opt(r.cramers_v, 3),
                             r.corrected_alpha, r.significant ? "yes" : "no",
                             r.practically_significant ? "yes" : "no");
        }
    }
    return s;
}

std::string render_spearman(const std::vector<std::pair<std::string, PatternMatrix>>& corpora)
{
    std::vector<std::array<std::optional<double>, kPatternCount>> cov;
    for (const auto& [label, m] : corpora) {
        std::array<std::optional<double>, kPatternCount> v;
        for (PatternId id : all_patterns())
            v[index_of(id)] = coverage(m, id);
        cov.push_back(v);
    }
    std::string s = "spearman (coverage vectors)\n";
    for (std::size_t i = 0; i < corpora.size(); ++i)
        for (std::size_t j = i + 1; j < corpora.size(); ++j) {
            std::vector<double> a, b;
            for (std::size_t k = 0; k < kPatternCount; ++k)
                if (cov[i][k] && cov[j][k]) {
                    a.push_back(*cov[i][k]);
                    b.push_back(*cov[j][k]);
                }
            std::optional<double> rho;
            if (a.size() >= 2)
                rho = spearman(a, b);
            s += fmt::format("  {} vs {}: rho={} (n={})\n", corpora[i].first, corpora[j].first, fmt_opt(rho, 3),
                             a.size());
        }
    return s;
}

std::string render_mantel(const std::vector<std::pair<std::string, PatternMatrix>>& corpora, std::size_t permutations,
                          std::uint64_t seed)
{
    std::vector<CorrelationMatrix> phis;
    for (const auto& c : corpora)
        phis.push_back(phi_matrix(c.second));
    std::string s = fmt::format("mantel (permutations={}, seed={})\n", permutations, seed);
    for (std::size_t i = 0; i < corpora.size(); ++i)
        for (std::size_t j = i + 1; j < corpora.size(); ++j) {
            MantelResult r = mantel(phis[i], phis[j], permutations, seed);
            s += fmt::format("  {} vs {}: r={} p={} cells={}\n", corpora[i].first, corpora[j].first, fmt_opt(r.r, 4),
                             fmt_opt(r.p_value, 4), r.usable_cells);
        }
    return s;
}

}  // namespace

LabeledMatrix parse_labeled_matrix(const std::string& arg)
{
    auto eq = arg.find('=');
    if (eq == std::string::npos)
        return LabeledMatrix{fs::path(arg).stem().string(), arg};
    if (eq == 0 || eq + 1 == arg.size())
        throw std::invalid_argument(fmt::format("expected label=path, got '{}'", arg));
    return LabeledMatrix{arg.substr(0, eq), arg.substr(eq + 1)};
}

int cmd_scan(const ScanOptions& opts, std::ostream& out, std::ostream& err)
{
    try {
        std::vector<RemapRule> remaps;
        if (opts.remap_file)
            remaps = load_remap_file(*opts.remap_file);
        ScanResult res = scan_corpus(opts.root, remaps, fs::path(opts.root).filename().string(), opts.jobs);
        std::string body = opts.format == OutputFormat::json ? write_matrix_json(res.matrix)
                                                               : write_matrix_csv(res.matrix);
        write_text(opts.out, body, out);

        std::string summary = res.summary.render();
        summary += fmt::format("entities analyzed: {}\nentities skipped: {}\n", res.matrix.analyzed_count(),
                               res.skipped.size());
        for (const auto& s : res.skipped)
            summary += fmt::format("  skipped {} ({}): {}\n", s.name, s.file_path, s.reason);
        for (const auto& i : res.issues)
            summary += fmt::format("  issue {}:{} {} {}\n", i.file, i.line, i.entity, i.message);
        if (opts.out)
            write_text(*opts.out + ".summary.txt", summary, out);
        err << summary;

        if (res.summary.parsed == 0) {
            err << "no project parsed\n";
            return kExitInsufficient;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        err << "scan: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_metrics(const MetricsOptions& opts, std::ostream& out, std::ostream& err)
{
    if (opts.inputs.empty()) {
        err << "metrics: need at least one matrix\n";
        return kExitInsufficient;
    }
    try {
        MetricsReport report = build_report(load_inputs(opts.inputs));
        write_text(opts.out, opts.json ? report_to_json(report).dump(2) + "\n" : render_report(report), out);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "metrics: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_stats(const StatsOptions& opts, std::ostream& out, std::ostream& err)
{
    bool phi = opts.phi || !(opts.chi2 || opts.spearman || opts.mantel);
    if (opts.inputs.empty()) {
        err << "stats: need at least one matrix\n";
        return kExitInsufficient;
    }
    if ((opts.chi2 || opts.spearman || opts.mantel) && opts.inputs.size() < 2) {
        err << "stats: need ≥2 corpora\n";
        return kExitInsufficient;
    }
    if (opts.mantel && !opts.seed) {
        err << "stats: --seed is required with --mantel\n";
        return kExitError;
    }
    try {
        auto corpora = load_inputs(opts.inputs);
        std::string s;
        if (phi)
            for (const auto& [label, m] : corpora)
                s += render_phi(label, m);
        if (opts.chi2)
            s += render_chi2(corpora);
        if (opts.spearman)
            s += render_spearman(corpora);
        if (opts.mantel)
            s += render_mantel(corpora, opts.permutations, *opts.seed);
        write_text(opts.out, s, out);
        return kExitOk;
    } catch (const std::exception& e) {
        err << "stats: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_power(const PowerOptions& opts, std::ostream& out, std::ostream& err)
{
    try {
        out << sample_size_chi_square(opts.w, opts.alpha, opts.power, opts.df) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "power: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace micropat
