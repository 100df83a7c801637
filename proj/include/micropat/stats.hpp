#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "micropat/catalog.hpp"
#include "micropat/detectors.hpp"

namespace micropat {

struct ContingencyTable {
    std::uint64_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;

    std::uint64_t row1() const { return n11 + n10; }
    std::uint64_t row0() const { return n01 + n00; }
    std::uint64_t col1() const { return n11 + n01; }
    std::uint64_t col0() const { return n10 + n00; }
    std::uint64_t total() const { return n11 + n10 + n01 + n00; }

    // Rows: a present/absent; columns: b present/absent.
    static ContingencyTable of(const std::vector<bool>& a, const std::vector<bool>& b);
};

// nullopt when any margin is zero.
std::optional<double> phi(const ContingencyTable& t);

enum class Strength { weak, moderate, moderately_strong, strong, undefined };

Strength classify_strength(std::optional<double> phi_value);
std::string_view to_string(Strength s);

struct CorrelationMatrix {
    std::size_t size = 0;
    std::vector<std::optional<double>> values;  // row-major size x size

    std::optional<double> at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
    Strength strength(std::size_t i, std::size_t j) const { return classify_strength(at(i, j)); }
};

// φ between every pair of pattern columns over analyzed rows.
CorrelationMatrix phi_matrix(const PatternMatrix& matrix);
CorrelationMatrix phi_matrix(const std::vector<std::vector<bool>>& columns);

struct TestResult {
    std::optional<double> statistic;
    std::optional<double> p_value;
    std::optional<double> cramers_v;
    double corrected_alpha = 0.05;
    bool significant = false;
    bool practically_significant = false;
};

inline constexpr double kPracticalEffect = 0.10;

TestResult chi_square_2x2(const ContingencyTable& t, double corrected_alpha);

// Throws std::invalid_argument when k < 1.
double bonferroni_alpha(double base_alpha, std::size_t k_comparisons);

struct PairwiseTest {
    std::string corpus_a;
    std::string corpus_b;
    ContingencyTable table;
    TestResult result;
    std::optional<std::string> skipped;  // reason when the pair could not be tested
};

// One χ² test per unordered corpus pair, in (i < j) label order, corrected
// over C(k, 2) comparisons. Throws std::invalid_argument for fewer than 2 corpora.
std::vector<PairwiseTest> pairwise_platform_tests(const std::map<std::string, PatternMatrix>& corpora,
                                                  PatternId pattern, double base_alpha = 0.05);

// Spearman rank correlation with average ranks; nullopt on zero variance.
// Throws std::invalid_argument for mismatched or too-short inputs.
std::optional<double> spearman(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> average_ranks(const std::vector<double>& v);

struct MantelResult {
    std::optional<double> r;
    std::optional<double> p_value;
    std::size_t permutations = 0;
    std::size_t usable_cells = 0;
};

inline constexpr std::size_t kDefaultPermutations = 9999;

MantelResult mantel(const CorrelationMatrix& a, const CorrelationMatrix& b, std::size_t permutations,
                    std::uint64_t seed);

// Seeded Fisher-Yates permutations, identical across standard libraries for
// the same seed.
class PermutationSource {
public:
    explicit PermutationSource(std::uint64_t seed) : rng_(seed) {}
    std::vector<std::size_t> next(std::size_t n);
    std::uint64_t bounded(std::uint64_t n);  // uniform in [0, n)

private:
    std::mt19937_64 rng_;
};

// Smallest n reaching `power` for a χ² test with effect size w.
std::uint64_t sample_size_chi_square(double effect_w, double alpha, double power, int df);
double chi_square_power(std::uint64_t n, double effect_w, double alpha, int df);

}  // namespace micropat
