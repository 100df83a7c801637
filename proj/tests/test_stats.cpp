#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "matrix_builders.hpp"
#include "micropat/stats.hpp"
#include "stats_oracle.hpp"

using namespace micropat;
using namespace micropat::testing;

namespace {

ContingencyTable table(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d)
{
    ContingencyTable t;
    t.n11 = a;
    t.n10 = b;
    t.n01 = c;
    t.n00 = d;
    return t;
}

std::vector<std::vector<bool>> random_columns(std::mt19937_64& rng, std::size_t rows, std::size_t cols)
{
    std::uniform_real_distribution<double> density(0.0, 1.0);
    std::vector<std::vector<bool>> out(cols);
    for (auto& c : out) {
        std::bernoulli_distribution bit(density(rng));
        for (std::size_t i = 0; i < rows; ++i)
            c.push_back(bit(rng));
    }
    return out;
}

CorrelationMatrix random_correlations(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(-1, 1);
    CorrelationMatrix m;
    m.size = n;
    m.values.assign(n * n, std::nullopt);
    for (std::size_t i = 0; i < n; ++i) {
        m.values[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = u(rng);
            m.values[i * n + j] = v;
            m.values[j * n + i] = v;
        }
    }
    return m;
}

}  // namespace

TEST(Phi, WorkedTable)
{
    auto v = phi(table(10, 20, 20, 10));
    ASSERT_TRUE(v);
    EXPECT_NEAR(*v, -1.0 / 3.0, 1e-12);
}

TEST(Phi, PerfectAndInverse)
{
    std::vector<bool> a = {1, 1, 0, 0, 1};
    std::vector<bool> na = {0, 0, 1, 1, 0};
    EXPECT_DOUBLE_EQ(*phi(ContingencyTable::of(a, a)), 1.0);
    EXPECT_DOUBLE_EQ(*phi(ContingencyTable::of(a, na)), -1.0);
}

TEST(Phi, ConstantColumnUndefined)
{
    std::vector<bool> a = {1, 0, 1};
    std::vector<bool> ones = {1, 1, 1};
    EXPECT_FALSE(phi(ContingencyTable::of(a, ones)));
    EXPECT_EQ(classify_strength(phi(ContingencyTable::of(a, ones))), Strength::undefined);
    EXPECT_THROW(ContingencyTable::of(a, {1}), std::invalid_argument);
}

TEST(Phi, MatchesPearsonOnRandomMatrices)
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> rows(2, 500), cols(2, 18);
    double max_diff = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto columns = random_columns(rng, rows(rng), cols(rng));
        CorrelationMatrix m = phi_matrix(columns);
        ASSERT_EQ(m.size, columns.size());
        for (std::size_t i = 0; i < m.size; ++i) {
            auto diag = oracle::pearson_bits(columns[i], columns[i]);
            EXPECT_EQ(m.at(i, i).has_value(), diag.has_value());
            if (diag)
                EXPECT_EQ(*m.at(i, i), 1.0);
            for (std::size_t j = 0; j < m.size; ++j) {
                EXPECT_EQ(m.at(i, j), m.at(j, i));
                if (i == j)
                    continue;
                auto expected = oracle::pearson_bits(columns[i], columns[j]);
                ASSERT_EQ(m.at(i, j).has_value(), expected.has_value());
                if (expected)
                    max_diff = std::max(max_diff, std::abs(*m.at(i, j) - *expected));
            }
        }
    }
    EXPECT_LT(max_diff, 1e-12);
}

TEST(Phi, MatrixOverloadUsesAnalyzedRows)
{
    std::mt19937_64 rng(8);
    PatternMatrix m = random_matrix(rng, 200);
    m.rows[0].skipped = true;
    std::vector<std::vector<bool>> columns(kPatternCount);
    for (std::size_t r = 1; r < m.rows.size(); ++r)
        for (std::size_t k = 0; k < kPatternCount; ++k)
            columns[k].push_back(m.rows[r].patterns[k]);
    auto a = phi_matrix(m);
    auto b = phi_matrix(columns);
    EXPECT_EQ(a.values, b.values);
}

TEST(Phi, PlantedPairIsPerfect)
{
    std::mt19937_64 rng(1);
    PatternMatrix m = random_matrix(rng, 300);
    for (auto& r : m.rows)
        r.patterns[index_of(PatternId::Emitter)] = r.patterns[index_of(PatternId::Ownable)];
    auto c = phi_matrix(m);
    EXPECT_DOUBLE_EQ(*c.at(index_of(PatternId::Ownable), index_of(PatternId::Emitter)), 1.0);
    EXPECT_EQ(c.strength(index_of(PatternId::Ownable), index_of(PatternId::Emitter)), Strength::strong);
}

TEST(Phi, IndependentColumnsAreWeak)
{
    std::mt19937_64 rng(77);
    std::bernoulli_distribution bit(0.3);
    std::vector<bool> a, b;
    for (int i = 0; i < 20000; ++i) {
        a.push_back(bit(rng));
        b.push_back(bit(rng));
    }
    EXPECT_LT(std::abs(*phi(ContingencyTable::of(a, b))), 0.05);
}

TEST(Strength, Thresholds)
{
    EXPECT_EQ(classify_strength(0.58), Strength::moderately_strong);
    EXPECT_EQ(classify_strength(-0.58), Strength::moderately_strong);
    EXPECT_EQ(classify_strength(0.01), Strength::weak);
    EXPECT_EQ(classify_strength(0.70), Strength::strong);
    EXPECT_EQ(classify_strength(0.30), Strength::moderate);
    EXPECT_EQ(classify_strength(0.15), Strength::moderate);
    EXPECT_EQ(classify_strength(0.50), Strength::moderate);
    EXPECT_EQ(classify_strength(std::nullopt), Strength::undefined);
    EXPECT_EQ(to_string(Strength::moderately_strong), "moderately_strong");
}

TEST(ChiSquare, WorkedTable)
{
    auto r = chi_square_2x2(table(10, 20, 20, 10), 0.05);
    ASSERT_TRUE(r.statistic);
    EXPECT_NEAR(*r.statistic, 6.67, 0.01);
    EXPECT_NEAR(*r.cramers_v, 0.333, 0.001);
    EXPECT_NEAR(*r.p_value, std::erfc(std::sqrt(*r.statistic / 2)), 1e-12);
    EXPECT_TRUE(r.significant);
    EXPECT_TRUE(r.practically_significant);
}

TEST(ChiSquare, EqualProportionsGiveZero)
{
    for (auto t : {table(5, 5, 5, 5), table(3, 6, 10, 20), table(100, 900, 1, 9)}) {
        auto r = chi_square_2x2(t, 0.05);
        EXPECT_EQ(*r.statistic, 0.0);
        EXPECT_EQ(*r.p_value, 1.0);
        EXPECT_FALSE(r.significant);
    }
}

TEST(ChiSquare, StatisticEqualsNPhiSquared)
{
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::uint64_t> cell(1, 5000);
    for (int i = 0; i < 500; ++i) {
        auto t = table(cell(rng), cell(rng), cell(rng), cell(rng));
        double p = *phi(t);
        auto r = chi_square_2x2(t, 0.05);
        EXPECT_NEAR(*r.statistic, static_cast<double>(t.total()) * p * p, 1e-9 * std::max(1.0, *r.statistic));
        EXPECT_NEAR(*r.cramers_v, std::abs(p), 1e-12);
    }
}

TEST(ChiSquare, DegenerateTableUndefined)
{
    auto r = chi_square_2x2(table(0, 0, 5, 5), 0.05);
    EXPECT_FALSE(r.statistic);
    EXPECT_FALSE(r.significant);
}

TEST(Bonferroni, Values)
{
    EXPECT_EQ(bonferroni_alpha(0.05, 10), 0.005);
    EXPECT_EQ(bonferroni_alpha(0.05, 1), 0.05);
    EXPECT_EQ(bonferroni_alpha(0.01, 4), 0.0025);
    EXPECT_THROW(bonferroni_alpha(0.05, 0), std::invalid_argument);
}

TEST(Pairwise, FiveCorporaTenTests)
{
    std::mt19937_64 rng(12);
    std::map<std::string, PatternMatrix> corpora;
    for (const char* label : {"arb", "eth", "ftm", "opt", "pol"})
        corpora[label] = random_matrix(rng, 400);
    auto tests = pairwise_platform_tests(corpora, PatternId::Reader);
    ASSERT_EQ(tests.size(), 10u);
    EXPECT_EQ(tests[0].corpus_a, "arb");
    EXPECT_EQ(tests[0].corpus_b, "eth");
    for (const auto& t : tests)
        EXPECT_EQ(t.result.corrected_alpha, 0.005);
}

TEST(Pairwise, IdenticalCorporaNotSignificant)
{
    PatternMatrix m = column_matrix(PatternId::Payable, 50, 500);
    auto tests = pairwise_platform_tests({{"a", m}, {"b", m}}, PatternId::Payable);
    ASSERT_EQ(tests.size(), 1u);
    EXPECT_EQ(*tests[0].result.statistic, 0.0);
    EXPECT_FALSE(tests[0].result.significant);
}

TEST(Pairwise, PlantedDifferenceSignificant)
{
    auto tests = pairwise_platform_tests(
        {{"a", column_matrix(PatternId::Payable, 400, 2000)}, {"b", column_matrix(PatternId::Payable, 200, 2000)}},
        PatternId::Payable);
    ASSERT_EQ(tests.size(), 1u);
    EXPECT_EQ(tests[0].table.n11, 400u);
    EXPECT_EQ(tests[0].table.n01, 200u);
    EXPECT_TRUE(tests[0].result.significant);
}

TEST(Pairwise, CountsOnlyEligibleRows)
{
    PatternMatrix a = column_matrix(PatternId::Ownable, 1, 4);
    a.rows.push_back(make_row("I", EntityKind::interface, "p", with({PatternId::Ownable})));
    PatternMatrix ifaces;
    ifaces.rows.push_back(make_row("J", EntityKind::interface));
    auto tests = pairwise_platform_tests({{"a", a}, {"b", a}, {"c", ifaces}}, PatternId::Ownable);
    ASSERT_EQ(tests.size(), 3u);
    EXPECT_EQ(tests[0].table.total(), 8u);
    EXPECT_TRUE(tests[1].skipped);
    EXPECT_THROW(pairwise_platform_tests({{"a", a}}, PatternId::Ownable), std::invalid_argument);
}

TEST(Spearman, IdenticalAndReversed)
{
    std::vector<double> a = {1.33, 2.21, 0.30, 0.19, 5.13, 39.3};
    std::vector<double> rev(a.rbegin(), a.rend());
    std::vector<double> desc = {6, 5, 4, 3, 2, 1};
    std::vector<double> asc = {1, 2, 3, 4, 5, 6};
    EXPECT_DOUBLE_EQ(*spearman(a, a), 1.0);
    EXPECT_DOUBLE_EQ(*spearman(asc, desc), -1.0);
    EXPECT_NEAR(*spearman(a, rev), *spearman(rev, a), 1e-15);
}

TEST(Spearman, TiesAndDegenerateInputs)
{
    EXPECT_EQ(average_ranks({10, 20, 20, 30}), (std::vector<double>{1, 2.5, 2.5, 4}));
    EXPECT_FALSE(spearman({1, 1, 1}, {1, 2, 3}));
    EXPECT_THROW(spearman({1, 2}, {1}), std::invalid_argument);
    EXPECT_THROW(spearman({1}, {1}), std::invalid_argument);
}

TEST(Spearman, RandomPairsCenteredOnZero)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0, 1);
    double sum = 0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> a(20), b(20);
        for (auto& x : a)
            x = u(rng);
        for (auto& x : b)
            x = u(rng);
        double r = *spearman(a, b);
        EXPECT_LE(std::abs(r), 1.0);
        sum += r;
    }
    EXPECT_NEAR(sum / trials, 0.0, 0.1);
}

TEST(Spearman, InvariantUnderMonotoneTransform)
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<double> a(30), b(30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = u(rng);
        b[i] = u(rng);
    }
    std::vector<double> ea;
    for (double x : a)
        ea.push_back(std::exp(x));
    EXPECT_NEAR(*spearman(a, b), *spearman(ea, b), 1e-12);
}

TEST(Mantel, IdenticalMatrices)
{
    std::mt19937_64 rng(9);
    auto m = random_correlations(rng, 18);
    auto r = mantel(m, m, 999, 42);
    EXPECT_NEAR(*r.r, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(*r.p_value, 1.0 / 1000.0);
    EXPECT_EQ(r.usable_cells, 153u);
}

TEST(Mantel, DefaultPermutationsGiveSmallestP)
{
    std::mt19937_64 rng(10);
    auto m = random_correlations(rng, 18);
    auto r = mantel(m, m, kDefaultPermutations, 42);
    EXPECT_DOUBLE_EQ(*r.p_value, 0.0001);
}

TEST(Mantel, SeedDeterminism)
{
    std::mt19937_64 rng(11);
    auto a = random_correlations(rng, 12);
    auto b = random_correlations(rng, 12);
    auto x = mantel(a, b, 499, 7);
    auto y = mantel(a, b, 499, 7);
    EXPECT_EQ(x.r, y.r);
    EXPECT_EQ(x.p_value, y.p_value);
    EXPECT_EQ(PermutationSource(5).next(10), PermutationSource(5).next(10));
}

TEST(Mantel, IndependentMatricesGiveSpreadOfP)
{
    std::mt19937_64 rng(13);
    double sum = 0;
    int small = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        auto r = mantel(random_correlations(rng, 8), random_correlations(rng, 8), 199, static_cast<std::uint64_t>(t));
        ASSERT_TRUE(r.p_value);
        EXPECT_GT(*r.p_value, 0.0);
        EXPECT_LE(*r.p_value, 1.0);
        sum += *r.p_value;
        small += *r.p_value < 0.05;
    }
    EXPECT_NEAR(sum / trials, 0.5, 0.08);
    EXPECT_LT(small, trials / 8);
}

TEST(Mantel, UndefinedCellsDropped)
{
    std::mt19937_64 rng(14);
    auto a = random_correlations(rng, 6);
    a.values[0 * 6 + 1] = std::nullopt;
    a.values[1 * 6 + 0] = std::nullopt;
    auto r = mantel(a, a, 99, 1);
    EXPECT_EQ(r.usable_cells, 14u);
    EXPECT_THROW(mantel(a, random_correlations(rng, 5), 9, 1), std::invalid_argument);
}

TEST(Permutation, IsAPermutation)
{
    PermutationSource src(3);
    for (int i = 0; i < 100; ++i) {
        auto p = src.next(17);
        std::sort(p.begin(), p.end());
        for (std::size_t k = 0; k < p.size(); ++k)
            EXPECT_EQ(p[k], k);
    }
}

TEST(Power, SampleSizeWorkedValue)
{
    auto n = sample_size_chi_square(0.1, 0.005, 0.8, 1);
    EXPECT_NEAR(static_cast<double>(n), 1332.0, 2.0);
    EXPECT_EQ(n, oracle::sample_size_df1(0.1, 0.005, 0.8));
}

TEST(Power, SimulationOracle)
{
    auto n = sample_size_chi_square(0.1, 0.005, 0.8, 1);
    auto sim = oracle::simulated_sample_size_df1(0.1, 0.005, 0.8, 1'000'000, 20240601);
    EXPECT_NEAR(static_cast<double>(n), static_cast<double>(sim), 2.0);
}

TEST(Power, OtherSettings)
{
    EXPECT_NEAR(static_cast<double>(sample_size_chi_square(0.3, 0.05, 0.8, 1)), 88.0, 2.0);
    auto n1 = sample_size_chi_square(0.1, 0.05, 0.8, 1);
    auto n2 = sample_size_chi_square(0.2, 0.05, 0.8, 1);
    EXPECT_NEAR(static_cast<double>(n1) / static_cast<double>(n2), 4.0, 0.05);
    EXPECT_GT(sample_size_chi_square(0.1, 0.05, 0.8, 3), n1);
}

TEST(Power, ClosedFormAgreement)
{
    for (std::uint64_t n : {10u, 100u, 1000u, 5000u})
        EXPECT_NEAR(chi_square_power(n, 0.1, 0.005, 1), oracle::power_df1(n, 0.1, 0.005), 1e-9);
}

TEST(Power, InvalidArguments)
{
    EXPECT_THROW(sample_size_chi_square(0, 0.05, 0.8, 1), std::invalid_argument);
    EXPECT_THROW(sample_size_chi_square(0.1, 0, 0.8, 1), std::invalid_argument);
    EXPECT_THROW(sample_size_chi_square(0.1, 0.05, 1.0, 1), std::invalid_argument);
    EXPECT_THROW(sample_size_chi_square(0.1, 0.05, 0.8, 0), std::invalid_argument);
}
