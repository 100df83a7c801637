#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "matrix_builders.hpp"
#include "micropat/metrics.hpp"

using namespace micropat;
using namespace micropat::testing;

namespace {

struct TableRow {
    PatternId id;
    std::size_t freq;
    double cov;   // percent
    double prev;  // percent
};

// expected frequency, coverage and prevalence (percent) for an Ethereum-sized corpus
const std::vector<TableRow> kEthereum = {
    {PatternId::Ownable, 269, 1.33, 0.20},        {PatternId::Stoppable, 448, 2.21, 0.33},
    {PatternId::PullPayment, 61, 0.30, 0.04},     {PatternId::ReentrancyGuard, 39, 0.19, 0.03},
    {PatternId::Payable, 1040, 5.13, 0.76},       {PatternId::Borrower, 7961, 39.30, 5.80},
    {PatternId::Implementer, 7942, 39.21, 5.79},  {PatternId::ModifierUsage, 10417, 33.64, 7.60},
    {PatternId::StorageSaver, 16301, 80.47, 11.89}, {PatternId::Reader, 6857, 13.43, 5.00},
    {PatternId::Operator, 4743, 9.29, 3.46},      {PatternId::Provider, 18422, 36.08, 13.43},
    {PatternId::Supporter, 11123, 21.78, 8.11},   {PatternId::Delegator, 13188, 42.59, 9.62},
    {PatternId::NamedReturn, 16225, 31.78, 11.83}, {PatternId::Returnless, 4850, 9.50, 3.54},
    {PatternId::Emitter, 191, 0.62, 0.14},        {PatternId::Muted, 17075, 55.14, 12.45},
};

// Entity counts per kind for the Ethereum corpus; hits go into the first
// contract rows so every count stays eligible.
PatternMatrix ethereum_like()
{
    PatternMatrix m;
    auto add = [&](EntityKind kind, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i)
            m.rows.push_back(make_row("E" + std::to_string(m.rows.size()), kind, "p" + std::to_string(m.rows.size() % 97)));
    };
    add(EntityKind::contract, 10097);
    add(EntityKind::abstract_contract, 10159);
    add(EntityKind::interface, 20092);
    add(EntityKind::library, 10712);
    for (const auto& t : kEthereum)
        for (std::size_t i = 0; i < t.freq; ++i)
            m.rows[i].patterns[index_of(t.id)] = true;
    return m;
}

double pct(std::optional<double> v) { return *v * 100.0; }

}  // namespace

TEST(Coverage, OwnableOverContractKinds)
{
    PatternMatrix m = column_matrix(PatternId::Ownable, 269, 10097);
    for (std::size_t i = 0; i < 10159; ++i)
        m.rows.push_back(make_row("A" + std::to_string(i), EntityKind::abstract_contract));
    EXPECT_EQ(frequency(m, PatternId::Ownable), 269u);
    EXPECT_EQ(eligible_count(m, PatternId::Ownable), 20256u);
    EXPECT_NEAR(pct(coverage(m, PatternId::Ownable)), 1.33, 0.005);
    EXPECT_EQ(format_percent(coverage(m, PatternId::Ownable)), "1.33%");
}

TEST(Coverage, ReaderOverAllKinds)
{
    PatternMatrix m = ethereum_like();
    EXPECT_EQ(eligible_count(m, PatternId::Reader), 51060u);
    EXPECT_NEAR(pct(coverage(m, PatternId::Reader)), 13.43, 0.005);
    EXPECT_EQ(format_percent(coverage(m, PatternId::Reader)), "13.43%");
}

TEST(Coverage, IneligibleRowsIgnored)
{
    PatternMatrix m;
    m.rows.push_back(make_row("I", EntityKind::interface, "p", with({PatternId::Ownable})));
    m.rows.push_back(make_row("C", EntityKind::contract));
    EXPECT_EQ(frequency(m, PatternId::Ownable), 0u);
    EXPECT_EQ(eligible_count(m, PatternId::Ownable), 1u);
    EXPECT_DOUBLE_EQ(*coverage(m, PatternId::Ownable), 0.0);
}

TEST(Coverage, UndefinedWithoutEligibleEntities)
{
    PatternMatrix m;
    m.rows.push_back(make_row("I", EntityKind::interface));
    EXPECT_FALSE(coverage(m, PatternId::Stoppable));
    EXPECT_EQ(format_percent(coverage(m, PatternId::Stoppable)), "n/a");
    EXPECT_FALSE(coverage(PatternMatrix{}, PatternId::Reader));
}

TEST(Coverage, SkippedRowsExcluded)
{
    PatternMatrix m = column_matrix(PatternId::Payable, 1, 2);
    MatrixRow s = make_row("S", EntityKind::contract, "p", with({PatternId::Payable}));
    s.skipped = true;
    m.rows.push_back(s);
    EXPECT_EQ(frequency(m, PatternId::Payable), 1u);
    EXPECT_EQ(eligible_count(m, PatternId::Payable), 2u);
    EXPECT_DOUBLE_EQ(*coverage(m, PatternId::Payable), 0.5);
}

TEST(CorpusScale, EthereumSizedColumn)
{
    PatternMatrix m = ethereum_like();
    auto cm = corpus_metrics("Ethereum", m);
    for (const auto& t : kEthereum) {
        const auto& p = cm.patterns[index_of(t.id)];
        EXPECT_EQ(p.frequency, t.freq) << pattern_name(t.id);
        EXPECT_NEAR(pct(p.coverage), t.cov, 0.005 + 1e-9) << pattern_name(t.id);
        EXPECT_NEAR(pct(p.prevalence), t.prev, 0.005 + 1e-9) << pattern_name(t.id);
    }
}

TEST(Prevalence, SumsToOne)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        PatternMatrix m = random_matrix(rng, 1 + trial * 7, 0.2);
        double sum = 0;
        bool any = false;
        for (PatternId id : all_patterns())
            if (auto p = prevalence(m, id)) {
                sum += *p;
                any = true;
            }
        if (any)
            EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(Prevalence, UndefinedWhenNothingMatches)
{
    PatternMatrix m = column_matrix(PatternId::Ownable, 0, 5);
    EXPECT_FALSE(prevalence(m, PatternId::Ownable));
    EXPECT_EQ(format_percent(prevalence(m, PatternId::Ownable)), "n/a");
}

TEST(Eligible, AuditAgainstPerKindTally)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        PatternMatrix m = random_matrix(rng, static_cast<std::size_t>(trial * 3));
        if (trial % 3 == 0 && !m.rows.empty())
            m.rows.front().skipped = true;
        for (PatternId id : all_patterns()) {
            EXPECT_EQ(eligible_count(m, id), eligible_count_by_kind(m, id));
            EXPECT_LE(frequency(m, id), eligible_count(m, id));
            if (auto c = coverage(m, id)) {
                EXPECT_GE(*c, 0.0);
                EXPECT_LE(*c, 1.0);
            }
        }
    }
}

TEST(Aggregate, StoppableAcrossPlatforms)
{
    auto s = aggregate_coverage({2.21, 2.25, 2.25, 1.56, 2.46});
    EXPECT_NEAR(s.mean, 2.15, 0.01);
    EXPECT_NEAR(s.sigma, 0.31, 0.01);
    EXPECT_NEAR(s.median, 2.25, 0.01);
}

TEST(Aggregate, StorageSaverAcrossPlatforms)
{
    auto s = aggregate_coverage({80.47, 91.67, 71.46, 92.64, 86.85});
    EXPECT_NEAR(s.mean, 84.62, 0.01);
    EXPECT_NEAR(s.sigma, 7.87, 0.01);
    EXPECT_NEAR(s.median, 86.85, 0.01);
}

TEST(Aggregate, SingleValueAndEvenCount)
{
    auto one = aggregate_coverage({4.0});
    EXPECT_EQ(one.mean, 4.0);
    EXPECT_EQ(one.sigma, 0.0);
    EXPECT_EQ(one.median, 4.0);
    EXPECT_DOUBLE_EQ(aggregate_coverage({1, 2, 3, 4}).median, 2.5);
    EXPECT_THROW(aggregate_coverage({}), std::invalid_argument);
}

TEST(Aggregate, MatchesDirectFormula)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 100);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(1 + trial % 9);
        for (auto& x : v)
            x = u(rng);
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double var = 0;
        for (double x : v)
            var += (x - mean) * (x - mean);
        auto s = aggregate_coverage(v);
        EXPECT_NEAR(s.mean, mean, 1e-9);
        EXPECT_NEAR(s.sigma, std::sqrt(var / static_cast<double>(v.size())), 1e-9);
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        std::size_t n = sorted.size();
        double med = n % 2 ? sorted[n / 2] : (sorted[n / 2 - 1] + sorted[n / 2]) / 2;
        EXPECT_DOUBLE_EQ(s.median, med);
    }
}

TEST(PerProject, DistinctPatternCounts)
{
    PatternMatrix m;
    m.rows.push_back(make_row("A", EntityKind::contract, "a", with({PatternId::Ownable})));
    m.rows.push_back(make_row("B", EntityKind::contract, "b", with({PatternId::Ownable, PatternId::Payable})));
    m.rows.push_back(make_row("C", EntityKind::contract, "c", with({PatternId::Ownable, PatternId::Payable, PatternId::Muted})));
    m.rows.push_back(make_row("D", EntityKind::contract, "d",
                              with({PatternId::Ownable, PatternId::Payable, PatternId::Muted, PatternId::Reader})));
    auto d = patterns_per_project(m);
    EXPECT_DOUBLE_EQ(d.mean, 2.5);
    EXPECT_DOUBLE_EQ(d.median, 2.5);
    EXPECT_DOUBLE_EQ(d.any_pattern_rate, 1.0);
}

TEST(PerProject, UnionAcrossEntities)
{
    PatternMatrix m;
    m.rows.push_back(make_row("A", EntityKind::contract, "p", with({PatternId::Muted})));
    m.rows.push_back(make_row("B", EntityKind::contract, "p", with({PatternId::Borrower})));
    m.rows.push_back(make_row("C", EntityKind::library, "p", with({PatternId::Muted})));
    m.rows.push_back(make_row("D", EntityKind::contract, "q"));
    auto d = patterns_per_project(m);
    EXPECT_EQ(d.distinct_patterns.at("p"), 2u);
    EXPECT_EQ(d.distinct_patterns.at("q"), 0u);
    EXPECT_DOUBLE_EQ(d.any_pattern_rate, 0.5);
}

TEST(Format, HalfUpTwoDecimals)
{
    EXPECT_EQ(format_percent(0.013279), "1.33%");
    EXPECT_EQ(format_percent(0.0), "0.00%");
    EXPECT_EQ(format_percent(1.0), "100.00%");
    EXPECT_EQ(format_percent(std::nullopt), "n/a");
    EXPECT_EQ(format_fixed2(2.125), "2.13");
    EXPECT_EQ(format_fixed2(-0.5), "-0.50");
}

TEST(Report, TotalsOverDefinedCorpora)
{
    std::vector<std::pair<std::string, PatternMatrix>> corpora;
    const std::vector<std::pair<std::size_t, std::size_t>> stoppable = {{221, 10000}, {225, 10000}, {225, 10000},
                                                                          {156, 10000}, {246, 10000}};
    for (std::size_t i = 0; i < stoppable.size(); ++i)
        corpora.emplace_back("c" + std::to_string(i), column_matrix(PatternId::Stoppable, stoppable[i].first, stoppable[i].second));
    PatternMatrix ifaces;
    ifaces.rows.push_back(make_row("I", EntityKind::interface));
    corpora.emplace_back("ifaces", ifaces);

    auto r = build_report(corpora);
    const auto& t = r.totals[index_of(PatternId::Stoppable)];
    ASSERT_TRUE(t);
    EXPECT_NEAR(t->mean, 2.15, 0.01);
    EXPECT_NEAR(t->sigma, 0.31, 0.01);
    EXPECT_NEAR(t->median, 2.25, 0.01);

    std::string text = render_report(r);
    EXPECT_NE(text.find("Stoppable"), std::string::npos);
    EXPECT_NE(text.find("2.15±0.31 2.25"), std::string::npos);
    EXPECT_NE(text.find("n/a"), std::string::npos);

    auto j = report_to_json(r);
    EXPECT_EQ(j["corpora"].size(), 6u);
    EXPECT_EQ(j["corpora"][5]["patterns"]["Stoppable"]["coverage"], "n/a");
    EXPECT_EQ(j["corpora"][0]["patterns"]["Stoppable"]["frequency"], 221);
    EXPECT_NEAR(j["totals"]["Stoppable"]["mean"].get<double>(), 2.15, 0.01);
}

TEST(Report, PrevalenceColumnSumsToHundred)
{
    std::mt19937_64 rng(17);
    auto cm = corpus_metrics("x", random_matrix(rng, 300));
    double sum = 0;
    for (const auto& p : cm.patterns)
        sum += p.prevalence.value_or(0) * 100;
    EXPECT_NEAR(sum, 100.0, 1e-9);
    EXPECT_EQ(cm.analyzed, 300u);
}
