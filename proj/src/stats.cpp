#include "micropat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <fmt/format.h>

namespace micropat {

namespace {

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    std::size_t n = x.size();
    if (n < 2)
        return std::nullopt;
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0 || syy <= 0)
        return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double product_of_margins(const ContingencyTable& t)
{
    return static_cast<double>(t.row1()) * static_cast<double>(t.row0()) * static_cast<double>(t.col1())
         * static_cast<double>(t.col0());
}

double cross_difference(const ContingencyTable& t)
{
    // exact in 128 bits, then converted once
    __int128 d = static_cast<__int128>(t.n11) * t.n00 - static_cast<__int128>(t.n10) * t.n01;
    return static_cast<double>(d);
}

// Upper-triangle cells of `a` and of `b` viewed through `perm`, keeping only
// cells defined in both.
std::optional<double> triangle_correlation(const CorrelationMatrix& a, const CorrelationMatrix& b,
                                           const std::vector<std::size_t>& perm, std::size_t* usable)
{
    std::vector<double> x, y;
    for (std::size_t i = 0; i < a.size; ++i) {
        for (std::size_t j = i + 1; j < a.size; ++j) {
            auto va = a.at(i, j);
            auto vb = b.at(perm[i], perm[j]);
            if (va && vb) {
                x.push_back(*va);
                y.push_back(*vb);
            }
        }
    }
    if (usable)
        *usable = x.size();
    if (x.size() < 3)
        return std::nullopt;
    return pearson(x, y);
}

}  // namespace

ContingencyTable ContingencyTable::of(const std::vector<bool>& a, const std::vector<bool>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("contingency columns differ in length");
    ContingencyTable t;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && b[i])
            ++t.n11;
        else if (a[i])
            ++t.n10;
        else if (b[i])
            ++t.n01;
        else
            ++t.n00;
    }
    return t;
}

std::optional<double> phi(const ContingencyTable& t)
{
    double margins = product_of_margins(t);
    if (margins == 0)
        return std::nullopt;
    return std::clamp(cross_difference(t) / std::sqrt(margins), -1.0, 1.0);
}

Strength classify_strength(std::optional<double> phi_value)
{
    if (!phi_value)
        return Strength::undefined;
    double a = std::abs(*phi_value);
    if (a < 0.15)
        return Strength::weak;
    if (a <= 0.50)
        return Strength::moderate;
    if (a <= 0.635)
        return Strength::moderately_strong;
    return Strength::strong;
}

std::string_view to_string(Strength s)
{
    switch (s) {
    case Strength::weak: return "weak";
    case Strength::moderate: return "moderate";
    case Strength::moderately_strong: return "moderately_strong";
    case Strength::strong: return "strong";
    case Strength::undefined: return "undefined";
    }
    return "undefined";
}

CorrelationMatrix phi_matrix(const std::vector<std::vector<bool>>& columns)
{
    CorrelationMatrix m;
    m.size = columns.size();
    m.values.assign(m.size * m.size, std::nullopt);
    for (std::size_t i = 0; i < m.size; ++i) {
        for (std::size_t j = i; j < m.size; ++j) {
            auto v = phi(ContingencyTable::of(columns[i], columns[j]));
            if (i == j && v)
                v = 1.0;
            m.values[i * m.size + j] = v;
            m.values[j * m.size + i] = v;
        }
    }
    return m;
}

CorrelationMatrix phi_matrix(const PatternMatrix& matrix)
{
    std::vector<std::vector<bool>> columns(kPatternCount);
    for (const auto& row : matrix.rows) {
        if (row.skipped)
            continue;
        for (std::size_t k = 0; k < kPatternCount; ++k)
            columns[k].push_back(row.patterns[k]);
    }
    return phi_matrix(columns);
}

TestResult chi_square_2x2(const ContingencyTable& t, double corrected_alpha)
{
    TestResult r;
    r.corrected_alpha = corrected_alpha;
    double margins = product_of_margins(t);
    if (margins == 0 || t.total() == 0)
        return r;
    double n = static_cast<double>(t.total());
    double d = cross_difference(t);
    double chi2 = d == 0 ? 0.0 : n * (d * d) / margins;
    r.statistic = chi2;
    r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(1.0), chi2));
    r.cramers_v = std::sqrt(chi2 / n);
    r.significant = *r.p_value < corrected_alpha;
    r.practically_significant = r.significant && *r.cramers_v >= kPracticalEffect;
    return r;
}

double bonferroni_alpha(double base_alpha, std::size_t k_comparisons)
{
    if (k_comparisons < 1)
        throw std::invalid_argument("Bonferroni correction needs at least one comparison");
    return base_alpha / static_cast<double>(k_comparisons);
}

std::vector<PairwiseTest> pairwise_platform_tests(const std::map<std::string, PatternMatrix>& corpora,
                                                  PatternId pattern, double base_alpha)
{
    if (corpora.size() < 2)
        throw std::invalid_argument("pairwise tests need at least two corpora");
    std::size_t k = corpora.size() * (corpora.size() - 1) / 2;
    double alpha = bonferroni_alpha(base_alpha, k);

    std::vector<PairwiseTest> out;
    for (auto a = corpora.begin(); a != corpora.end(); ++a) {
        for (auto b = std::next(a); b != corpora.end(); ++b) {
            PairwiseTest test;
            test.corpus_a = a->first;
            test.corpus_b = b->first;
            auto fill = [&](const PatternMatrix& m, std::uint64_t& present, std::uint64_t& absent) {
                for (const auto& row : m.rows) {
                    if (row.skipped || !is_eligible(pattern, row.kind))
                        continue;
                    (row.patterns[index_of(pattern)] ? present : absent)++;
                }
            };
            fill(a->second, test.table.n11, test.table.n10);
            fill(b->second, test.table.n01, test.table.n00);
            test.result.corrected_alpha = alpha;
            if (test.table.row1() == 0 || test.table.row0() == 0) {
                test.skipped = fmt::format("no eligible entities in {}",
                                           test.table.row1() == 0 ? test.corpus_a : test.corpus_b);
            } else {
                test.result = chi_square_2x2(test.table, alpha);
            }
            out.push_back(std::move(test));
        }
    }
    return out;
}

std::vector<double> average_ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
            ++j;
        double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> spearman(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("spearman inputs differ in length");
    if (a.size() < 2)
        throw std::invalid_argument("spearman needs at least two observations");
    return pearson(average_ranks(a), average_ranks(b));
}

std::uint64_t PermutationSource::bounded(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("empty range");
    // reject the low values that would bias the modulus
    std::uint64_t threshold = (0 - n) % n;
    while (true) {
        std::uint64_t x = rng_();
        if (x >= threshold)
            return x % n;
    }
}

std::vector<std::size_t> PermutationSource::next(std::size_t n)
{
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (std::size_t i = n; i > 1; --i)
        std::swap(p[i - 1], p[bounded(i)]);
    return p;
}

MantelResult mantel(const CorrelationMatrix& a, const CorrelationMatrix& b, std::size_t permutations,
                    std::uint64_t seed)
{
    if (a.size != b.size)
        throw std::invalid_argument("mantel matrices differ in size");
    MantelResult out;
    out.permutations = permutations;
    std::vector<std::size_t> identity(a.size);
    std::iota(identity.begin(), identity.end(), 0);
    out.r = triangle_correlation(a, b, identity, &out.usable_cells);
    if (!out.r)
        return out;

    PermutationSource source(seed);
    std::vector<std::vector<std::size_t>> perms;
    perms.reserve(permutations);
    for (std::size_t k = 0; k < permutations; ++k)
        perms.push_back(source.next(a.size));

    std::size_t at_least = 0;
    for (const auto& perm : perms) {
        auto r = triangle_correlation(a, b, perm, nullptr);
        if (r && *r >= *out.r - 1e-12)
            ++at_least;
    }
    out.p_value = static_cast<double>(at_least + 1) / static_cast<double>(permutations + 1);
    return out;
}

double chi_square_power(std::uint64_t n, double effect_w, double alpha, int df)
{
    namespace bm = boost::math;
    double crit = bm::quantile(bm::complement(bm::chi_squared(df), alpha));
    double lambda = static_cast<double>(n) * effect_w * effect_w;
    if (lambda <= 0)
        return alpha;
    return bm::cdf(bm::complement(bm::non_central_chi_squared(df, lambda), crit));
}

std::uint64_t sample_size_chi_square(double effect_w, double alpha, double power, int df)
{
    if (!(effect_w > 0) || !(alpha > 0 && alpha < 1) || !(power > 0 && power < 1) || df < 1)
        throw std::invalid_argument("sample_size_chi_square: need w > 0, 0 < alpha < 1, 0 < power < 1, df >= 1");
    if (chi_square_power(1, effect_w, alpha, df) >= power)
        return 1;
    std::uint64_t lo = 1, hi = 2;
    while (chi_square_power(hi, effect_w, alpha, df) < power) {
        lo = hi;
        hi *= 2;
        if (hi > (std::uint64_t{1} << 62))
            throw std::overflow_error("sample size out of range");
    }
    // power(lo) < target <= power(hi)
    while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (chi_square_power(mid, effect_w, alpha, df) >= power)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace micropat
