#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "micropat/catalog.hpp"
#include "test_support.hpp"

using namespace micropat;
using namespace micropat::testing;

namespace {

struct Labeled {
    std::string pattern;
    std::string entity;
    bool expected;
};

std::vector<Labeled> load_labels()
{
    auto j = nlohmann::json::parse(read_file(fixture_dir() / "detectors" / "labels.json"));
    std::vector<Labeled> out;
    for (auto& [pattern, sets] : j.items()) {
        for (const auto& n : sets["positive"])
            out.push_back({pattern, n.get<std::string>(), true});
        for (const auto& n : sets["negative"])
            out.push_back({pattern, n.get<std::string>(), false});
    }
    return out;
}

bool existential(PatternId id)
{
    switch (id) {
    case PatternId::Ownable:
    case PatternId::Stoppable:
    case PatternId::PullPayment:
    case PatternId::ReentrancyGuard:
    case PatternId::Payable:
    case PatternId::Borrower:
    case PatternId::ModifierUsage:
    case PatternId::Delegator: return true;
    default: return false;
    }
}

}  // namespace

TEST(DetectorFixtures, LabelsCoverEveryPattern)
{
    auto j = nlohmann::json::parse(read_file(fixture_dir() / "detectors" / "labels.json"));
    for (PatternId id : all_patterns()) {
        std::string name(pattern_name(id));
        ASSERT_TRUE(j.contains(name)) << name;
        EXPECT_GE(j[name]["positive"].size(), 2u) << name;
        EXPECT_GE(j[name]["negative"].size(), 2u) << name;
    }
}

TEST(DetectorFixtures, EveryLabelAgrees)
{
    auto labels = load_labels();
    ASSERT_GE(labels.size(), 72u);
    std::map<std::string, Analyzed> files;
    for (const auto& l : labels) {
        if (!files.contains(l.pattern))
            files.emplace(l.pattern, analyze({{l.pattern + ".sol", read_file(fixture_dir() / "detectors" / (l.pattern + ".sol"))}}));
        const Analyzed& a = files.at(l.pattern);
        EXPECT_TRUE(a.project.failed.empty()) << l.pattern;
        auto id = pattern_from_name(l.pattern);
        ASSERT_TRUE(id) << l.pattern;
        PatternMatch m = detect(*id, a[l.entity]);
        EXPECT_EQ(m.matched, l.expected) << l.pattern << " on " << l.entity;
        if (m.matched && existential(*id))
            EXPECT_FALSE(m.evidence.empty()) << l.pattern << " on " << l.entity;
    }
}
