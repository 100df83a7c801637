#include <gtest/gtest.h>

#include "micropat/catalog.hpp"
#include "micropat/detectors.hpp"
#include "oracle.hpp"
#include "random_entities.hpp"
#include "test_support.hpp"

using namespace micropat;
using namespace micropat::testing;

namespace {

bool matches(PatternId id, const std::string& source, const std::string& entity)
{
    return detect(id, analyze_one("pragma solidity ^0.8.0;\n" + source)[entity]).matched;
}

const char* kOwnable = R"(
contract C {
    address public owner;
    modifier onlyOwner() { require(msg.sender == owner); _; }
    function f() public onlyOwner {}
})";

}  // namespace

TEST(Catalog, EighteenPatternsInTableOrder)
{
    ASSERT_EQ(all_patterns().size(), 18u);
    EXPECT_EQ(pattern_name(all_patterns().front()), "Ownable");
    EXPECT_EQ(pattern_name(all_patterns().back()), "Muted");
    EXPECT_EQ(pattern_from_name("Pull Payment"), PatternId::PullPayment);
    EXPECT_EQ(pattern_from_name("PullPayment"), PatternId::PullPayment);
    EXPECT_FALSE(pattern_from_name("MultiReturn"));
}

TEST(Catalog, EligibilityMatchesOracleTable)
{
    for (PatternId id : all_patterns())
        for (EntityKind k : {EntityKind::contract, EntityKind::abstract_contract, EntityKind::interface, EntityKind::library})
            EXPECT_EQ(is_eligible(id, k), oracle::eligible(std::string(pattern_name(id)), k)) << pattern_name(id);
}

TEST(Ownable, Examples)
{
    EXPECT_TRUE(matches(PatternId::Ownable, kOwnable, "C"));
    EXPECT_FALSE(matches(PatternId::Ownable, R"(
contract C {
    address internal owner;
    modifier onlyOwner() { require(msg.sender == owner); _; }
    function f() public onlyOwner {}
})", "C"));
    EXPECT_FALSE(matches(PatternId::Ownable, R"(
contract C {
    address public owner;
    modifier onlyOwner() { require(msg.sender == owner); _; }
    function f() public {}
})", "C"));
}

TEST(Ownable, EvidenceNamesWitnesses)
{
    auto m = detect(PatternId::Ownable, analyze_one(kOwnable)["C"]);
    ASSERT_TRUE(m.matched);
    EXPECT_EQ(m.evidence, (std::vector<std::string>{"owner", "onlyOwner", "f"}));
}

TEST(Stoppable, Examples)
{
    EXPECT_TRUE(matches(PatternId::Stoppable, R"(
contract C {
    bool paused;
    modifier whenNotPaused() { require(!paused); _; }
    function pause() public { paused = true; }
    function act() public whenNotPaused {}
})", "C"));
    EXPECT_FALSE(matches(PatternId::Stoppable, R"(
contract C {
    bool paused;
    modifier whenNotPaused() { require(!paused); _; }
    constructor() { paused = true; }
    function act() public whenNotPaused {}
})", "C"));
    EXPECT_FALSE(matches(PatternId::Stoppable, R"(
contract C {
    uint flag;
    modifier live() { require(flag == 0); _; }
    function stop() public { flag = 1; }
    function act() public live {}
})", "C"));
}

TEST(PullPayment, Examples)
{
    EXPECT_TRUE(matches(PatternId::PullPayment, R"(
contract C {
    mapping(address => uint) credits;
    function withdraw() public {
        uint amount = credits[msg.sender];
        credits[msg.sender] = 0;
        payable(msg.sender).transfer(amount);
    }
})", "C"));
    EXPECT_FALSE(matches(PatternId::PullPayment, R"(
contract C {
    mapping(address => uint) credits;
    function push(address payable to) public { to.transfer(credits[to]); }
})", "C"));
    EXPECT_FALSE(matches(PatternId::PullPayment, R"(
contract C {
    mapping(address => uint) credits;
    function look() public view returns (uint) { return credits[msg.sender]; }
})", "C"));
}

TEST(ReentrancyGuard, Examples)
{
    EXPECT_TRUE(matches(PatternId::ReentrancyGuard, R"(
contract C {
    bool locked;
    modifier nonReentrant() { require(!locked); locked = true; _; locked = false; }
    function f() external nonReentrant {}
})", "C"));
    EXPECT_FALSE(matches(PatternId::ReentrancyGuard, R"(
contract C {
    bool locked;
    modifier nonReentrant() { require(!locked); locked = true; _; }
    function f() external nonReentrant {}
})", "C"));
    EXPECT_FALSE(matches(PatternId::ReentrancyGuard, R"(
contract C {
    bool locked;
    modifier nonReentrant() { require(!locked); locked = true; _; locked = false; }
    function f() external {}
})", "C"));
}

TEST(Payable, Examples)
{
    EXPECT_TRUE(matches(PatternId::Payable, "contract C { receive() external payable {} fallback() external payable {} }", "C"));
    EXPECT_FALSE(matches(PatternId::Payable, "contract C { receive() external payable {} }", "C"));
    EXPECT_FALSE(matches(PatternId::Payable, "library L { function f() internal {} }", "L"));
}

TEST(Payable, LegacyUnnamedFallbackCountsAsFallback)
{
    auto a = analyze_one("pragma solidity ^0.4.24;\ncontract C { function() public payable {} }");
    ASSERT_EQ(a["C"].all_functions.size(), 1u);
    EXPECT_EQ(a["C"].all_functions[0].special, FunctionSpecial::fallback);
    EXPECT_FALSE(detect(PatternId::Payable, a["C"]).matched);
}

TEST(Borrower, Examples)
{
    const char* lib = R"(
library SafeMath { function add(uint a, uint b) internal pure returns (uint) { return a + b; } }
library Math { function max(uint a, uint b) internal pure returns (uint) { return a > b ? a : b; } }
)";
    EXPECT_TRUE(matches(PatternId::Borrower, std::string(lib) + R"(
contract C { using SafeMath for uint; uint t; function f(uint y) public { t = t.add(y); } })", "C"));
    EXPECT_TRUE(matches(PatternId::Borrower, std::string(lib) + R"(
contract C { function f(uint a, uint b) public pure returns (uint) { return Math.max(a, b); } })", "C"));
    EXPECT_FALSE(matches(PatternId::Borrower, std::string(lib) + R"(
contract C { using SafeMath for uint; uint t; function f(uint y) public { t = t + y; } })", "C"));
}

TEST(Borrower, ImportedLibraryIsReachable)
{
    auto a = analyze({{"lib/Math.sol", "library Math { function max(uint a, uint b) internal pure returns (uint) { return a; } }"},
                      {"C.sol", "import \"./lib/Math.sol\";\ncontract C { function f() public pure returns (uint) { return Math.max(1, 2); } }"}});
    EXPECT_TRUE(detect(PatternId::Borrower, a["C"]).matched);
}

TEST(Implementer, Examples)
{
    const char* iface = "interface I { function f() external; function g() external; }\n";
    EXPECT_TRUE(matches(PatternId::Implementer, std::string(iface) + "contract C is I { function f() external {} function g() external {} }", "C"));
    EXPECT_FALSE(matches(PatternId::Implementer, std::string(iface) + "contract C is I { function f() external {} function g() external {} function h() external {} }", "C"));
    EXPECT_FALSE(matches(PatternId::Implementer, "contract C { function f() external {} }", "C"));
}

TEST(ModifierUsage, Examples)
{
    EXPECT_TRUE(matches(PatternId::ModifierUsage, R"(
contract A { address owner; modifier onlyOwner() { require(msg.sender == owner); _; } }
contract C is A { function f() public onlyOwner {} })", "C"));
    EXPECT_FALSE(matches(PatternId::ModifierUsage, "contract C { modifier m() { _; } function f() public {} }", "C"));
    EXPECT_FALSE(matches(PatternId::ModifierUsage, "interface I { function f() external; }", "I"));
}

TEST(StorageSaver, Examples)
{
    EXPECT_TRUE(matches(PatternId::StorageSaver, "contract C { uint128 a; uint128 b; uint256 c; }", "C"));
    EXPECT_FALSE(matches(PatternId::StorageSaver, "contract C { uint128 a; uint256 b; uint128 c; }", "C"));
    EXPECT_TRUE(matches(PatternId::StorageSaver, "contract C { function f() public {} }", "C"));
}

TEST(ReaderOperator, Examples)
{
    auto a = analyze_one(R"(
interface V { function a() external view returns (uint); function b() external view returns (uint); }
library P { function a(uint x) internal pure returns (uint) { return x; } }
contract M { uint s; function a() public view returns (uint) { return s; } function b(uint x) public pure returns (uint) { return x; } })");
    EXPECT_TRUE(match_reader(a["V"]));
    EXPECT_FALSE(match_operator(a["V"]));
    EXPECT_TRUE(match_operator(a["P"]));
    EXPECT_FALSE(match_reader(a["M"]));
    EXPECT_FALSE(match_operator(a["M"]));
}

TEST(ProviderSupporter, Examples)
{
    auto a = analyze_one(R"(
interface I { function a() external; }
library L { function a(uint x) internal pure returns (uint) { return x; } }
contract C { function a() external {} function b() public {} })");
    EXPECT_TRUE(match_provider(a["I"]));
    EXPECT_TRUE(match_supporter(a["L"]));
    EXPECT_FALSE(match_provider(a["C"]));
}

TEST(Supporter, PrivateIsNotInternal)
{
    EXPECT_FALSE(matches(PatternId::Supporter, "contract C { function a() private {} }", "C"));
}

TEST(Delegator, Examples)
{
    const char* iface = "interface IERC20 { function transfer(address to, uint v) external returns (bool); }\n";
    EXPECT_TRUE(matches(PatternId::Delegator, std::string(iface) + "contract C { IERC20 token; function f() public { token.transfer(msg.sender, 1); } }", "C"));
    EXPECT_FALSE(matches(PatternId::Delegator, std::string(iface) + "contract C { IERC20 token; function f(IERC20 t) public { token = t; } }", "C"));
    EXPECT_FALSE(matches(PatternId::Delegator, std::string(iface) + "contract C { function f(IERC20 t) public { t.transfer(msg.sender, 1); } }", "C"));
}

TEST(NamedReturnReturnless, Examples)
{
    auto a = analyze_one(R"(
contract N { function a() public pure returns (uint total) { total = 1; } }
contract V { function a() public {} function b() public {} }
contract X { function a() public pure returns (uint total) { total = 1; } function b() public pure returns (uint) { return 1; } })");
    EXPECT_TRUE(match_named_return(a["N"]));
    EXPECT_TRUE(match_returnless(a["V"]));
    EXPECT_FALSE(match_named_return(a["V"]));
    EXPECT_FALSE(match_named_return(a["X"]));
}

TEST(EmitterMuted, Examples)
{
    auto a = analyze_one(R"(
contract E { event X(); function a() public { emit X(); } function b() public { emit X(); } }
contract M { function a() public {} }
contract H { event X(); function a() public { emit X(); } function b() public {} })");
    EXPECT_TRUE(match_emitter(a["E"]));
    EXPECT_TRUE(match_muted(a["M"]));
    EXPECT_FALSE(match_emitter(a["M"]));
    EXPECT_FALSE(match_emitter(a["H"]));
    EXPECT_FALSE(match_muted(a["H"]));
}

TEST(DetectAll, EmptyInputGivesEmptyMatrix)
{
    EXPECT_TRUE(detect_all({}).rows.empty());
}

TEST(DetectAll, SingleMutedOnlyRowAgreesWithOracle)
{
    auto a = analyze_one("library L { event E(); function f(uint x) private returns (uint) { x = 1; } }");
    PatternMatrix m = detect_all({a["L"]});
    ASSERT_EQ(m.rows.size(), 1u);
    int trues = 0;
    for (PatternId id : all_patterns()) {
        EXPECT_EQ(m.rows[0].patterns[index_of(id)], oracle::holds(std::string(pattern_name(id)), a["L"])) << pattern_name(id);
        trues += m.rows[0].patterns[index_of(id)];
    }
    EXPECT_EQ(trues, 1);
    EXPECT_TRUE(m.rows[0].patterns[index_of(PatternId::Muted)]);
}

TEST(DetectAll, SkippedRowsAreMarkedAndSorted)
{
    auto a = analyze({{"b.sol", "contract Z { function f() public {} }"}, {"a.sol", "contract Y { function f() public {} }"}}, "proj");
    PatternMatrix m = detect_all({a["Z"], a["Y"]}, {SkippedEntity{"W", EntityKind::contract, "proj/a.sol", "", "cycle"}});
    ASSERT_EQ(m.rows.size(), 3u);
    EXPECT_EQ(m.rows[0].name, "W");
    EXPECT_TRUE(m.rows[0].skipped);
    EXPECT_EQ(m.rows[1].name, "Y");
    EXPECT_EQ(m.rows[2].name, "Z");
    EXPECT_EQ(m.analyzed_count(), 2u);
}

TEST(OracleEquivalence, DetectorFixtures)
{
    for (const auto& entry : std::filesystem::directory_iterator(fixture_dir() / "detectors")) {
        if (entry.path().extension() != ".sol")
            continue;
        auto a = analyze({{entry.path().filename().string(), read_file(entry.path())}});
        for (const auto& [name, flat] : a.flat)
            for (PatternId id : all_patterns())
                EXPECT_EQ(detect(id, flat).matched, oracle::holds(std::string(pattern_name(id)), flat))
                    << pattern_name(id) << " on " << name;
    }
}

TEST(OracleEquivalence, RandomEntities)
{
    EntityGenerator gen(20240611);
    for (int i = 0; i < 1000; ++i) {
        FlattenedEntity flat = gen.next();
        for (PatternId id : all_patterns())
            ASSERT_EQ(detect(id, flat).matched, oracle::holds(std::string(pattern_name(id)), flat))
                << pattern_name(id) << " on random entity " << i;
    }
}

TEST(Properties, EligibilityNeverViolated)
{
    EntityGenerator gen(7);
    for (int i = 0; i < 1000; ++i) {
        FlattenedEntity flat = gen.next();
        for (PatternId id : all_patterns())
            if (!is_eligible(id, flat.entity.kind))
                EXPECT_FALSE(detect(id, flat).matched);
    }
}

TEST(Properties, ExclusiveAndInclusivePairs)
{
    EntityGenerator gen(99);
    for (int i = 0; i < 1000; ++i) {
        FlattenedEntity flat = gen.next();
        PatternRow r = detect_row(flat);
        auto at = [&](PatternId id) { return r[index_of(id)]; };
        EXPECT_FALSE(at(PatternId::Reader) && at(PatternId::Operator));
        EXPECT_FALSE(at(PatternId::Emitter) && at(PatternId::Muted));
        EXPECT_FALSE(at(PatternId::Provider) && at(PatternId::Supporter));
        EXPECT_FALSE(at(PatternId::NamedReturn) && at(PatternId::Returnless));
        if (flat.entity.kind == EntityKind::contract || flat.entity.kind == EntityKind::abstract_contract) {
            if (at(PatternId::Ownable))
                EXPECT_TRUE(at(PatternId::ModifierUsage));
            if (at(PatternId::Stoppable))
                EXPECT_TRUE(at(PatternId::ModifierUsage));
        }
    }
}

TEST(Properties, DetectorsArePure)
{
    EntityGenerator gen(5);
    for (int i = 0; i < 200; ++i) {
        FlattenedEntity flat = gen.next();
        EXPECT_EQ(detect_row(flat), detect_row(flat));
    }
}

TEST(Properties, RandomCorpusHitsEveryPattern)
{
    EntityGenerator gen(11);
    std::array<int, kPatternCount> hits{};
    for (int i = 0; i < 2000; ++i) {
        PatternRow r = detect_row(gen.next());
        for (std::size_t k = 0; k < kPatternCount; ++k)
            hits[k] += r[k];
    }
    for (PatternId id : all_patterns())
        EXPECT_GT(hits[index_of(id)], 0) << pattern_name(id);
}
