#include "support.hpp"

#include "sensekit/error.hpp"
#include "sensekit/inventory.hpp"

#include "doctest.h"

#include <set>
#include <sstream>

using namespace sensekit;

namespace {

SenseInventory parse(const std::string& s) {
    std::istringstream in(s);
    return load_inventory(in);
}

std::vector<std::string> ids(const std::vector<const Synset*>& v) {
    std::vector<std::string> out;
    for (const Synset* s : v) out.push_back(s->id.str());
    return out;
}

}  // namespace

TEST_CASE("single synset line") {
    const auto inv = parse("1\texperiment,experimenting\tattempt,research\n");
    REQUIRE(inv.size() == 1);
    CHECK(inv.synsets()[0].bag.size() == 4);
    CHECK(ids(candidates(inv, "experiment")) == std::vector<std::string>{"1"});
    CHECK(inv.stats().s_max == 4);
    CHECK(inv.stats().w_max == 1);
}

TEST_CASE("empty stream gives an empty inventory") {
    const auto inv = parse("");
    CHECK(inv.empty());
    CHECK(inventory_stats(inv) == InventoryStats{});
}

TEST_CASE("shared lemma is indexed by both synsets in id order") {
    const auto inv = parse("10\tbank,shore\n2\tbank,depository\n");
    CHECK(ids(candidates(inv, "bank")) == std::vector<std::string>{"2", "10"});
    CHECK(inv.stats().w_max == 2);
}

TEST_CASE("hypernym-only lemma returns the synset") {
    const auto inv = parse("1\tbass\tfish\n");
    CHECK(ids(candidates(inv, "fish")) == std::vector<std::string>{"1"});
    CHECK(candidates(inv, "trout").empty());
}

TEST_CASE("lemmas are case folded and whitespace around entries is trimmed") {
    const auto inv = parse("1\tBank , Ufer\t STRAßE\n");
    CHECK(inv.synsets()[0].synonyms == std::vector<std::string>{"bank", "ufer"});
    CHECK(inv.synsets()[0].hypernyms == std::vector<std::string>{"straße"});
}

TEST_CASE("bag keeps multiplicity") {
    const auto inv = parse("1\tbass,bass\tbass\n");
    CHECK(inv.synsets()[0].bag.size() == 3);
    CHECK(inv.vocabulary() == std::vector<std::string>{"bass"});
    CHECK(inv.stats().vocabulary_size == 1);
}

TEST_CASE("comments, blank lines and CRLF") {
    const auto inv = parse("# header\n\n1\ta,b\r\n  \n2\tc\r\n");
    CHECK(inv.size() == 2);
    CHECK(inv.synsets()[0].synonyms == std::vector<std::string>{"a", "b"});
}

TEST_CASE("malformed input reports the line number") {
    auto line_of = [](const std::string& s) {
        try {
            parse(s);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("1\ta\n2\n") == 2);
    CHECK(line_of("1\ta\n\n1\tb\n") == 3);
    CHECK(line_of("1\t\n") == 1);
    CHECK(line_of("1\ta,,b\n") == 1);
    CHECK(line_of("\tb\n") == 1);
    CHECK(line_of("1\ta\tb\tc\n") == 1);
    CHECK(line_of("1\ta\xff\n") == 1);
}

TEST_CASE("constructor checks invariants") {
    Synset s;
    s.id = SynsetId("1");
    CHECK_THROWS_AS(SenseInventory({s}), InvalidArgument);
    s.synonyms = {"a"};
    CHECK_THROWS_AS(SenseInventory({s, s}), InvalidArgument);
    s.bag = {"b"};
    CHECK_THROWS_AS(SenseInventory({s}), InvalidArgument);
    s.id = SynsetId("");
    s.bag.clear();
    CHECK_THROWS_AS(SenseInventory({s}), InvalidArgument);
}

TEST_CASE("synset id order: numeric first, by value") {
    CHECK(SynsetId("2") < SynsetId("10"));
    CHECK(SynsetId("10") < SynsetId("a"));
    CHECK(SynsetId("007") < SynsetId("8"));
    CHECK(SynsetId("07") < SynsetId("7"));
    CHECK(SynsetId("a1") < SynsetId("b"));
    CHECK(SynsetId("5") == SynsetId("5"));
}

TEST_CASE("index completeness against a brute-force scan") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 200; ++round) {
        const auto r = testing::random_inventory(rng);
        const auto& inv = r.inventory;
        std::set<std::string> vocab;
        std::size_t w_max = 0;
        std::size_t s_max = 0;
        for (const auto& s : inv.synsets()) {
            vocab.insert(s.bag.begin(), s.bag.end());
            s_max = std::max(s_max, s.bag.size());
        }
        for (const auto& lemma : vocab) {
            std::vector<std::string> expect;
            for (const auto& s : inv.synsets()) {
                if (std::find(s.bag.begin(), s.bag.end(), lemma) != s.bag.end()) expect.push_back(s.id.str());
            }
            std::sort(expect.begin(), expect.end(),
                      [](const std::string& a, const std::string& b) { return std::stoll(a) < std::stoll(b); });
            REQUIRE(ids(candidates(inv, lemma)) == expect);
            w_max = std::max(w_max, expect.size());
        }
        CHECK(inv.stats().vocabulary_size == vocab.size());
        CHECK(inv.stats().w_max == w_max);
        CHECK(inv.stats().s_max == s_max);
        CHECK(inv.stats().synset_count == inv.size());
    }
}

TEST_CASE("round trip and determinism") {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 100; ++round) {
        const auto r = testing::random_inventory(rng);
        std::ostringstream a;
        write_inventory(a, r.inventory);
        const auto first = parse(a.str());
        const auto second = parse(a.str());
        REQUIRE(first == r.inventory);
        REQUIRE(first == second);
        std::ostringstream b;
        write_inventory(b, first);
        REQUIRE(a.str() == b.str());
        for (const auto& w : r.vocabulary) REQUIRE(ids(candidates(first, w)) == ids(candidates(second, w)));
    }
}

TEST_CASE("fixture inventory round-trips byte-exactly") {
    const std::string bytes = testing::read_file(testing::fixture("inventory.tsv"));
    std::ostringstream out;
    write_inventory(out, parse(bytes));
    CHECK(out.str() == bytes);
}

TEST_CASE("missing file") { CHECK_THROWS_AS(load_inventory_file("/nonexistent/inv.tsv"), Error); }
