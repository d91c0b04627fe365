#include "support.hpp"

#include "sensekit/config.hpp"
#include "sensekit/error.hpp"

#include "doctest.h"

#include <sstream>

using namespace sensekit;

namespace {

ServiceConfig parse(const std::string& s) {
    std::istringstream in(s);
    return parse_config(in, "/base");
}

std::size_t error_line(const std::string& s) {
    try {
        parse(s);
    } catch (const ParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST_CASE("defaults") {
    const auto c = parse("");
    CHECK(c.analyzer == "baseline");
    CHECK(c.text_limit == 20000);
    CHECK(c.inventories.empty());
    CHECK_FALSE(c.embeddings);
    CHECK(c.cors_origin == "*");
}

TEST_CASE("all keys") {
    const auto c = parse(
        "# comment\n"
        "analyzer = lexicon\n"
        "analyzer.lexicon = lex.tsv\n"
        "analyzer.default_pos = VERB\n"
        "inventory.b = /abs/b.tsv\n"
        "inventory.a = rel/a.tsv\n"
        "embeddings = e.bin\n"
        "vector_server = host:1\n"
        "text_limit = 50\n"
        "listen = 0.0.0.0:8080\n"
        "static_dir = ui\n"
        "cors_origin = http://x\n"
        "sparse.idf = plain\n"
        "sparse.binary_tf = true\n"
        "sparse.exclude_target = yes\n"
        "dense.full_bag_mean = 1\n");
    CHECK(c.analyzer == "lexicon");
    CHECK(c.analyzer_options.at("lexicon") == "/base/lex.tsv");
    CHECK(c.analyzer_options.at("default_pos") == "VERB");
    REQUIRE(c.inventories.size() == 2);
    CHECK(c.inventories[0].first == "b");
    CHECK(c.inventories[0].second == "/abs/b.tsv");
    CHECK(c.inventories[1].second == "/base/rel/a.tsv");
    CHECK(*c.embeddings == "/base/e.bin");
    CHECK(*c.vector_server == "host:1");
    CHECK(c.text_limit == 50);
    CHECK(*c.listen == "0.0.0.0:8080");
    CHECK(*c.static_dir == "/base/ui");
    CHECK(c.cors_origin == "http://x");
    CHECK(c.sparse.idf == IdfVariant::Plain);
    CHECK(c.sparse.binary_tf);
    CHECK(c.sparse.exclude_target);
    CHECK(c.dense.full_bag_mean);
}

TEST_CASE("errors") {
    CHECK(error_line("analyzer = x\nbogus = 1\n") == 2);
    CHECK(error_line("no equals sign\n") == 1);
    CHECK(error_line("inventory.a = x\ninventory.a = y\n") == 2);
    CHECK(error_line("text_limit = -5\n") == 1);
    CHECK(error_line("text_limit = 0\n") == 1);
    CHECK(error_line("sparse.idf = weird\n") == 1);
    CHECK(error_line("dense.full_bag_mean = maybe\n") == 1);
    CHECK(error_line("inventory. = x\n") == 1);
    CHECK(error_line(" = x\n") == 1);
}

TEST_CASE("environment override") {
    auto c = parse("vector_server = a:1\n");
    apply_env_overrides(c, [](const char* name) -> std::optional<std::string> {
        return std::string(name) == "VECTOR_SERVER_ADDR" ? std::optional<std::string>("b:2") : std::nullopt;
    });
    CHECK(*c.vector_server == "b:2");
    apply_env_overrides(c, [](const char*) -> std::optional<std::string> { return std::nullopt; });
    CHECK(*c.vector_server == "b:2");
}

TEST_CASE("fixture config resolves relative to its directory") {
    const auto c = load_config_file(testing::fixture("service.conf"));
    REQUIRE(c.inventories.size() == 1);
    CHECK(c.inventories[0].second == testing::fixture("inventory.tsv"));
    CHECK(std::filesystem::exists(*c.embeddings));
    CHECK_THROWS_AS(load_config_file("/nonexistent.conf"), Error);
}
