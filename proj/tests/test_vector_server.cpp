#include "support.hpp"

#include "sensekit/dense.hpp"
#include "sensekit/error.hpp"
#include "sensekit/vector_server.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cstring>
#include <thread>

using namespace sensekit;
using nlohmann::json;

namespace {

EmbeddingStore fixture_store() { return load_embeddings_file(testing::fixture("embeddings.bin")); }

Endpoint local(std::uint16_t port) { return Endpoint{"127.0.0.1", port}; }

}  // namespace

TEST_CASE("endpoint parsing") {
    const auto a = Endpoint::parse("localhost:7070");
    CHECK(a.host == "localhost");
    CHECK(a.port == 7070);
    CHECK(Endpoint::parse(":81").host == "127.0.0.1");
    CHECK(Endpoint::parse("10.0.0.1:0").to_string() == "10.0.0.1:0");
    CHECK_THROWS_AS(Endpoint::parse("nohost"), InvalidArgument);
    CHECK_THROWS_AS(Endpoint::parse("h:99999"), InvalidArgument);
    CHECK_THROWS_AS(Endpoint::parse("h:x"), InvalidArgument);
}

TEST_CASE("request encoding and server-side handling") {
    const std::vector<std::string> words{"cash", "nope"};
    CHECK(encode_lookup_request(words) == R"({"op":"lookup","words":["cash","nope"]})");
    const auto store = fixture_store();
    const auto resp = json::parse(handle_vector_request(store, encode_lookup_request(words)));
    CHECK(resp["dim"] == 4);
    CHECK(resp["vectors"]["nope"].is_null());
    CHECK(resp["vectors"]["cash"].size() == 4);
    CHECK(json::parse(handle_vector_request(store, "{oops"))["error"].is_string());
    CHECK(json::parse(handle_vector_request(store, R"({"op":"delete"})"))["error"].is_string());
    CHECK(json::parse(handle_vector_request(store, R"({"op":"lookup","words":[1]})"))["error"].is_string());
}

TEST_CASE("remote lookups equal file lookups bit for bit") {
    const auto store = fixture_store();
    VectorServer server(store, local(0));
    server.start();
    RemoteVectorSource remote(local(server.port()));
    CHECK(remote.dimension() == 4);
    CHECK(remote.kind() == VectorSourceKind::Remote);

    std::vector<std::string> words = store.words();
    words.push_back("unknown-word");
    words.push_back("FINANCE");
    const std::size_t before = remote.round_trips();
    const auto got = remote.lookup(words);
    CHECK(remote.round_trips() == before + 1);
    const auto want = store.lookup(words);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        REQUIRE(got[i].has_value() == want[i].has_value());
        if (got[i]) REQUIRE(std::memcmp(got[i]->data(), want[i]->data(), 4 * sizeof(float)) == 0);
    }
    CHECK_FALSE(got[words.size() - 2]);

    CHECK(remote.lookup({}).empty());
    CHECK(remote.round_trips() == before + 1);
    server.stop();
}

TEST_CASE("concurrent callers share one client") {
    const auto store = fixture_store();
    VectorServer server(store, local(0));
    server.start();
    RemoteVectorSource remote(local(server.port()));
    std::vector<std::thread> threads;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 50; ++i) {
                const std::vector<std::string> w{store.words()[(t + i) % store.size()]};
                const auto v = remote.lookup(w);
                if (!v[0] || *v[0] != *store.lookup(w)[0]) ++mismatches;
            }
        });
    }
    for (auto& th : threads) th.join();
    CHECK(mismatches == 0);
    server.stop();
}

TEST_CASE("reconnects after the server restarts") {
    const auto store = fixture_store();
    auto server = std::make_unique<VectorServer>(store, local(0));
    const auto port = server->port();
    server->start();
    RemoteVectorSource remote(local(port));
    const std::vector<std::string> w{"fish"};
    CHECK(remote.lookup(w)[0]);
    server->stop();
    server.reset();
    server = std::make_unique<VectorServer>(store, local(port));
    server->start();
    CHECK(remote.lookup(w)[0]);
    server->stop();
}

TEST_CASE("connection failures and dimension mismatch") {
    std::uint16_t port = 0;
    {
        const auto store = fixture_store();
        VectorServer probe(store, local(0));
        port = probe.port();
    }
    try {
        RemoteVectorSource remote(local(port));
        FAIL("expected ConnectionError");
    } catch (const ConnectionError& e) {
        CHECK(e.retryable());
    }

    const auto store = fixture_store();
    VectorServer server(store, local(0));
    server.start();
    CHECK_THROWS_AS(RemoteVectorSource(local(server.port()), 5), InvalidArgument);
    CHECK_NOTHROW(RemoteVectorSource(local(server.port()), 4));
    server.stop();
}

TEST_CASE("dense model gives identical assignments over file and remote sources") {
    const auto store = fixture_store();
    VectorServer server(store, local(0));
    server.start();
    RemoteVectorSource remote(local(server.port()));

    std::mt19937_64 rng(51);
    for (int round = 0; round < 50; ++round) {
        const auto r = testing::random_inventory(rng, 20, 6);
        // Reuse the fixture words as vocabulary.
        std::vector<Synset> synsets = r.inventory.synsets();
        for (auto& s : synsets) {
            for (auto* list : {&s.synonyms, &s.hypernyms}) {
                for (auto& l : *list) l = store.words()[std::stoul(l.substr(1)) % store.size()];
            }
            s.bag.clear();
        }
        const SenseInventory inv(std::move(synsets));
        DenseDisambiguator file_model(inv, store);
        DenseDisambiguator remote_model(inv, remote);
        const auto rs = testing::random_sentence(rng, store.words());
        REQUIRE(file_model.disambiguate_sentence(rs.sentence) == remote_model.disambiguate_sentence(rs.sentence));
    }
    server.stop();
}
