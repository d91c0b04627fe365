#pragma once

#include "oracle/oracle.hpp"

#include "sensekit/disambiguator.hpp"
#include "sensekit/embeddings.hpp"
#include "sensekit/inventory.hpp"
#include "sensekit/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

inline std::filesystem::path fixture_dir() { return SENSEKIT_FIXTURE_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return fixture_dir() / name; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A random inventory kept in both library and oracle form.
struct RandomInventory {
    sensekit::SenseInventory inventory;
    std::vector<oracle::Synset> raw;
    std::vector<std::string> vocabulary;  // words bags are drawn from
};

inline std::string vocab_word(std::size_t i) { return "w" + std::to_string(i); }

inline RandomInventory random_inventory(std::mt19937_64& rng, std::size_t max_synsets = 20, std::size_t vocab = 14) {
    std::uniform_int_distribution<std::size_t> n_dist(1, max_synsets);
    std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
    std::uniform_int_distribution<int> syn_count(1, 4);
    std::uniform_int_distribution<int> hyp_count(0, 3);

    RandomInventory out;
    for (std::size_t v = 0; v < vocab; ++v) out.vocabulary.push_back(vocab_word(v));
    const std::size_t n = n_dist(rng);
    std::vector<sensekit::Synset> synsets;
    for (std::size_t i = 0; i < n; ++i) {
        sensekit::Synset s;
        s.id = sensekit::SynsetId(std::to_string(i + 1));
        for (int k = syn_count(rng); k > 0; --k) s.synonyms.push_back(vocab_word(word(rng)));
        for (int k = hyp_count(rng); k > 0; --k) s.hypernyms.push_back(vocab_word(word(rng)));
        oracle::Synset r;
        r.id = static_cast<long long>(i + 1);
        r.bag = s.synonyms;
        r.bag.insert(r.bag.end(), s.hypernyms.begin(), s.hypernyms.end());
        out.raw.push_back(std::move(r));
        synsets.push_back(std::move(s));
    }
    // Shuffle storage order so candidate ordering is exercised.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<sensekit::Synset> shuffled;
    for (std::size_t i : order) shuffled.push_back(synsets[i]);
    out.inventory = sensekit::SenseInventory(std::move(shuffled));
    return out;
}

/// A random sentence over the inventory words plus out-of-vocabulary words,
/// in library and oracle form.
struct RandomSentence {
    sensekit::AnalyzedSentence sentence;
    std::vector<oracle::Token> tokens;
};

inline RandomSentence random_sentence(std::mt19937_64& rng, const std::vector<std::string>& vocabulary,
                                      std::size_t max_tokens = 15) {
    std::uniform_int_distribution<std::size_t> len(1, max_tokens);
    std::uniform_int_distribution<std::size_t> word(0, vocabulary.size() + 3);
    std::bernoulli_distribution content(0.8);
    RandomSentence out;
    const std::size_t n = len(rng);
    std::size_t offset = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t w = word(rng);
        const std::string lemma = w < vocabulary.size() ? vocabulary[w] : "oov" + std::to_string(w);
        const bool is_content = content(rng);
        sensekit::Span span;
        span.word = lemma;
        span.lemma = lemma;
        span.pos = is_content ? sensekit::PosTag::Noun : sensekit::PosTag::Det;
        span.position = i;
        span.start = offset;
        span.end = offset + lemma.size();
        offset = span.end + 1;
        if (!out.sentence.source_text.empty()) out.sentence.source_text += ' ';
        out.sentence.source_text += lemma;
        out.sentence.spans.push_back(span);
        out.tokens.push_back({lemma, is_content});
    }
    return out;
}

/// Random embeddings for about 80% of `vocabulary`, dimension `d`.
inline std::pair<sensekit::EmbeddingStore, oracle::Embeddings> random_embeddings(
    std::mt19937_64& rng, const std::vector<std::string>& vocabulary, std::size_t d) {
    std::bernoulli_distribution present(0.8);
    std::uniform_real_distribution<float> comp(-1.0f, 1.0f);
    sensekit::EmbeddingStore store(d);
    oracle::Embeddings raw;
    for (const auto& w : vocabulary) {
        if (!present(rng)) continue;
        std::vector<float> v(d);
        for (auto& x : v) x = comp(rng);
        store.add(w, v);
        raw.emplace(w, v);
    }
    return {std::move(store), std::move(raw)};
}

inline long long numeric_id(const sensekit::SenseAssignment& a) { return std::stoll(a.synset_id->str()); }

}  // namespace testing
