#include "sensekit/embeddings.hpp"

#include "binary_io.hpp"
#include "sensekit/error.hpp"
#include "sensekit/text.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace sensekit {

namespace {

// Longest header we accept before giving up on finding '\n'.
constexpr std::size_t kMaxHeader = 64;
// Longest word token we accept.
constexpr std::size_t kMaxWord = 4096;

std::size_t parse_count(std::string_view s, std::size_t offset, const char* what) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw FormatError(offset, std::string("bad ") + what + " in header");
    }
    return value;
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) throw InvalidArgument("embedding dimension must be positive");
}

bool EmbeddingStore::add(std::string word, std::span<const float> vector) {
    if (vector.size() != dimension_) throw InvalidArgument("vector for '" + word + "' has wrong dimension");
    if (word.empty() || word.find(' ') != std::string::npos) throw InvalidArgument("invalid embedding word");
    if (exact_.contains(word)) return false;
    const std::size_t i = words_.size();
    exact_.emplace(word, i);
    if (text::is_valid_utf8(word)) folded_.try_emplace(text::fold_case(word), i);
    words_.push_back(std::move(word));
    data_.insert(data_.end(), vector.begin(), vector.end());
    return true;
}

std::span<const float> EmbeddingStore::vector_at(std::size_t i) const {
    return std::span<const float>(data_).subspan(i * dimension_, dimension_);
}

std::optional<std::span<const float>> EmbeddingStore::find(std::string_view lemma) const {
    auto it = folded_.find(std::string(lemma));
    if (it == folded_.end()) return std::nullopt;
    return vector_at(it->second);
}

std::vector<std::optional<WordVector>> EmbeddingStore::lookup(std::span<const std::string> words) const {
    std::vector<std::optional<WordVector>> out;
    out.reserve(words.size());
    for (const auto& w : words) {
        if (auto v = find(w)) {
            out.emplace_back(WordVector(v->begin(), v->end()));
        } else {
            out.emplace_back(std::nullopt);
        }
    }
    return out;
}

EmbeddingStore load_embeddings_binary(std::istream& in) {
    binary::Reader reader(in);

    std::string header;
    while (true) {
        const int c = reader.get();
        if (c == std::char_traits<char>::eof()) throw FormatError(reader.offset(), "truncated header");
        if (c == '\n') break;
        header.push_back(static_cast<char>(c));
        if (header.size() > kMaxHeader) throw FormatError(reader.offset(), "header line too long");
    }
    const auto sep = header.find(' ');
    if (sep == std::string::npos) throw FormatError(0, "header must be '<count> <dimension>'");
    const std::size_t count = parse_count(std::string_view(header).substr(0, sep), 0, "vocabulary count");
    const std::size_t dim = parse_count(text::trim(std::string_view(header).substr(sep + 1)), sep + 1, "dimension");
    if (dim == 0) throw FormatError(sep + 1, "dimension must be positive");

    EmbeddingStore store(dim);
    std::vector<char> raw(dim * sizeof(float));
    std::vector<float> vec(dim);
    for (std::size_t r = 0; r < count; ++r) {
        std::string word;
        while (true) {
            const int c = reader.get();
            if (c == std::char_traits<char>::eof()) {
                throw FormatError(reader.offset(), "truncated in record " + std::to_string(r) + " of " +
                                                       std::to_string(count));
            }
            if (c == ' ') break;
            if (c == '\n' && word.empty()) continue;
            word.push_back(static_cast<char>(c));
            if (word.size() > kMaxWord) throw FormatError(reader.offset(), "word too long");
        }
        if (word.empty()) throw FormatError(reader.offset(), "empty word in record " + std::to_string(r));
        reader.read_bytes(raw.data(), raw.size(), "vector");
        for (std::size_t k = 0; k < dim; ++k) vec[k] = binary::decode_le<float>(raw.data() + k * sizeof(float));
        bool newline = false;
        if (reader.peek() == '\n') {
            reader.get();
            newline = true;
        }
        if (r == 0) store.newline_terminated = newline;
        store.add(std::move(word), vec);
    }
    if (reader.peek() != std::char_traits<char>::eof()) {
        throw FormatError(reader.offset(),
                          "data after the " + std::to_string(count) + " records declared in the header");
    }
    return store;
}

EmbeddingStore load_embeddings_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open embeddings " + path.string());
    return load_embeddings_binary(in);
}

void write_embeddings_binary(std::ostream& out, const EmbeddingStore& store) {
    out << store.size() << ' ' << store.dimension() << '\n';
    for (std::size_t i = 0; i < store.size(); ++i) {
        out << store.words()[i] << ' ';
        for (float v : store.vector_at(i)) binary::write_le<float>(out, v);
        if (store.newline_terminated) out << '\n';
    }
}

}  // namespace sensekit
