#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sensekit {

enum class VectorSourceKind { File, Remote };

using WordVector = std::vector<float>;

/// Where dense word vectors come from. Unknown words are nullopt, never a zero vector.
class VectorSource {
public:
    virtual ~VectorSource() = default;
    virtual std::size_t dimension() const = 0;
    virtual VectorSourceKind kind() const = 0;

    /// One result per requested word, in request order.
    virtual std::vector<std::optional<WordVector>> lookup(std::span<const std::string> words) const = 0;
};

/// In-memory word -> vector table of fixed dimension.
///
/// Records keep file order and exact spelling so the binary form round-trips;
/// lookups go through a case-folded key (first record wins on collisions).
class EmbeddingStore final : public VectorSource {
public:
    explicit EmbeddingStore(std::size_t dimension);

    std::size_t dimension() const override { return dimension_; }
    VectorSourceKind kind() const override { return VectorSourceKind::File; }
    std::vector<std::optional<WordVector>> lookup(std::span<const std::string> words) const override;

    /// Appends a record; returns false (and stores nothing) if `word` is already present.
    /// Throws InvalidArgument on a dimension mismatch or a word containing a space.
    bool add(std::string word, std::span<const float> vector);

    std::optional<std::span<const float>> find(std::string_view lemma) const;

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }
    const std::vector<std::string>& words() const noexcept { return words_; }
    std::span<const float> vector_at(std::size_t i) const;

    /// Whether records end with '\n' when written.
    bool newline_terminated = true;

private:
    std::size_t dimension_;
    std::vector<std::string> words_;
    std::vector<float> data_;
    std::unordered_map<std::string, std::size_t> exact_;
    std::unordered_map<std::string, std::size_t> folded_;
};

/// Reads "<count> <dim>\n" then `count` records of `word ' ' float32[dim]`
/// (little-endian), each optionally followed by '\n'. Errors are FormatError
/// carrying the byte offset.
EmbeddingStore load_embeddings_binary(std::istream& in);
EmbeddingStore load_embeddings_file(const std::filesystem::path& path);

void write_embeddings_binary(std::ostream& out, const EmbeddingStore& store);

}  // namespace sensekit
