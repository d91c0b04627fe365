#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sensekit {

/// Opaque synset identifier.
///
/// Ordering is numeric when both ids are all digits ("2" < "10"), numeric ids
/// sort before non-numeric ones, and anything else compares as bytes.
/// Candidate lists and tie-breaking both follow this order.
class SynsetId {
public:
    SynsetId() = default;
    explicit SynsetId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend bool operator==(const SynsetId&, const SynsetId&) = default;
    friend std::strong_ordering operator<=>(const SynsetId& a, const SynsetId& b);

private:
    std::string value_;
};

/// One sense: synonyms plus one level of hypernyms. `bag` is the multiset
/// union of the two (synonyms first, then hypernyms, multiplicity kept).
struct Synset {
    SynsetId id;
    std::vector<std::string> synonyms;
    std::vector<std::string> hypernyms;
    std::vector<std::string> bag;

    bool bag_contains(std::string_view lemma) const;

    friend bool operator==(const Synset&, const Synset&) = default;
};

struct InventoryStats {
    std::size_t synset_count = 0;
    std::size_t vocabulary_size = 0;
    std::size_t w_max = 0;  // most synsets sharing one lemma
    std::size_t s_max = 0;  // largest bag

    friend bool operator==(const InventoryStats&, const InventoryStats&) = default;
};

/// Immutable synset collection with a lemma -> synset inverted index.
class SenseInventory {
public:
    SenseInventory() = default;

    /// Folds lemmas, (re)computes bags and builds the index.
    /// Throws InvalidArgument on an empty id, duplicate id or empty synonym list.
    explicit SenseInventory(std::vector<Synset> synsets);

    const std::vector<Synset>& synsets() const noexcept { return synsets_; }
    std::size_t size() const noexcept { return synsets_.size(); }
    bool empty() const noexcept { return synsets_.empty(); }

    /// Positions (into synsets()) of the synsets whose bag contains `lemma`,
    /// sorted by synset id. Empty for unknown lemmas.
    std::span<const std::size_t> candidate_indices(std::string_view lemma) const;

    const Synset* find(const SynsetId& id) const;

    /// Distinct bag lemmas in byte order.
    std::vector<std::string> vocabulary() const;

    const InventoryStats& stats() const noexcept { return stats_; }

    friend bool operator==(const SenseInventory& a, const SenseInventory& b) {
        return a.synsets_ == b.synsets_;
    }

private:
    std::vector<Synset> synsets_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> index_;
    std::map<SynsetId, std::size_t> by_id_;
    InventoryStats stats_;
};

enum class InventoryFormat { Tsv };

/// Parses `id<TAB>syn,syn,...[<TAB>hyp,hyp,...]` lines. Blank lines and lines
/// starting with '#' are skipped. Throws ParseError with the line number.
SenseInventory load_inventory(std::istream& in, InventoryFormat format = InventoryFormat::Tsv);
SenseInventory load_inventory_file(const std::filesystem::path& path);

/// Writes the canonical TSV form (no comments; hypernym column only when non-empty).
void write_inventory(std::ostream& out, const SenseInventory& inv);

std::vector<const Synset*> candidates(const SenseInventory& inv, std::string_view lemma);

InventoryStats inventory_stats(const SenseInventory& inv);

}  // namespace sensekit
