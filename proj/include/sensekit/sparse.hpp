#pragma once

#include "sensekit/disambiguator.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sensekit {

enum class IdfVariant {
    Smooth,  // ln((1 + N) / (1 + df)) + 1
    Plain,   // ln(N / df) + 1
};

struct SparseOptions {
    IdfVariant idf = IdfVariant::Smooth;
    bool binary_tf = false;       // set-indicator term frequencies instead of counts
    bool exclude_target = false;  // drop the target's own lemma from the context vector
};

/// Compressed sparse row storage. Column indices within a row are strictly increasing.
struct CsrMatrix {
    std::vector<std::uint64_t> row_offsets{0};
    std::vector<std::uint32_t> columns;
    std::vector<double> values;

    std::size_t rows() const noexcept { return row_offsets.size() - 1; }
    std::size_t nnz() const noexcept { return values.size(); }
    std::span<const std::uint32_t> row_columns(std::size_t r) const;
    std::span<const double> row_values(std::size_t r) const;

    friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;
};

/// tf-idf weighted synset x lemma matrix. Row r is synset r of the inventory,
/// columns are the inventory vocabulary in byte order.
struct SparseIndex {
    std::map<std::string, std::uint32_t, std::less<>> vocabulary;
    std::map<SynsetId, std::size_t> row_map;
    CsrMatrix matrix;
    std::vector<double> idf;
    std::vector<double> row_norms;
    SparseOptions options;
};

/// Sorted (column, weight) pairs in the synset space.
struct SparseSentenceVector {
    std::vector<std::pair<std::uint32_t, double>> entries;
    double norm = 0.0;
};

/// Throws InvalidArgument on an empty inventory.
SparseIndex build_sparse_index(const SenseInventory& inv, SparseOptions options = {});

/// Vector of the sentence's content lemmas; lemmas outside the vocabulary are dropped.
SparseSentenceVector sentence_vector_sparse(const SparseIndex& idx, const AnalyzedSentence& sentence);
SparseSentenceVector sentence_vector_sparse(const SparseIndex& idx, std::span<const std::string> lemmas);

/// Cosine between row `row` and `vec`; 0 when either has zero norm.
double sparse_cosine(const SparseIndex& idx, std::size_t row, const SparseSentenceVector& vec);

SenseAssignment disambiguate_word_sparse(const SparseIndex& idx, const SenseInventory& inv,
                                         const AnalyzedSentence& sentence, std::size_t position,
                                         WorkCounter* counter = nullptr);

std::vector<SenseAssignment> disambiguate_sentence_sparse(const SparseIndex& idx, const SenseInventory& inv,
                                                          const AnalyzedSentence& sentence,
                                                          WorkCounter* counter = nullptr);

/// Binary cache: "SPX1", u64 rows, u64 cols, u64 nnz, u64 offsets[rows + 1],
/// u32 columns[nnz], f64 values[nnz], f64 idf[cols]; little-endian.
void write_sparse_cache(std::ostream& out, const SparseIndex& idx);

/// Rebuilds vocabulary and row map from `inv`; throws FormatError when the
/// cache is truncated or does not match the inventory's shape.
SparseIndex read_sparse_cache(std::istream& in, const SenseInventory& inv, SparseOptions options = {});

class SparseDisambiguator final : public Disambiguator {
public:
    /// `inv` must outlive this object.
    explicit SparseDisambiguator(const SenseInventory& inv, SparseOptions options = {});

    Method method() const override { return Method::Sparse; }
    const SenseInventory& inventory() const override { return inv_; }
    const SparseIndex& index() const noexcept { return index_; }

    SenseAssignment disambiguate_word(const AnalyzedSentence& sentence, std::size_t position,
                                      WorkCounter* counter = nullptr) const override;
    std::vector<SenseAssignment> disambiguate_sentence(const AnalyzedSentence& sentence,
                                                       WorkCounter* counter = nullptr) const override;

private:
    const SenseInventory& inv_;
    SparseIndex index_;
};

}  // namespace sensekit
