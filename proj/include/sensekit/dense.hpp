#pragma once

#include "sensekit/disambiguator.hpp"
#include "sensekit/embeddings.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sensekit {

struct DenseOptions {
    // Divide synset sums by the full bag size instead of the number of embedded lemmas.
    bool full_bag_mean = false;
};

using DenseVector = std::vector<double>;

struct SynsetVector {
    DenseVector vector;
    std::size_t covered_count = 0;  // bag lemmas (with multiplicity) that had an embedding
};

/// Averaged bag embeddings, indexed like SenseInventory::synsets().
/// Synsets with no embedded bag lemma have no entry and are listed in `skipped`.
struct SynsetVectorTable {
    std::size_t dimension = 0;
    std::vector<std::optional<SynsetVector>> rows;
    std::vector<SynsetId> skipped;

    const SynsetVector* at(std::size_t row) const { return rows[row] ? &*rows[row] : nullptr; }
    std::size_t covered() const;
};

SynsetVectorTable build_synset_vectors(const SenseInventory& inv, const VectorSource& vectors,
                                       DenseOptions options = {});

/// Mean of the embedded content lemmas; nullopt when none is embedded.
std::optional<DenseVector> sentence_vector_dense(const VectorSource& vectors, const AnalyzedSentence& sentence);

double dense_cosine(std::span<const double> a, std::span<const double> b);

SenseAssignment disambiguate_word_dense(const SynsetVectorTable& table, const SenseInventory& inv,
                                        const VectorSource& vectors, const AnalyzedSentence& sentence,
                                        std::size_t position, WorkCounter* counter = nullptr);

/// Same as above with a precomputed sentence vector.
SenseAssignment disambiguate_word_dense(const SynsetVectorTable& table, const SenseInventory& inv,
                                        const std::optional<DenseVector>& sentence_vector,
                                        const AnalyzedSentence& sentence, std::size_t position,
                                        WorkCounter* counter = nullptr);

std::vector<SenseAssignment> disambiguate_sentence_dense(const SynsetVectorTable& table, const SenseInventory& inv,
                                                         const VectorSource& vectors,
                                                         const AnalyzedSentence& sentence,
                                                         WorkCounter* counter = nullptr);

class DenseDisambiguator final : public Disambiguator {
public:
    /// `inv` and `vectors` must outlive this object.
    DenseDisambiguator(const SenseInventory& inv, const VectorSource& vectors, DenseOptions options = {});

    Method method() const override { return Method::Dense; }
    const SenseInventory& inventory() const override { return inv_; }
    const SynsetVectorTable& table() const noexcept { return table_; }

    SenseAssignment disambiguate_word(const AnalyzedSentence& sentence, std::size_t position,
                                      WorkCounter* counter = nullptr) const override;
    std::vector<SenseAssignment> disambiguate_sentence(const AnalyzedSentence& sentence,
                                                       WorkCounter* counter = nullptr) const override;

private:
    const SenseInventory& inv_;
    const VectorSource& vectors_;
    SynsetVectorTable table_;
};

}  // namespace sensekit
