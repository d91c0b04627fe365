#include "sensekit/sparse.hpp"

#include "binary_io.hpp"
#include "sensekit/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

namespace sensekit {

namespace {

constexpr char kCacheMagic[4] = {'S', 'P', 'X', '1'};

double idf_weight(IdfVariant variant, std::size_t n, std::size_t df) {
    const auto nd = static_cast<double>(n);
    const auto dfd = static_cast<double>(df);
    if (variant == IdfVariant::Plain) return std::log(nd / dfd) + 1.0;
    return std::log((1.0 + nd) / (1.0 + dfd)) + 1.0;
}

// Content lemmas, optionally without the span at `skip`.
std::vector<std::string> context_lemmas(const AnalyzedSentence& sentence, std::optional<std::size_t> skip) {
    std::vector<std::string> lemmas;
    for (const auto& span : sentence.spans) {
        if (skip && span.position == *skip) continue;
        if (is_content_word(span.pos) && !span.lemma.empty()) lemmas.push_back(span.lemma);
    }
    return lemmas;
}

SenseAssignment choose(const SparseIndex& idx, const SenseInventory& inv, std::size_t position,
                       std::string_view lemma, const SparseSentenceVector& vec, WorkCounter* counter) {
    SenseAssignment out;
    out.span_position = position;
    out.method = Method::Sparse;
    const auto rows = inv.candidate_indices(lemma);
    if (rows.empty() || vec.norm == 0.0) return out;

    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t row : rows) {
        const double score = sparse_cosine(idx, row, vec);
        if (counter) ++counter->candidate_evaluations;
        if (!best || score > best_score + detail::kTieEpsilon) {
            best = row;
            best_score = score;
        }
    }
    out.synset_id = inv.synsets()[*best].id;
    out.score = best_score;
    return out;
}

}  // namespace

std::span<const std::uint32_t> CsrMatrix::row_columns(std::size_t r) const {
    return std::span<const std::uint32_t>(columns).subspan(row_offsets[r], row_offsets[r + 1] - row_offsets[r]);
}

std::span<const double> CsrMatrix::row_values(std::size_t r) const {
    return std::span<const double>(values).subspan(row_offsets[r], row_offsets[r + 1] - row_offsets[r]);
}

SparseIndex build_sparse_index(const SenseInventory& inv, SparseOptions options) {
    if (inv.empty()) throw InvalidArgument("cannot build a sparse index over an empty inventory");

    SparseIndex idx;
    idx.options = options;
    const auto vocab = inv.vocabulary();
    idx.idf.reserve(vocab.size());
    for (std::uint32_t c = 0; c < vocab.size(); ++c) {
        idx.vocabulary.emplace(vocab[c], c);
        idx.idf.push_back(idf_weight(options.idf, inv.size(), inv.candidate_indices(vocab[c]).size()));
    }

    for (std::size_t r = 0; r < inv.size(); ++r) {
        const Synset& s = inv.synsets()[r];
        idx.row_map.emplace(s.id, r);
        std::map<std::uint32_t, std::size_t> counts;
        for (const auto& lemma : s.bag) ++counts[idx.vocabulary.find(lemma)->second];
        double sq = 0.0;
        for (const auto& [col, count] : counts) {
            const double tf = options.binary_tf ? 1.0 : static_cast<double>(count);
            const double w = tf * idx.idf.at(col);
            idx.matrix.columns.push_back(col);
            idx.matrix.values.push_back(w);
            sq += w * w;
        }
        idx.matrix.row_offsets.push_back(idx.matrix.columns.size());
        idx.row_norms.push_back(std::sqrt(sq));
    }
    return idx;
}

SparseSentenceVector sentence_vector_sparse(const SparseIndex& idx, std::span<const std::string> lemmas) {
    std::map<std::uint32_t, std::size_t> counts;
    for (const auto& lemma : lemmas) {
        if (auto it = idx.vocabulary.find(lemma); it != idx.vocabulary.end()) ++counts[it->second];
    }
    SparseSentenceVector vec;
    vec.entries.reserve(counts.size());
    double sq = 0.0;
    for (const auto& [col, count] : counts) {
        const double tf = idx.options.binary_tf ? 1.0 : static_cast<double>(count);
        const double w = tf * idx.idf[col];
        vec.entries.emplace_back(col, w);
        sq += w * w;
    }
    vec.norm = std::sqrt(sq);
    return vec;
}

SparseSentenceVector sentence_vector_sparse(const SparseIndex& idx, const AnalyzedSentence& sentence) {
    const auto lemmas = content_lemmas(sentence);
    return sentence_vector_sparse(idx, lemmas);
}

double sparse_cosine(const SparseIndex& idx, std::size_t row, const SparseSentenceVector& vec) {
    const double denom = idx.row_norms[row] * vec.norm;
    if (denom == 0.0) return 0.0;
    const auto cols = idx.matrix.row_columns(row);
    const auto vals = idx.matrix.row_values(row);
    double dot = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < cols.size() && j < vec.entries.size()) {
        if (cols[i] < vec.entries[j].first) {
            ++i;
        } else if (cols[i] > vec.entries[j].first) {
            ++j;
        } else {
            dot += vals[i] * vec.entries[j].second;
            ++i;
            ++j;
        }
    }
    return dot / denom;
}

SenseAssignment disambiguate_word_sparse(const SparseIndex& idx, const SenseInventory& inv,
                                         const AnalyzedSentence& sentence, std::size_t position,
                                         WorkCounter* counter) {
    detail::check_position(sentence, position);
    const Span& target = sentence.spans[position];
    const auto lemmas = context_lemmas(sentence, idx.options.exclude_target ? std::optional(position) : std::nullopt);
    return choose(idx, inv, position, target.lemma, sentence_vector_sparse(idx, lemmas), counter);
}

std::vector<SenseAssignment> disambiguate_sentence_sparse(const SparseIndex& idx, const SenseInventory& inv,
                                                          const AnalyzedSentence& sentence,
                                                          WorkCounter* counter) {
    std::vector<SenseAssignment> out;
    std::optional<SparseSentenceVector> shared;
    if (!idx.options.exclude_target) shared = sentence_vector_sparse(idx, sentence);
    for (const auto& span : sentence.spans) {
        if (!is_content_word(span.pos) || span.lemma.empty()) continue;
        if (shared) {
            out.push_back(choose(idx, inv, span.position, span.lemma, *shared, counter));
        } else {
            out.push_back(disambiguate_word_sparse(idx, inv, sentence, span.position, counter));
        }
    }
    return out;
}

void write_sparse_cache(std::ostream& out, const SparseIndex& idx) {
    out.write(kCacheMagic, sizeof kCacheMagic);
    binary::write_le<std::uint64_t>(out, idx.matrix.rows());
    binary::write_le<std::uint64_t>(out, idx.idf.size());
    binary::write_le<std::uint64_t>(out, idx.matrix.nnz());
    for (auto off : idx.matrix.row_offsets) binary::write_le<std::uint64_t>(out, off);
    for (auto col : idx.matrix.columns) binary::write_le<std::uint32_t>(out, col);
    for (double v : idx.matrix.values) binary::write_le<double>(out, v);
    for (double v : idx.idf) binary::write_le<double>(out, v);
}

SparseIndex read_sparse_cache(std::istream& in, const SenseInventory& inv, SparseOptions options) {
    binary::Reader reader(in);
    char magic[4];
    reader.read_bytes(magic, sizeof magic, "magic");
    if (!std::equal(magic, magic + 4, kCacheMagic)) throw FormatError(0, "not an SPX1 sparse cache");

    const auto rows = reader.read_le<std::uint64_t>("row count");
    const auto cols = reader.read_le<std::uint64_t>("column count");
    const auto nnz = reader.read_le<std::uint64_t>("value count");
    const auto vocab = inv.vocabulary();
    if (rows != inv.size() || cols != vocab.size()) {
        throw FormatError(reader.offset(), "cache shape does not match the inventory");
    }

    SparseIndex idx;
    idx.options = options;
    for (std::uint32_t c = 0; c < vocab.size(); ++c) idx.vocabulary.emplace(vocab[c], c);
    for (std::size_t r = 0; r < inv.size(); ++r) idx.row_map.emplace(inv.synsets()[r].id, r);

    idx.matrix.row_offsets.clear();
    for (std::uint64_t i = 0; i <= rows; ++i) idx.matrix.row_offsets.push_back(reader.read_le<std::uint64_t>("row offset"));
    if (idx.matrix.row_offsets.front() != 0 || idx.matrix.row_offsets.back() != nnz ||
        !std::is_sorted(idx.matrix.row_offsets.begin(), idx.matrix.row_offsets.end())) {
        throw FormatError(reader.offset(), "inconsistent row offsets");
    }
    for (std::uint64_t i = 0; i < nnz; ++i) {
        const auto col = reader.read_le<std::uint32_t>("column index");
        if (col >= cols) throw FormatError(reader.offset(), "column index out of range");
        idx.matrix.columns.push_back(col);
    }
    for (std::uint64_t i = 0; i < nnz; ++i) idx.matrix.values.push_back(reader.read_le<double>("value"));
    for (std::uint64_t i = 0; i < cols; ++i) idx.idf.push_back(reader.read_le<double>("idf"));

    for (std::size_t r = 0; r < rows; ++r) {
        double sq = 0.0;
        for (double v : idx.matrix.row_values(r)) sq += v * v;
        idx.row_norms.push_back(std::sqrt(sq));
    }
    return idx;
}

SparseDisambiguator::SparseDisambiguator(const SenseInventory& inv, SparseOptions options)
    : inv_(inv), index_(build_sparse_index(inv, options)) {}

SenseAssignment SparseDisambiguator::disambiguate_word(const AnalyzedSentence& sentence, std::size_t position,
                                                       WorkCounter* counter) const {
    return disambiguate_word_sparse(index_, inv_, sentence, position, counter);
}

std::vector<SenseAssignment> SparseDisambiguator::disambiguate_sentence(const AnalyzedSentence& sentence,
                                                                        WorkCounter* counter) const {
    return disambiguate_sentence_sparse(index_, inv_, sentence, counter);
}

}  // namespace sensekit
