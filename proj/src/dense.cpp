#include "sensekit/dense.hpp"

#include <cmath>
#include <map>

namespace sensekit {

namespace {

void accumulate(DenseVector& sum, std::span<const float> v) {
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += static_cast<double>(v[k]);
}

}  // namespace

std::size_t SynsetVectorTable::covered() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.has_value();
    return n;
}

SynsetVectorTable build_synset_vectors(const SenseInventory& inv, const VectorSource& vectors, DenseOptions options) {
    SynsetVectorTable table;
    table.dimension = vectors.dimension();
    table.rows.resize(inv.size());

    // One batched lookup for the whole vocabulary.
    const auto vocab = inv.vocabulary();
    const auto found = vectors.lookup(vocab);
    std::map<std::string_view, const WordVector*, std::less<>> embedded;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        if (found[i]) embedded.emplace(vocab[i], &*found[i]);
    }

    for (std::size_t r = 0; r < inv.size(); ++r) {
        const Synset& s = inv.synsets()[r];
        SynsetVector sv;
        sv.vector.assign(table.dimension, 0.0);
        for (const auto& lemma : s.bag) {
            auto it = embedded.find(lemma);
            if (it == embedded.end()) continue;
            accumulate(sv.vector, *it->second);
            ++sv.covered_count;
        }
        if (sv.covered_count == 0) {
            table.skipped.push_back(s.id);
            continue;
        }
        const double denom = static_cast<double>(options.full_bag_mean ? s.bag.size() : sv.covered_count);
        for (double& x : sv.vector) x /= denom;
        table.rows[r] = std::move(sv);
    }
    return table;
}

std::optional<DenseVector> sentence_vector_dense(const VectorSource& vectors, const AnalyzedSentence& sentence) {
    const auto lemmas = content_lemmas(sentence);
    if (lemmas.empty()) return std::nullopt;
    const auto found = vectors.lookup(lemmas);
    DenseVector sum(vectors.dimension(), 0.0);
    std::size_t n = 0;
    for (const auto& v : found) {
        if (!v) continue;
        accumulate(sum, *v);
        ++n;
    }
    if (n == 0) return std::nullopt;
    for (double& x : sum) x /= static_cast<double>(n);
    return sum;
}

double dense_cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        dot += a[k] * b[k];
        na += a[k] * a[k];
        nb += b[k] * b[k];
    }
    if (na == 0.0 || nb == 0.0) return std::nan("");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

SenseAssignment disambiguate_word_dense(const SynsetVectorTable& table, const SenseInventory& inv,
                                        const std::optional<DenseVector>& sentence_vector,
                                        const AnalyzedSentence& sentence, std::size_t position,
                                        WorkCounter* counter) {
    detail::check_position(sentence, position);
    SenseAssignment out;
    out.span_position = position;
    out.method = Method::Dense;
    if (!sentence_vector) return out;

    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t row : inv.candidate_indices(sentence.spans[position].lemma)) {
        const SynsetVector* sv = table.at(row);
        if (!sv) continue;
        const double score = dense_cosine(sv->vector, *sentence_vector);
        if (counter) ++counter->candidate_evaluations;
        if (std::isnan(score)) continue;  // zero-norm synset vector
        if (!best || score > best_score + detail::kTieEpsilon) {
            best = row;
            best_score = score;
        }
    }
    if (best) {
        out.synset_id = inv.synsets()[*best].id;
        out.score = best_score;
    }
    return out;
}

SenseAssignment disambiguate_word_dense(const SynsetVectorTable& table, const SenseInventory& inv,
                                        const VectorSource& vectors, const AnalyzedSentence& sentence,
                                        std::size_t position, WorkCounter* counter) {
    detail::check_position(sentence, position);
    return disambiguate_word_dense(table, inv, sentence_vector_dense(vectors, sentence), sentence, position, counter);
}

std::vector<SenseAssignment> disambiguate_sentence_dense(const SynsetVectorTable& table, const SenseInventory& inv,
                                                         const VectorSource& vectors,
                                                         const AnalyzedSentence& sentence, WorkCounter* counter) {
    std::vector<SenseAssignment> out;
    std::optional<DenseVector> shared;
    bool computed = false;
    for (const auto& span : sentence.spans) {
        if (!is_content_word(span.pos) || span.lemma.empty()) continue;
        if (!computed) {
            shared = sentence_vector_dense(vectors, sentence);
            computed = true;
        }
        out.push_back(disambiguate_word_dense(table, inv, shared, sentence, span.position, counter));
    }
    return out;
}

DenseDisambiguator::DenseDisambiguator(const SenseInventory& inv, const VectorSource& vectors, DenseOptions options)
    : inv_(inv), vectors_(vectors), table_(build_synset_vectors(inv, vectors, options)) {}

SenseAssignment DenseDisambiguator::disambiguate_word(const AnalyzedSentence& sentence, std::size_t position,
                                                      WorkCounter* counter) const {
    return disambiguate_word_dense(table_, inv_, vectors_, sentence, position, counter);
}

std::vector<SenseAssignment> DenseDisambiguator::disambiguate_sentence(const AnalyzedSentence& sentence,
                                                                       WorkCounter* counter) const {
    return disambiguate_sentence_dense(table_, inv_, vectors_, sentence, counter);
}

}  // namespace sensekit
