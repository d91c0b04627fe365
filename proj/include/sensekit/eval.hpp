#pragma once

#include "sensekit/disambiguator.hpp"
#include "sensekit/pipeline.hpp"

#include "json.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sensekit {

/// One gold-labelled occurrence of an ambiguous lemma. The target is given as
/// code-point offsets into `context` and is resolved to a span after analysis.
struct EvalInstance {
    std::string instance_id;
    std::string lemma;
    std::string gold_sense;
    std::string context;
    std::size_t target_start = 0;
    std::size_t target_end = 0;
};

using EvalDataset = std::vector<EvalInstance>;

/// Tab-separated with a header naming at least context_id, word,
/// gold_sense_id, positions and context (other columns are ignored).
/// `positions` is "start-end", possibly a comma-separated list (first wins).
/// Throws ParseError with the line number.
EvalDataset load_dataset(std::istream& in);
EvalDataset load_dataset_file(const std::filesystem::path& path);

namespace detail {
double adjusted_rand_index_codes(std::span<const std::size_t> gold, std::span<const std::size_t> pred);
}

/// Re-labels arbitrary values densely (first occurrence order).
template <class Label>
std::vector<std::size_t> encode_labels(std::span<const Label> labels) {
    std::map<Label, std::size_t> codes;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(codes.try_emplace(l, codes.size()).first->second);
    return out;
}

/// Hubert-Arabie adjusted Rand index from the contingency table.
/// Identical partitions score 1 even in degenerate cases (0/0 otherwise -> 0).
/// Throws InvalidArgument on empty input or a length mismatch.
template <class Label>
double adjusted_rand_index(std::span<const Label> gold, std::span<const Label> pred) {
    const auto g = encode_labels(gold);
    const auto p = encode_labels(pred);
    return detail::adjusted_rand_index_codes(g, p);
}

inline double adjusted_rand_index(const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
    return adjusted_rand_index(std::span<const std::string>(gold), std::span<const std::string>(pred));
}

struct VMeasure {
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v = 0.0;
};

namespace detail {
VMeasure v_measure_codes(std::span<const std::size_t> gold, std::span<const std::size_t> pred);
}

/// Homogeneity/completeness harmonic mean (diagnostic only: it rewards all-singleton predictions).
template <class Label>
VMeasure v_measure(std::span<const Label> gold, std::span<const Label> pred) {
    const auto g = encode_labels(gold);
    const auto p = encode_labels(pred);
    return detail::v_measure_codes(g, p);
}

inline VMeasure v_measure(const std::vector<std::string>& gold, const std::vector<std::string>& pred) {
    return v_measure(std::span<const std::string>(gold), std::span<const std::string>(pred));
}

struct LemmaScore {
    std::size_t instance_count = 0;
    double ari = 0.0;

    friend bool operator==(const LemmaScore&, const LemmaScore&) = default;
};

using LemmaScores = std::map<std::string, LemmaScore>;

/// sum(ari_w * |I(w)|) / sum(|I(w)|). Throws InvalidArgument on an empty map or a zero count.
double weighted_ari(const LemmaScores& per_lemma);

struct EvalReport {
    std::string method_label;
    LemmaScores per_lemma;
    double total_ari = 0.0;
    std::vector<std::string> excluded;  // instance ids that could not be evaluated

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// instance_id -> predicted label.
using Predictions = std::map<std::string, std::string>;

/// Label used for ABSTAIN predictions.
inline constexpr std::string_view kAbstainLabel = "-";

Predictions baseline_one(const EvalDataset& dataset);
Predictions baseline_singletons(const EvalDataset& dataset);

/// Groups by lemma and scores each group. Instances without a prediction are excluded.
EvalReport evaluate_predictions(const EvalDataset& dataset, const Predictions& predictions, std::string method_label);

/// Target span of `instance` in its analyzed context: (sentence index, span position).
std::optional<std::pair<std::size_t, std::size_t>> resolve_target(const EvalInstance& instance,
                                                                  const std::vector<AnalyzedSentence>& sentences);

/// Predicted labels from a disambiguator. The target span's lemma is replaced by
/// the instance lemma; unresolvable targets are left out (and end up excluded).
Predictions predict(const EvalDataset& dataset, const Disambiguator& method, const Analyzer& analyzer);

EvalReport run_evaluation(const EvalDataset& dataset, const Disambiguator& method, const Analyzer& analyzer);

/// {"method": ..., "per_lemma": {lemma: {"instances": n, "ari": x}}, "total_ari": ..., "excluded": [...]}
nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

void write_report_table(std::ostream& out, const EvalReport& report);

}  // namespace sensekit
