#pragma once

#include "sensekit/inventory.hpp"
#include "sensekit/pipeline.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace sensekit {

enum class Method { Sparse, Dense };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

/// Outcome for one span. No synset_id means ABSTAIN (no candidate, or no
/// usable context); score is only set together with synset_id.
struct SenseAssignment {
    std::size_t span_position = 0;
    std::optional<SynsetId> synset_id;
    std::optional<double> score;
    Method method = Method::Sparse;

    bool abstained() const noexcept { return !synset_id.has_value(); }

    friend bool operator==(const SenseAssignment&, const SenseAssignment&) = default;
};

/// Instrumentation hook: number of candidate cosine evaluations performed.
struct WorkCounter {
    std::size_t candidate_evaluations = 0;
};

/// Common interface of the sparse and dense models.
class Disambiguator {
public:
    virtual ~Disambiguator() = default;

    virtual Method method() const = 0;
    virtual const SenseInventory& inventory() const = 0;

    /// Throws InvalidArgument when `position` is not a span of `sentence`.
    virtual SenseAssignment disambiguate_word(const AnalyzedSentence& sentence, std::size_t position,
                                              WorkCounter* counter = nullptr) const = 0;

    /// One assignment per content-word span with a non-empty lemma, in span order.
    virtual std::vector<SenseAssignment> disambiguate_sentence(const AnalyzedSentence& sentence,
                                                               WorkCounter* counter = nullptr) const = 0;
};

namespace detail {

// Ties within this margin keep the earlier (smaller id) candidate.
inline constexpr double kTieEpsilon = 1e-12;

void check_position(const AnalyzedSentence& sentence, std::size_t position);

}  // namespace detail

}  // namespace sensekit
