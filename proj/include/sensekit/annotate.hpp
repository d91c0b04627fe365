#pragma once

#include "sensekit/disambiguator.hpp"
#include "sensekit/pipeline.hpp"

#include "json.hpp"

#include <string_view>
#include <vector>

// JSON shape shared by the HTTP service and the CLI:
//
//   {"sentences":[{"text":"...","spans":[{"word","pos","lemma","position","start","end",
//                                         "synset_id","score","synonyms","hypernyms"}]}]}
//
// The four sense fields are present only on spans that received a sense.
namespace sensekit {

nlohmann::json span_to_json(const Span& span);

nlohmann::json annotate(const std::vector<AnalyzedSentence>& sentences, const Disambiguator& method);

/// analyze() followed by annotate().
nlohmann::json annotate_text(std::string_view text, const Analyzer& analyzer, const Disambiguator& method);

}  // namespace sensekit
