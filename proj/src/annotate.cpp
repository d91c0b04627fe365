#include "sensekit/annotate.hpp"

namespace sensekit {

using nlohmann::json;

json span_to_json(const Span& span) {
    return {{"word", span.word},   {"pos", std::string(to_string(span.pos))},
            {"lemma", span.lemma}, {"position", span.position},
            {"start", span.start}, {"end", span.end}};
}

json annotate(const std::vector<AnalyzedSentence>& sentences, const Disambiguator& method) {
    json out_sentences = json::array();
    for (const auto& sentence : sentences) {
        json spans = json::array();
        for (const auto& span : sentence.spans) spans.push_back(span_to_json(span));
        for (const auto& a : method.disambiguate_sentence(sentence)) {
            if (a.abstained()) continue;
            const Synset* synset = method.inventory().find(*a.synset_id);
            json& j = spans[a.span_position];
            j["synset_id"] = a.synset_id->str();
            j["score"] = *a.score;
            j["synonyms"] = synset->synonyms;
            j["hypernyms"] = synset->hypernyms;
        }
        out_sentences.push_back({{"text", sentence.source_text}, {"spans", std::move(spans)}});
    }
    return {{"sentences", std::move(out_sentences)}};
}

json annotate_text(std::string_view text, const Analyzer& analyzer, const Disambiguator& method) {
    return annotate(analyze(text, analyzer), method);
}

}  // namespace sensekit
