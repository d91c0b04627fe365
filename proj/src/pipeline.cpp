#include "sensekit/pipeline.hpp"

#include "sensekit/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>

namespace sensekit {

namespace {

constexpr std::array<std::string_view, 13> kTagNames = {
    "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "CONJ", "NUM", "PART", "INTJ", "PUNCT", "X"};

struct RawToken {
    std::u32string text;
    bool punct = false;
    std::size_t start = 0;
    std::size_t end = 0;
};

using RawSentence = std::vector<RawToken>;

bool is_terminator(char32_t c) { return c == U'.' || c == U'?' || c == U'!'; }

bool is_word_joiner(char32_t c) {
    return c == U'\'' || c == U'\u2019' || c == U'-' || c == U'\u2010';
}

// Punctuation that stays inside a word: don't, e-mail, 3.14, 1,000.
bool joins_word(std::u32string_view cps, std::size_t j, std::size_t word_start) {
    if (j == word_start || j + 1 >= cps.size()) return false;
    const char32_t prev = cps[j - 1];
    const char32_t next = cps[j + 1];
    const char32_t c = cps[j];
    if (is_word_joiner(c)) return text::is_alnum(prev) && text::is_alnum(next);
    if (c == U'.' || c == U',') return text::is_digit(prev) && text::is_digit(next);
    return false;
}

std::vector<RawSentence> tokenize(std::u32string_view cps) {
    std::vector<RawSentence> sentences;
    RawSentence current;
    std::size_t i = 0;
    const std::size_t n = cps.size();

    auto next_non_space = [&](std::size_t from) {
        while (from < n && text::is_whitespace(cps[from])) ++from;
        return from;
    };

    while (i < n) {
        const char32_t c = cps[i];
        if (text::is_whitespace(c)) {
            ++i;
            continue;
        }
        if (text::is_punctuation(c)) {
            current.push_back({std::u32string(1, c), true, i, i + 1});
            ++i;
            if (is_terminator(c)) {
                const std::size_t k = next_non_space(i);
                if (k >= n || !is_terminator(cps[k])) {
                    sentences.push_back(std::move(current));
                    current.clear();
                }
            }
            continue;
        }
        std::size_t j = i;
        while (j < n) {
            const char32_t d = cps[j];
            if (text::is_whitespace(d)) break;
            if (text::is_punctuation(d) && !joins_word(cps, j, i)) break;
            ++j;
        }
        current.push_back({std::u32string(cps.substr(i, j - i)), false, i, j});
        i = j;
    }
    if (!current.empty()) sentences.push_back(std::move(current));
    return sentences;
}

template <class TagFn>
std::vector<AnalyzedSentence> build_sentences(std::string_view text, TagFn&& tag) {
    const std::u32string cps = text::decode(text);
    std::vector<AnalyzedSentence> out;
    for (const RawSentence& raw : tokenize(cps)) {
        AnalyzedSentence sentence;
        sentence.source_text =
            text::encode(std::u32string_view(cps).substr(raw.front().start, raw.back().end - raw.front().start));
        for (const RawToken& tok : raw) {
            Span span;
            span.word = text::encode(tok.text);
            span.position = sentence.spans.size();
            span.start = tok.start;
            span.end = tok.end;
            if (tok.punct) {
                span.pos = PosTag::Punct;
                span.lemma = span.word;
            } else {
                tag(span);
            }
            sentence.spans.push_back(std::move(span));
        }
        out.push_back(std::move(sentence));
    }
    return out;
}

}  // namespace

std::string_view to_string(PosTag tag) { return kTagNames[static_cast<std::size_t>(tag)]; }

std::optional<PosTag> parse_pos_tag(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (std::size_t i = 0; i < kTagNames.size(); ++i) {
        if (kTagNames[i] == upper) return static_cast<PosTag>(i);
    }
    return std::nullopt;
}

std::vector<AnalyzedSentence> BaselineAnalyzer::analyze(std::string_view text) const {
    return build_sentences(text, [](Span& span) {
        span.pos = PosTag::X;
        span.lemma = text::fold_case(span.word);
    });
}

LexiconAnalyzer::LexiconAnalyzer(std::map<std::string, LexiconEntry, std::less<>> entries, PosTag default_pos)
    : entries_(std::move(entries)), default_pos_(default_pos) {}

LexiconAnalyzer LexiconAnalyzer::from_stream(std::istream& in, PosTag default_pos) {
    std::map<std::string, LexiconEntry, std::less<>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        if (!text::is_valid_utf8(line)) throw ParseError(line_no, "invalid UTF-8");
        const auto cols = text::split(line, '\t');
        if (cols.size() < 2 || cols.size() > 3) throw ParseError(line_no, "expected form<TAB>TAG[<TAB>lemma]");
        const auto form = text::trim(cols[0]);
        if (form.empty()) throw ParseError(line_no, "empty form");
        const auto tag = parse_pos_tag(text::trim(cols[1]));
        if (!tag) throw ParseError(line_no, "unknown tag '" + std::string(cols[1]) + "'");
        LexiconEntry entry{*tag, text::fold_case(form)};
        if (cols.size() == 3 && !text::trim(cols[2]).empty()) entry.lemma = text::fold_case(text::trim(cols[2]));
        entries.insert_or_assign(text::fold_case(form), std::move(entry));
    }
    return LexiconAnalyzer(std::move(entries), default_pos);
}

LexiconAnalyzer LexiconAnalyzer::from_file(const std::filesystem::path& path, PosTag default_pos) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open lexicon " + path.string());
    return from_stream(in, default_pos);
}

std::vector<AnalyzedSentence> LexiconAnalyzer::analyze(std::string_view text) const {
    return build_sentences(text, [this](Span& span) {
        std::string folded = text::fold_case(span.word);
        if (auto it = entries_.find(folded); it != entries_.end()) {
            span.pos = it->second.pos;
            span.lemma = it->second.lemma;
        } else {
            span.pos = default_pos_;
            span.lemma = std::move(folded);
        }
    });
}

AnalyzerRegistry AnalyzerRegistry::with_builtins() {
    AnalyzerRegistry reg;
    reg.add("baseline", [](const AnalyzerOptions&) { return std::make_unique<BaselineAnalyzer>(); });
    reg.add("lexicon", [](const AnalyzerOptions& opts) -> std::unique_ptr<Analyzer> {
        PosTag default_pos = PosTag::Noun;
        std::optional<std::filesystem::path> path;
        for (const auto& [key, value] : opts) {
            if (key == "lexicon") {
                path = value;
            } else if (key == "default_pos") {
                auto tag = parse_pos_tag(value);
                if (!tag) throw InvalidArgument("unknown default_pos '" + value + "'");
                default_pos = *tag;
            } else {
                throw InvalidArgument("unknown lexicon analyzer option '" + key + "'");
            }
        }
        if (!path) return std::make_unique<LexiconAnalyzer>(std::map<std::string, LexiconEntry, std::less<>>{}, default_pos);
        return std::make_unique<LexiconAnalyzer>(LexiconAnalyzer::from_file(*path, default_pos));
    });
    return reg;
}

void AnalyzerRegistry::add(std::string name, AnalyzerFactory factory) {
    factories_.insert_or_assign(std::move(name), std::move(factory));
}

bool AnalyzerRegistry::contains(std::string_view name) const { return factories_.find(name) != factories_.end(); }

std::vector<std::string> AnalyzerRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, f] : factories_) out.push_back(name);
    return out;
}

std::unique_ptr<Analyzer> AnalyzerRegistry::create(std::string_view name, const AnalyzerOptions& options) const {
    auto it = factories_.find(name);
    if (it == factories_.end()) throw InvalidArgument("unknown analyzer '" + std::string(name) + "'");
    return it->second(options);
}

std::vector<AnalyzedSentence> analyze(std::string_view text, const Analyzer& analyzer) {
    if (auto bad = text::find_invalid_utf8(text)) {
        throw AnalysisError("invalid UTF-8 at byte " + std::to_string(*bad));
    }
    std::vector<AnalyzedSentence> sentences;
    try {
        sentences = analyzer.analyze(text);
    } catch (const AnalysisError&) {
        throw;
    } catch (const std::exception& e) {
        throw AnalysisError("analyzer '" + std::string(analyzer.name()) + "' failed on " +
                            std::to_string(text.size()) + "-byte input: " + e.what());
    }
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        const auto& spans = sentences[s].spans;
        for (std::size_t k = 0; k < spans.size(); ++k) {
            const std::string where = "sentence " + std::to_string(s) + ", span " + std::to_string(k);
            if (spans[k].position != k) throw AnalysisError(where + ": non-contiguous position");
            if (!spans[k].word.empty() && spans[k].lemma.empty()) throw AnalysisError(where + ": empty lemma");
        }
    }
    return sentences;
}

std::vector<std::string> content_lemmas(const AnalyzedSentence& sentence) {
    std::vector<std::string> lemmas;
    for (const auto& span : sentence.spans) {
        if (is_content_word(span.pos) && !span.lemma.empty()) lemmas.push_back(span.lemma);
    }
    return lemmas;
}

}  // namespace sensekit
