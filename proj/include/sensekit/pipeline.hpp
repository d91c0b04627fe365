#pragma once

#include "sensekit/error.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sensekit {

enum class PosTag { Noun, Verb, Adj, Adv, Pron, Det, Adp, Conj, Num, Part, Intj, Punct, X };

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view name);

/// Only these four tags feed context vectors.
constexpr bool is_content_word(PosTag tag) {
    return tag == PosTag::Noun || tag == PosTag::Verb || tag == PosTag::Adj || tag == PosTag::Adv;
}

/// One analyzed token. `start`/`end` are code-point offsets into the text
/// handed to the analyzer (end exclusive); `position` is the index within
/// its sentence.
struct Span {
    std::string word;
    PosTag pos = PosTag::X;
    std::string lemma;
    std::size_t position = 0;
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const Span&, const Span&) = default;
};

struct AnalyzedSentence {
    std::vector<Span> spans;
    std::string source_text;

    friend bool operator==(const AnalyzedSentence&, const AnalyzedSentence&) = default;
};

class AnalysisError : public Error {
public:
    using Error::Error;
};

/// Analyzer plugin contract: text in, sentences of spans out. Implementations
/// must be pure or internally synchronized.
class Analyzer {
public:
    virtual ~Analyzer() = default;
    virtual std::string_view name() const = 0;
    virtual std::vector<AnalyzedSentence> analyze(std::string_view text) const = 0;
};

/// Unicode whitespace tokenization, punctuation split off into PUNCT spans,
/// sentences end after a run of . ? !. Lemma is the case-folded surface,
/// every other tag is X.
class BaselineAnalyzer final : public Analyzer {
public:
    std::string_view name() const override { return "baseline"; }
    std::vector<AnalyzedSentence> analyze(std::string_view text) const override;
};

struct LexiconEntry {
    PosTag pos = PosTag::X;
    std::string lemma;
};

/// Baseline tokenization plus a form -> (tag, lemma) table. Unknown
/// non-punctuation tokens get `default_pos` and their folded surface as lemma.
class LexiconAnalyzer final : public Analyzer {
public:
    LexiconAnalyzer(std::map<std::string, LexiconEntry, std::less<>> entries, PosTag default_pos);

    /// TSV: `form<TAB>TAG[<TAB>lemma]`, '#' comments. Throws ParseError.
    static LexiconAnalyzer from_stream(std::istream& in, PosTag default_pos = PosTag::Noun);
    static LexiconAnalyzer from_file(const std::filesystem::path& path, PosTag default_pos = PosTag::Noun);

    std::string_view name() const override { return "lexicon"; }
    std::vector<AnalyzedSentence> analyze(std::string_view text) const override;

private:
    std::map<std::string, LexiconEntry, std::less<>> entries_;
    PosTag default_pos_;
};

using AnalyzerOptions = std::map<std::string, std::string>;
using AnalyzerFactory = std::function<std::unique_ptr<Analyzer>(const AnalyzerOptions&)>;

/// Name -> factory table used by the configuration layer.
class AnalyzerRegistry {
public:
    /// Registry holding "baseline" and "lexicon" (options: lexicon=PATH, default_pos=TAG;
    /// without a lexicon file every word gets default_pos).
    static AnalyzerRegistry with_builtins();

    void add(std::string name, AnalyzerFactory factory);
    bool contains(std::string_view name) const;
    std::vector<std::string> names() const;

    /// Throws InvalidArgument for unknown names.
    std::unique_ptr<Analyzer> create(std::string_view name, const AnalyzerOptions& options = {}) const;

private:
    std::map<std::string, AnalyzerFactory, std::less<>> factories_;
};

/// Runs `analyzer` on `text` and checks the result: input must be valid UTF-8,
/// positions contiguous from 0, lemmas non-empty. Plugin failures and
/// contract violations come back as AnalysisError with position context.
std::vector<AnalyzedSentence> analyze(std::string_view text, const Analyzer& analyzer);

/// Lemmas of the content-word spans, in sentence order (multiplicity kept).
std::vector<std::string> content_lemmas(const AnalyzedSentence& sentence);

}  // namespace sensekit
