#include "sensekit/eval.hpp"

#include "sensekit/error.hpp"
#include "sensekit/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>

namespace sensekit {

namespace {

double comb2(std::size_t n) { return static_cast<double>(n) * static_cast<double>(n == 0 ? 0 : n - 1) / 2.0; }

void check_labels(std::size_t gold, std::size_t pred) {
    if (gold != pred) throw InvalidArgument("label lists differ in length");
    if (gold == 0) throw InvalidArgument("label lists are empty");
}

double entropy(const std::map<std::size_t, std::size_t>& counts, double n) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

// H(A | B) over the joint counts keyed (a, b).
double conditional_entropy(const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& joint,
                           const std::map<std::size_t, std::size_t>& b_counts, double n, bool b_is_second) {
    double h = 0.0;
    for (const auto& [key, c] : joint) {
        const std::size_t b = b_is_second ? key.second : key.first;
        const double nc = static_cast<double>(c);
        h -= nc / n * std::log(nc / static_cast<double>(b_counts.at(b)));
    }
    return h;
}

std::size_t parse_offset(std::string_view s, std::size_t line_no) {
    s = text::trim(s);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError(line_no, "bad position '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace

namespace detail {

double adjusted_rand_index_codes(std::span<const std::size_t> gold, std::span<const std::size_t> pred) {
    check_labels(gold.size(), pred.size());
    const std::size_t n = gold.size();
    if (std::equal(gold.begin(), gold.end(), pred.begin())) return 1.0;

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> table;
    std::map<std::size_t, std::size_t> rows;
    std::map<std::size_t, std::size_t> cols;
    for (std::size_t i = 0; i < n; ++i) {
        ++table[{gold[i], pred[i]}];
        ++rows[gold[i]];
        ++cols[pred[i]];
    }
    double index = 0.0;
    for (const auto& [cell, c] : table) index += comb2(c);
    double a = 0.0;
    for (const auto& [label, c] : rows) a += comb2(c);
    double b = 0.0;
    for (const auto& [label, c] : cols) b += comb2(c);

    const double expected = a * b / comb2(n);
    const double max_index = (a + b) / 2.0;
    const double denom = max_index - expected;
    if (denom == 0.0) return 0.0;
    return (index - expected) / denom;
}

VMeasure v_measure_codes(std::span<const std::size_t> gold, std::span<const std::size_t> pred) {
    check_labels(gold.size(), pred.size());
    const auto n = static_cast<double>(gold.size());
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint;
    std::map<std::size_t, std::size_t> classes;
    std::map<std::size_t, std::size_t> clusters;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        ++joint[{gold[i], pred[i]}];
        ++classes[gold[i]];
        ++clusters[pred[i]];
    }
    const double h_c = entropy(classes, n);
    const double h_k = entropy(clusters, n);
    const double h_c_given_k = conditional_entropy(joint, clusters, n, true);
    const double h_k_given_c = conditional_entropy(joint, classes, n, false);

    VMeasure m;
    m.homogeneity = h_c == 0.0 ? 1.0 : 1.0 - h_c_given_k / h_c;
    m.completeness = h_k == 0.0 ? 1.0 : 1.0 - h_k_given_c / h_k;
    const double s = m.homogeneity + m.completeness;
    m.v = s == 0.0 ? 0.0 : 2.0 * m.homogeneity * m.completeness / s;
    return m;
}

}  // namespace detail

EvalDataset load_dataset(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        for (auto col : text::split(line, '\t')) header.emplace_back(text::trim(col));
    }
    if (header.empty()) throw ParseError(line_no, "missing header line");

    auto column = [&](std::string_view name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ParseError(1, "missing column '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_id = column("context_id");
    const std::size_t c_word = column("word");
    const std::size_t c_gold = column("gold_sense_id");
    const std::size_t c_pos = column("positions");
    const std::size_t c_ctx = column("context");

    EvalDataset dataset;
    std::set<std::string> ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        if (!text::is_valid_utf8(line)) throw ParseError(line_no, "invalid UTF-8");
        const auto cols = text::split(line, '\t');
        if (cols.size() != header.size()) {
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " columns, got " +
                                          std::to_string(cols.size()));
        }
        EvalInstance inst;
        inst.instance_id = std::string(text::trim(cols[c_id]));
        inst.lemma = text::fold_case(text::trim(cols[c_word]));
        inst.gold_sense = std::string(text::trim(cols[c_gold]));
        inst.context = std::string(cols[c_ctx]);
        if (inst.instance_id.empty()) throw ParseError(line_no, "empty context_id");
        if (inst.lemma.empty()) throw ParseError(line_no, "empty word");
        if (inst.gold_sense.empty()) throw ParseError(line_no, "empty gold_sense_id");
        if (!ids.insert(inst.instance_id).second) throw ParseError(line_no, "duplicate context_id " + inst.instance_id);

        const auto first = text::split(cols[c_pos], ',').front();
        const auto dash = first.find('-');
        if (dash == std::string_view::npos) throw ParseError(line_no, "positions must be start-end");
        inst.target_start = parse_offset(first.substr(0, dash), line_no);
        inst.target_end = parse_offset(first.substr(dash + 1), line_no);
        if (inst.target_end < inst.target_start) throw ParseError(line_no, "position end before start");
        dataset.push_back(std::move(inst));
    }
    return dataset;
}

EvalDataset load_dataset_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset " + path.string());
    return load_dataset(in);
}

double weighted_ari(const LemmaScores& per_lemma) {
    if (per_lemma.empty()) throw InvalidArgument("no per-lemma scores to aggregate");
    double weighted = 0.0;
    double total = 0.0;
    for (const auto& [lemma, score] : per_lemma) {
        if (score.instance_count == 0) throw InvalidArgument("lemma '" + lemma + "' has no instances");
        weighted += score.ari * static_cast<double>(score.instance_count);
        total += static_cast<double>(score.instance_count);
    }
    return weighted / total;
}

Predictions baseline_one(const EvalDataset& dataset) {
    Predictions out;
    for (const auto& inst : dataset) out.emplace(inst.instance_id, "1");
    return out;
}

Predictions baseline_singletons(const EvalDataset& dataset) {
    Predictions out;
    for (const auto& inst : dataset) out.emplace(inst.instance_id, inst.instance_id);
    return out;
}

EvalReport evaluate_predictions(const EvalDataset& dataset, const Predictions& predictions, std::string method_label) {
    if (dataset.empty()) throw InvalidArgument("empty evaluation dataset");
    EvalReport report;
    report.method_label = std::move(method_label);

    std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> groups;
    for (const auto& inst : dataset) {
        auto it = predictions.find(inst.instance_id);
        if (it == predictions.end()) {
            report.excluded.push_back(inst.instance_id);
            continue;
        }
        auto& [gold, pred] = groups[inst.lemma];
        gold.push_back(inst.gold_sense);
        pred.push_back(it->second);
    }
    if (groups.empty()) throw Error("no instance could be evaluated");
    for (const auto& [lemma, labels] : groups) {
        report.per_lemma[lemma] = {labels.first.size(), adjusted_rand_index(labels.first, labels.second)};
    }
    report.total_ari = weighted_ari(report.per_lemma);
    return report;
}

std::optional<std::pair<std::size_t, std::size_t>> resolve_target(const EvalInstance& instance,
                                                                  const std::vector<AnalyzedSentence>& sentences) {
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        for (const auto& span : sentences[s].spans) {
            if (span.start <= instance.target_start && instance.target_start < span.end) {
                return std::pair{s, span.position};
            }
        }
    }
    return std::nullopt;
}

Predictions predict(const EvalDataset& dataset, const Disambiguator& method, const Analyzer& analyzer) {
    Predictions out;
    for (const auto& inst : dataset) {
        std::vector<AnalyzedSentence> sentences;
        try {
            sentences = analyze(inst.context, analyzer);
        } catch (const AnalysisError&) {
            continue;
        }
        const auto target = resolve_target(inst, sentences);
        if (!target) continue;
        AnalyzedSentence sentence = sentences[target->first];
        sentence.spans[target->second].lemma = inst.lemma;
        const auto a = method.disambiguate_word(sentence, target->second);
        out.emplace(inst.instance_id, a.synset_id ? a.synset_id->str() : std::string(kAbstainLabel));
    }
    return out;
}

EvalReport run_evaluation(const EvalDataset& dataset, const Disambiguator& method, const Analyzer& analyzer) {
    return evaluate_predictions(dataset, predict(dataset, method, analyzer), std::string(to_string(method.method())));
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json per = nlohmann::json::object();
    for (const auto& [lemma, score] : report.per_lemma) {
        per[lemma] = {{"instances", score.instance_count}, {"ari", score.ari}};
    }
    return {{"method", report.method_label},
            {"per_lemma", std::move(per)},
            {"total_ari", report.total_ari},
            {"excluded", report.excluded}};
}

EvalReport report_from_json(const nlohmann::json& j) {
    EvalReport report;
    report.method_label = j.at("method").get<std::string>();
    for (const auto& [lemma, score] : j.at("per_lemma").items()) {
        report.per_lemma[lemma] = {score.at("instances").get<std::size_t>(), score.at("ari").get<double>()};
    }
    report.total_ari = j.at("total_ari").get<double>();
    if (j.contains("excluded")) report.excluded = j.at("excluded").get<std::vector<std::string>>();
    return report;
}

void write_report_table(std::ostream& out, const EvalReport& report) {
    std::size_t width = 5;
    std::size_t instances = 0;
    for (const auto& [lemma, score] : report.per_lemma) {
        width = std::max(width, text::code_point_count(lemma));
        instances += score.instance_count;
    }
    const auto pad = [&](const std::string& s) { return s + std::string(width - text::code_point_count(s), ' '); };
    const auto flags = out.flags();
    out << "method: " << report.method_label << '\n';
    out << pad("lemma") << "  instances     ARI\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& [lemma, score] : report.per_lemma) {
        out << pad(lemma) << "  " << std::setw(9) << score.instance_count << "  " << std::setw(6) << score.ari << '\n';
    }
    out << pad("TOTAL") << "  " << std::setw(9) << instances << "  " << std::setw(6) << report.total_ari << '\n';
    if (!report.excluded.empty()) out << "excluded instances: " << report.excluded.size() << '\n';
    out.flags(flags);
}

}  // namespace sensekit
