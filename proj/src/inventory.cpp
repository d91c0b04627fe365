#include "sensekit/inventory.hpp"

#include "sensekit/error.hpp"
#include "sensekit/text.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace sensekit {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_leading_zeros(std::string_view s) {
    const auto pos = s.find_first_not_of('0');
    return pos == std::string_view::npos ? std::string_view("0") : s.substr(pos);
}

std::vector<std::string> parse_lemma_list(std::string_view column, std::size_t line_no,
                                          std::string_view what) {
    std::vector<std::string> lemmas;
    if (text::trim(column).empty()) return lemmas;
    for (auto item : text::split(column, ',')) {
        item = text::trim(item);
        if (item.empty()) throw ParseError(line_no, "empty entry in " + std::string(what) + " list");
        lemmas.push_back(text::fold_case(item));
    }
    return lemmas;
}

void write_list(std::ostream& out, const std::vector<std::string>& lemmas) {
    for (std::size_t i = 0; i < lemmas.size(); ++i) {
        if (i) out << ',';
        out << lemmas[i];
    }
}

}  // namespace

std::strong_ordering operator<=>(const SynsetId& a, const SynsetId& b) {
    const bool an = all_digits(a.value_);
    const bool bn = all_digits(b.value_);
    if (an && bn) {
        const auto as = strip_leading_zeros(a.value_);
        const auto bs = strip_leading_zeros(b.value_);
        if (as.size() != bs.size()) return as.size() <=> bs.size();
        if (auto c = as.compare(bs); c != 0) return c <=> 0;
        return a.value_.compare(b.value_) <=> 0;
    }
    if (an != bn) return an ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.value_.compare(b.value_) <=> 0;
}

bool Synset::bag_contains(std::string_view lemma) const {
    return std::find(bag.begin(), bag.end(), lemma) != bag.end();
}

SenseInventory::SenseInventory(std::vector<Synset> synsets) : synsets_(std::move(synsets)) {
    // Candidate lists must come out sorted by id whatever the file order is.
    std::vector<std::size_t> order(synsets_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t i = 0; i < synsets_.size(); ++i) {
        Synset& s = synsets_[i];
        if (s.id.empty()) throw InvalidArgument("synset with empty id");
        if (s.synonyms.empty()) throw InvalidArgument("synset " + s.id.str() + " has no synonyms");
        for (auto& l : s.synonyms) l = text::fold_case(l);
        for (auto& l : s.hypernyms) l = text::fold_case(l);
        std::vector<std::string> bag = s.synonyms;
        bag.insert(bag.end(), s.hypernyms.begin(), s.hypernyms.end());
        if (!s.bag.empty()) {
            for (auto& l : s.bag) l = text::fold_case(l);
            if (s.bag != bag) throw InvalidArgument("synset " + s.id.str() + ": bag is not synonyms + hypernyms");
        }
        s.bag = std::move(bag);
        if (!by_id_.emplace(s.id, i).second) throw InvalidArgument("duplicate synset id " + s.id.str());
    }

    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return synsets_[a].id < synsets_[b].id; });
    for (std::size_t i : order) {
        const Synset& s = synsets_[i];
        std::set<std::string_view> distinct(s.bag.begin(), s.bag.end());
        for (auto lemma : distinct) {
            auto it = index_.find(lemma);
            if (it == index_.end()) it = index_.emplace(std::string(lemma), std::vector<std::size_t>{}).first;
            it->second.push_back(i);
        }
        stats_.s_max = std::max(stats_.s_max, s.bag.size());
    }

    stats_.synset_count = synsets_.size();
    stats_.vocabulary_size = index_.size();
    for (const auto& [lemma, ids] : index_) stats_.w_max = std::max(stats_.w_max, ids.size());
}

std::span<const std::size_t> SenseInventory::candidate_indices(std::string_view lemma) const {
    auto it = index_.find(lemma);
    if (it == index_.end()) return {};
    return it->second;
}

const Synset* SenseInventory::find(const SynsetId& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &synsets_[it->second];
}

std::vector<std::string> SenseInventory::vocabulary() const {
    std::vector<std::string> out;
    out.reserve(index_.size());
    for (const auto& [lemma, ids] : index_) out.push_back(lemma);
    return out;
}

SenseInventory load_inventory(std::istream& in, InventoryFormat format) {
    if (format != InventoryFormat::Tsv) throw InvalidArgument("unsupported inventory format");

    std::vector<Synset> synsets;
    std::set<SynsetId> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        if (auto bad = text::find_invalid_utf8(line)) {
            throw ParseError(line_no, "invalid UTF-8 at column " + std::to_string(*bad + 1));
        }
        const auto cols = text::split(line, '\t');
        if (cols.size() < 2 || cols.size() > 3) {
            throw ParseError(line_no, "expected 2 or 3 tab-separated columns, got " + std::to_string(cols.size()));
        }
        Synset s;
        s.id = SynsetId(std::string(text::trim(cols[0])));
        if (s.id.empty()) throw ParseError(line_no, "empty synset id");
        if (!seen.insert(s.id).second) throw ParseError(line_no, "duplicate synset id " + s.id.str());
        s.synonyms = parse_lemma_list(cols[1], line_no, "synonym");
        if (s.synonyms.empty()) throw ParseError(line_no, "empty synonym list");
        if (cols.size() == 3) s.hypernyms = parse_lemma_list(cols[2], line_no, "hypernym");
        synsets.push_back(std::move(s));
    }
    return SenseInventory(std::move(synsets));
}

SenseInventory load_inventory_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open inventory " + path.string());
    return load_inventory(in);
}

void write_inventory(std::ostream& out, const SenseInventory& inv) {
    for (const auto& s : inv.synsets()) {
        out << s.id.str() << '\t';
        write_list(out, s.synonyms);
        if (!s.hypernyms.empty()) {
            out << '\t';
            write_list(out, s.hypernyms);
        }
        out << '\n';
    }
}

std::vector<const Synset*> candidates(const SenseInventory& inv, std::string_view lemma) {
    std::vector<const Synset*> out;
    for (std::size_t i : inv.candidate_indices(lemma)) out.push_back(&inv.synsets()[i]);
    return out;
}

InventoryStats inventory_stats(const SenseInventory& inv) { return inv.stats(); }

}  // namespace sensekit
