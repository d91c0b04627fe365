#include "sensekit/disambiguator.hpp"

#include "sensekit/error.hpp"

namespace sensekit {

std::string_view to_string(Method method) { return method == Method::Sparse ? "sparse" : "dense"; }

std::optional<Method> parse_method(std::string_view name) {
    if (name == "sparse") return Method::Sparse;
    if (name == "dense") return Method::Dense;
    return std::nullopt;
}

namespace detail {

void check_position(const AnalyzedSentence& sentence, std::size_t position) {
    if (position >= sentence.spans.size()) {
        throw InvalidArgument("span position " + std::to_string(position) + " out of range for a sentence of " +
                              std::to_string(sentence.spans.size()) + " spans");
    }
}

}  // namespace detail

}  // namespace sensekit
