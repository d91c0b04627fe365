#include "sensekit/config.hpp"

#include "sensekit/error.hpp"
#include "sensekit/text.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>

namespace sensekit {

namespace {

bool parse_bool(std::string_view v, std::size_t line_no) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ParseError(line_no, "expected true or false, got '" + std::string(v) + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
    std::filesystem::path p{std::string(value)};
    return p.is_absolute() ? p : base / p;
}

}  // namespace

ServiceConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    ServiceConfig cfg;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const std::string key(text::trim(line.substr(0, eq)));
        const std::string value(text::trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError(line_no, "empty key");

        if (key == "analyzer") {
            cfg.analyzer = value;
        } else if (key.starts_with("analyzer.")) {
            const auto opt = key.substr(9);
            cfg.analyzer_options[opt] = opt == "lexicon" ? resolve(base_dir, value).string() : value;
        } else if (key.starts_with("inventory.")) {
            const auto name = key.substr(10);
            if (name.empty()) throw ParseError(line_no, "inventory needs a name: inventory.<name> = PATH");
            for (const auto& [existing, path] : cfg.inventories) {
                if (existing == name) throw ParseError(line_no, "duplicate inventory name '" + name + "'");
            }
            cfg.inventories.emplace_back(name, resolve(base_dir, value));
        } else if (key == "embeddings") {
            cfg.embeddings = resolve(base_dir, value);
        } else if (key == "vector_server") {
            cfg.vector_server = value;
        } else if (key == "text_limit") {
            std::size_t n = 0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
            if (ec != std::errc() || ptr != value.data() + value.size() || n == 0) {
                throw ParseError(line_no, "text_limit must be a positive integer");
            }
            cfg.text_limit = n;
        } else if (key == "listen") {
            cfg.listen = value;
        } else if (key == "static_dir") {
            cfg.static_dir = resolve(base_dir, value);
        } else if (key == "cors_origin") {
            cfg.cors_origin = value;
        } else if (key == "sparse.idf") {
            if (value == "smooth") {
                cfg.sparse.idf = IdfVariant::Smooth;
            } else if (value == "plain") {
                cfg.sparse.idf = IdfVariant::Plain;
            } else {
                throw ParseError(line_no, "sparse.idf must be smooth or plain");
            }
        } else if (key == "sparse.binary_tf") {
            cfg.sparse.binary_tf = parse_bool(value, line_no);
        } else if (key == "sparse.exclude_target") {
            cfg.sparse.exclude_target = parse_bool(value, line_no);
        } else if (key == "dense.full_bag_mean") {
            cfg.dense.full_bag_mean = parse_bool(value, line_no);
        } else {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

ServiceConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

void apply_env_overrides(ServiceConfig& config, const EnvLookup& env) {
    if (auto addr = env("VECTOR_SERVER_ADDR"); addr && !addr->empty()) config.vector_server = *addr;
}

std::optional<std::string> process_env(const char* name) {
    const char* v = std::getenv(name);
    if (!v) return std::nullopt;
    return std::string(v);
}

}  // namespace sensekit
