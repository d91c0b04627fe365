#pragma once

#include "sensekit/dense.hpp"
#include "sensekit/pipeline.hpp"
#include "sensekit/sparse.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sensekit {

/// Service configuration, read from a `key = value` file ('#' comments):
///
///   analyzer = baseline | lexicon        analyzer.<option> = value
///   inventory.<name> = PATH              (repeatable; order is kept)
///   embeddings = PATH                    vector_server = HOST:PORT
///   text_limit = 20000                   listen = HOST:PORT
///   static_dir = PATH                    cors_origin = *
///   sparse.idf = smooth | plain          sparse.binary_tf = true | false
///   sparse.exclude_target = true | false
///   dense.full_bag_mean = true | false
///
/// Relative paths are resolved against the config file's directory.
struct ServiceConfig {
    std::string analyzer = "baseline";
    AnalyzerOptions analyzer_options;
    std::vector<std::pair<std::string, std::filesystem::path>> inventories;
    std::optional<std::filesystem::path> embeddings;
    std::optional<std::string> vector_server;
    std::size_t text_limit = 20000;
    std::optional<std::string> listen;
    std::optional<std::filesystem::path> static_dir;
    std::string cors_origin = "*";
    SparseOptions sparse;
    DenseOptions dense;
};

/// Throws ParseError on unknown keys, bad values or duplicate inventory names.
ServiceConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ServiceConfig load_config_file(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// VECTOR_SERVER_ADDR overrides vector_server.
void apply_env_overrides(ServiceConfig& config, const EnvLookup& env);
std::optional<std::string> process_env(const char* name);

}  // namespace sensekit
