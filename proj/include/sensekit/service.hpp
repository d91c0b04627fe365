#pragma once

#include "sensekit/config.hpp"
#include "sensekit/dense.hpp"
#include "sensekit/embeddings.hpp"
#include "sensekit/inventory.hpp"
#include "sensekit/pipeline.hpp"
#include "sensekit/sparse.hpp"
#include "sensekit/vector_server.hpp"

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sensekit {

struct LoadedInventory {
    std::string name;
    SenseInventory inventory;
    std::unique_ptr<SparseDisambiguator> sparse;
    std::unique_ptr<DenseDisambiguator> dense;  // null without a vector source
};

/// Everything the service needs, built once at startup and shared read-only.
struct Resources {
    std::unique_ptr<Analyzer> analyzer;
    std::unique_ptr<VectorSource> vectors;
    std::vector<std::unique_ptr<LoadedInventory>> inventories;
    std::size_t text_limit = 20000;

    const LoadedInventory* find(std::string_view name) const;

    /// Builds the models for `inv` against the current `vectors`.
    LoadedInventory& add_inventory(std::string name, SenseInventory inv, SparseOptions sparse = {},
                                   DenseOptions dense = {});
};

/// Loads inventories, embeddings (file or vector server) and the analyzer
/// named in `config`. Diagnostics such as skipped synsets go to `log`.
std::shared_ptr<const Resources> load_resources(const ServiceConfig& config, std::ostream& log);

struct HttpResponse {
    int status = 200;
    std::string body;
};

/// Request handlers, independent of the HTTP transport.
class AnnotationService {
public:
    void set_resources(std::shared_ptr<const Resources> resources);
    std::shared_ptr<const Resources> resources() const;
    bool ready() const { return resources() != nullptr; }

    /// POST /api/disambiguate with {"text", "method", "inventory"}.
    HttpResponse disambiguate(std::string_view body) const;
    /// GET /api/inventories
    HttpResponse inventories() const;
    /// GET /api/health
    HttpResponse health() const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const Resources> resources_;
};

struct HttpServerOptions {
    std::optional<std::filesystem::path> static_dir;
    std::string cors_origin = "*";
};

/// cpp-httplib front end for AnnotationService.
class HttpServer {
public:
    HttpServer(const AnnotationService& service, HttpServerOptions options = {});
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Returns the bound port (useful with port 0). Throws ConnectionError.
    int bind(const Endpoint& endpoint);
    /// Serves until stop(); call after bind().
    void listen();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace sensekit
