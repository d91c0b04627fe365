#include "sensekit/service.hpp"

#include "sensekit/annotate.hpp"
#include "sensekit/error.hpp"
#include "sensekit/text.hpp"

#include "httplib.h"
#include "json.hpp"

#include <ostream>

namespace sensekit {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump()}; }

HttpResponse error_response(int status, std::string_view code, const std::string& message) {
    return json_response(status, {{"error", {{"code", code}, {"message", message}}}});
}

}  // namespace

const LoadedInventory* Resources::find(std::string_view name) const {
    for (const auto& inv : inventories) {
        if (inv->name == name) return inv.get();
    }
    return nullptr;
}

LoadedInventory& Resources::add_inventory(std::string name, SenseInventory inv, SparseOptions sparse,
                                          DenseOptions dense) {
    auto loaded = std::make_unique<LoadedInventory>();
    loaded->name = std::move(name);
    loaded->inventory = std::move(inv);
    if (!loaded->inventory.empty()) {
        loaded->sparse = std::make_unique<SparseDisambiguator>(loaded->inventory, sparse);
        if (vectors) loaded->dense = std::make_unique<DenseDisambiguator>(loaded->inventory, *vectors, dense);
    }
    inventories.push_back(std::move(loaded));
    return *inventories.back();
}

std::shared_ptr<const Resources> load_resources(const ServiceConfig& config, std::ostream& log) {
    auto res = std::make_shared<Resources>();
    res->text_limit = config.text_limit;
    res->analyzer = AnalyzerRegistry::with_builtins().create(config.analyzer, config.analyzer_options);

    if (config.vector_server) {
        res->vectors = std::make_unique<RemoteVectorSource>(Endpoint::parse(*config.vector_server));
        log << "using vector server " << *config.vector_server << " (dimension " << res->vectors->dimension() << ")\n";
    } else if (config.embeddings) {
        auto store = load_embeddings_file(*config.embeddings);
        log << "loaded " << store.size() << " embeddings of dimension " << store.dimension() << " from "
            << config.embeddings->string() << '\n';
        res->vectors = std::make_unique<EmbeddingStore>(std::move(store));
    }

    for (const auto& [name, path] : config.inventories) {
        auto& loaded = res->add_inventory(name, load_inventory_file(path), config.sparse, config.dense);
        const auto& st = loaded.inventory.stats();
        log << "inventory " << name << ": " << st.synset_count << " synsets, " << st.vocabulary_size << " lemmas\n";
        if (loaded.dense && !loaded.dense->table().skipped.empty()) {
            log << "inventory " << name << ": " << loaded.dense->table().skipped.size()
                << " synsets have no embedded lemma and are skipped by the dense model\n";
        }
    }
    return res;
}

void AnnotationService::set_resources(std::shared_ptr<const Resources> resources) {
    std::lock_guard lock(mutex_);
    resources_ = std::move(resources);
}

std::shared_ptr<const Resources> AnnotationService::resources() const {
    std::lock_guard lock(mutex_);
    return resources_;
}

HttpResponse AnnotationService::disambiguate(std::string_view body) const {
    const auto res = resources();
    if (!res) return error_response(503, "not_ready", "service is still initializing");
    if (auto bad = text::find_invalid_utf8(body)) {
        return error_response(422, "invalid_utf8", "request body is not valid UTF-8 at byte " + std::to_string(*bad));
    }

    json req;
    try {
        req = json::parse(body);
    } catch (const json::exception& e) {
        return error_response(400, "bad_request", std::string("malformed JSON: ") + e.what());
    }
    if (!req.is_object() || !req.contains("text") || !req["text"].is_string()) {
        return error_response(400, "bad_request", "body must be an object with a string 'text'");
    }
    const auto& text = req["text"].get_ref<const std::string&>();
    if (text::code_point_count(text) > res->text_limit) {
        return error_response(413, "text_too_long",
                              "text exceeds the limit of " + std::to_string(res->text_limit) + " characters");
    }

    std::string method_name = "sparse";
    if (req.contains("method")) {
        if (!req["method"].is_string()) return error_response(400, "unknown_method", "'method' must be a string");
        method_name = req["method"].get<std::string>();
    }
    const auto method = parse_method(method_name);
    if (!method) return error_response(400, "unknown_method", "unknown method '" + method_name + "'");

    const LoadedInventory* inv = nullptr;
    if (req.contains("inventory")) {
        if (!req["inventory"].is_string()) return error_response(400, "unknown_inventory", "'inventory' must be a string");
        inv = res->find(req["inventory"].get_ref<const std::string&>());
        if (!inv) return error_response(400, "unknown_inventory", "unknown inventory '" + req["inventory"].get<std::string>() + "'");
    } else if (!res->inventories.empty()) {
        inv = res->inventories.front().get();
    }
    if (!inv) return error_response(400, "unknown_inventory", "no inventory is loaded");

    const Disambiguator* model = nullptr;
    if (*method == Method::Sparse) {
        model = inv->sparse.get();
    } else {
        if (!inv->dense) return error_response(400, "embeddings_unavailable", "dense method needs embeddings");
        model = inv->dense.get();
    }
    if (!model) return error_response(400, "unknown_inventory", "inventory '" + inv->name + "' is empty");

    try {
        return json_response(200, annotate_text(text, *res->analyzer, *model));
    } catch (const ConnectionError& e) {
        return error_response(503, "vector_server_unavailable", e.what());
    } catch (const AnalysisError& e) {
        return error_response(500, "analysis_failed", e.what());
    }
}

HttpResponse AnnotationService::inventories() const {
    const auto res = resources();
    if (!res) return error_response(503, "not_ready", "service is still initializing");
    json out = json::array();
    for (const auto& inv : res->inventories) {
        out.push_back({{"name", inv->name},
                       {"synset_count", inv->inventory.stats().synset_count},
                       {"vocabulary_size", inv->inventory.stats().vocabulary_size}});
    }
    return json_response(200, out);
}

HttpResponse AnnotationService::health() const {
    const auto res = resources();
    if (!res) return json_response(503, {{"status", "starting"}, {"inventories", 0}, {"embeddings_loaded", false}});
    return json_response(200, {{"status", "ok"},
                               {"inventories", res->inventories.size()},
                               {"embeddings_loaded", res->vectors != nullptr}});
}

struct HttpServer::Impl {
    Impl(const AnnotationService& s, HttpServerOptions o) : service(s), options(std::move(o)) {}

    const AnnotationService& service;
    HttpServerOptions options;
    httplib::Server server;
};

HttpServer::HttpServer(const AnnotationService& service, HttpServerOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
    auto& srv = impl_->server;
    const AnnotationService* svc = &service;

    srv.set_default_headers({{"Access-Control-Allow-Origin", impl_->options.cors_origin},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"}});
    srv.set_payload_max_length(16u << 20);

    auto reply = [](httplib::Response& out, const HttpResponse& r) {
        out.status = r.status;
        out.set_content(r.body, "application/json; charset=utf-8");
    };
    srv.Post("/api/disambiguate", [svc, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc->disambiguate(req.body));
    });
    srv.Get("/api/inventories",
            [svc, reply](const httplib::Request&, httplib::Response& res) { reply(res, svc->inventories()); });
    srv.Get("/api/health", [svc, reply](const httplib::Request&, httplib::Response& res) { reply(res, svc->health()); });
    srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    if (impl_->options.static_dir) srv.set_mount_point("/", impl_->options.static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const Endpoint& endpoint) {
    int port = endpoint.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(endpoint.host);
    } else if (!impl_->server.bind_to_port(endpoint.host, port)) {
        port = -1;
    }
    if (port < 0) throw ConnectionError("cannot listen on " + endpoint.to_string());
    return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace sensekit
