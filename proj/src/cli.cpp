#include "sensekit/cli.hpp"

#include "sensekit/annotate.hpp"
#include "sensekit/config.hpp"
#include "sensekit/dense.hpp"
#include "sensekit/error.hpp"
#include "sensekit/eval.hpp"
#include "sensekit/inventory.hpp"
#include "sensekit/pipeline.hpp"
#include "sensekit/service.hpp"
#include "sensekit/sparse.hpp"
#include "sensekit/text.hpp"
#include "sensekit/vector_server.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <pthread.h>
#include <sstream>
#include <thread>

namespace sensekit {

namespace {

/// Failure with a chosen exit code; the message goes to the error stream.
struct CliFailure {
    int code;
    std::string message;
};

struct ModelFlags {
    std::string inventory;
    std::string method = "sparse";
    std::string embeddings;
    std::string vector_server;
    std::string analyzer = "lexicon";
    std::string lexicon;
    std::string default_pos;
    std::string idf = "smooth";
    bool binary_tf = false;
    bool exclude_target = false;
    bool full_bag_mean = false;
};

void add_model_flags(CLI::App& cmd, ModelFlags& f, bool method_required) {
    cmd.add_option("--inventory", f.inventory, "sense inventory TSV")->required();
    auto* m = cmd.add_option("--method", f.method, "sparse or dense")->check(CLI::IsMember({"sparse", "dense"}));
    if (method_required) m->required();
    cmd.add_option("--embeddings", f.embeddings, "word2vec binary embedding file");
    cmd.add_option("--vector-server", f.vector_server, "HOST:PORT of a vector server");
    cmd.add_option("--analyzer", f.analyzer, "analyzer plugin (baseline, lexicon)");
    cmd.add_option("--lexicon", f.lexicon, "lexicon TSV for the lexicon analyzer");
    cmd.add_option("--default-pos", f.default_pos, "tag for words missing from the lexicon");
    cmd.add_option("--idf", f.idf, "idf variant")->check(CLI::IsMember({"smooth", "plain"}));
    cmd.add_flag("--binary-tf", f.binary_tf, "use 0/1 term frequencies");
    cmd.add_flag("--exclude-target", f.exclude_target, "leave the target word out of the sentence vector");
    cmd.add_flag("--full-bag-mean", f.full_bag_mean, "divide synset vectors by the full bag size");
}

/// Resources built from command-line flags. Member order matters: the
/// disambiguators hold references to the inventory and the vector source.
struct Loaded {
    std::unique_ptr<Analyzer> analyzer;
    SenseInventory inventory;
    std::unique_ptr<VectorSource> vectors;
    std::unique_ptr<Disambiguator> model;
};

std::unique_ptr<Analyzer> make_analyzer(const ModelFlags& f) {
    AnalyzerOptions opts;
    if (!f.lexicon.empty()) opts["lexicon"] = f.lexicon;
    if (!f.default_pos.empty()) opts["default_pos"] = f.default_pos;
    const auto registry = AnalyzerRegistry::with_builtins();
    if (!registry.contains(f.analyzer)) throw CliFailure{kExitUsage, "unknown analyzer '" + f.analyzer + "'"};
    if (f.analyzer == "baseline" && !opts.empty()) {
        throw CliFailure{kExitUsage, "--lexicon and --default-pos need --analyzer lexicon"};
    }
    if (!f.default_pos.empty() && !parse_pos_tag(f.default_pos)) {
        throw CliFailure{kExitUsage, "unknown tag '" + f.default_pos + "' for --default-pos"};
    }
    try {
        return registry.create(f.analyzer, opts);
    } catch (const Error& e) {
        throw CliFailure{kExitResource, e.what()};
    }
}

std::unique_ptr<VectorSource> make_vectors(const ModelFlags& f) {
    std::string server = f.vector_server;
    if (!f.embeddings.empty() && !server.empty()) {
        throw CliFailure{kExitUsage, "--embeddings and --vector-server are mutually exclusive"};
    }
    if (f.embeddings.empty() && server.empty()) {
        if (auto env = process_env("VECTOR_SERVER_ADDR")) server = *env;
    }
    if (!f.embeddings.empty()) return std::make_unique<EmbeddingStore>(load_embeddings_file(f.embeddings));
    if (server.empty()) return nullptr;
    Endpoint endpoint;
    try {
        endpoint = Endpoint::parse(server);
    } catch (const InvalidArgument& e) {
        throw CliFailure{kExitUsage, e.what()};
    }
    return std::make_unique<RemoteVectorSource>(endpoint);
}

Loaded load_model(const ModelFlags& f, bool need_model) {
    const auto method = parse_method(f.method);
    const bool dense = need_model && method == Method::Dense;
    if (dense && f.embeddings.empty() && f.vector_server.empty() && !process_env("VECTOR_SERVER_ADDR")) {
        throw CliFailure{kExitUsage, "--method dense needs --embeddings or --vector-server (or VECTOR_SERVER_ADDR)"};
    }

    Loaded l;
    l.analyzer = make_analyzer(f);
    try {
        l.inventory = load_inventory_file(f.inventory);
        if (dense) l.vectors = make_vectors(f);
    } catch (const CliFailure&) {
        throw;
    } catch (const Error& e) {
        throw CliFailure{kExitResource, e.what()};
    }
    if (!need_model) return l;
    if (l.inventory.empty()) throw CliFailure{kExitResource, "inventory " + f.inventory + " has no synsets"};

    if (dense) {
        l.model = std::make_unique<DenseDisambiguator>(l.inventory, *l.vectors, DenseOptions{f.full_bag_mean});
    } else {
        SparseOptions so;
        so.idf = f.idf == "plain" ? IdfVariant::Plain : IdfVariant::Smooth;
        so.binary_tf = f.binary_tf;
        so.exclude_target = f.exclude_target;
        l.model = std::make_unique<SparseDisambiguator>(l.inventory, so);
    }
    return l;
}

void write_human(std::ostream& out, const nlohmann::json& doc) {
    for (const auto& sentence : doc["sentences"]) {
        for (const auto& span : sentence["spans"]) {
            if (!span.contains("synset_id")) continue;
            out << span["word"].get<std::string>() << '\t' << span["lemma"].get<std::string>() << '\t'
                << span["synset_id"].get<std::string>() << '\t' << std::fixed << std::setprecision(6)
                << span["score"].get<double>() << '\n';
        }
    }
}

int cmd_disambiguate(const ModelFlags& f, bool json_output, std::istream& in, std::ostream& out) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const Loaded l = load_model(f, true);
    nlohmann::json doc;
    try {
        doc = annotate_text(text, *l.analyzer, *l.model);
    } catch (const AnalysisError& e) {
        throw CliFailure{kExitFailure, e.what()};
    } catch (const ConnectionError& e) {
        throw CliFailure{kExitResource, e.what()};
    }
    if (json_output) {
        out << doc.dump() << '\n';
    } else {
        write_human(out, doc);
    }
    return kExitOk;
}

int cmd_evaluate(const ModelFlags& f, const std::string& dataset_path, const std::string& baseline,
                 const std::string& report_path, bool method_given, std::ostream& out, std::ostream& err) {
    if (baseline.empty() && !method_given) throw CliFailure{kExitUsage, "evaluate needs --method or --baseline"};
    if (!baseline.empty() && method_given) throw CliFailure{kExitUsage, "--method and --baseline are mutually exclusive"};

    EvalDataset dataset;
    try {
        dataset = load_dataset_file(dataset_path);
    } catch (const Error& e) {
        throw CliFailure{kExitResource, e.what()};
    }

    EvalReport report;
    if (!baseline.empty()) {
        load_model(f, false);  // the inventory must still be readable
        const auto preds = baseline == "one" ? baseline_one(dataset) : baseline_singletons(dataset);
        report = evaluate_predictions(dataset, preds, baseline);
    } else {
        const Loaded l = load_model(f, true);
        try {
            report = run_evaluation(dataset, *l.model, *l.analyzer);
        } catch (const ConnectionError& e) {
            throw CliFailure{kExitResource, e.what()};
        }
    }

    for (const auto& id : report.excluded) err << "excluded instance " << id << ": target not resolvable\n";

    std::ofstream file(report_path, std::ios::binary);
    if (!file) throw CliFailure{kExitResource, "cannot write report " + report_path};
    file << report_to_json(report).dump(2) << '\n';
    if (!file.flush()) throw CliFailure{kExitResource, "cannot write report " + report_path};
    write_report_table(out, report);
    return kExitOk;
}

int cmd_inspect(const std::string& path, const std::optional<std::string>& lemma, bool json_output,
                std::ostream& out) {
    SenseInventory inv;
    try {
        inv = load_inventory_file(path);
    } catch (const Error& e) {
        throw CliFailure{kExitResource, e.what()};
    }
    if (!lemma) {
        const auto st = inventory_stats(inv);
        if (json_output) {
            out << nlohmann::json{{"synset_count", st.synset_count},
                                  {"vocabulary_size", st.vocabulary_size},
                                  {"w_max", st.w_max},
                                  {"s_max", st.s_max}}
                       .dump()
                << '\n';
        } else {
            out << "synsets\t" << st.synset_count << "\nvocabulary\t" << st.vocabulary_size << "\nw_max\t" << st.w_max
                << "\ns_max\t" << st.s_max << '\n';
        }
        return kExitOk;
    }

    const auto found = candidates(inv, text::fold_case(*lemma));
    if (json_output) {
        nlohmann::json arr = nlohmann::json::array();
        for (const Synset* s : found) {
            arr.push_back({{"synset_id", s->id.str()}, {"synonyms", s->synonyms}, {"hypernyms", s->hypernyms}});
        }
        out << arr.dump() << '\n';
        return kExitOk;
    }
    const auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& w : v) s += (s.empty() ? "" : ",") + w;
        return s;
    };
    for (const Synset* s : found) out << s->id.str() << '\t' << join(s->synonyms) << '\t' << join(s->hypernyms) << '\n';
    return kExitOk;
}

/// Blocks SIGINT/SIGTERM for this thread and every thread it starts afterwards.
class SignalBlock {
public:
    SignalBlock() {
        sigemptyset(&set_);
        sigaddset(&set_, SIGINT);
        sigaddset(&set_, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &set_, &old_);
    }
    ~SignalBlock() { pthread_sigmask(SIG_SETMASK, &old_, nullptr); }

    int wait() const {
        int sig = 0;
        sigwait(&set_, &sig);
        return sig;
    }

private:
    sigset_t set_{};
    sigset_t old_{};
};

int cmd_serve(const std::string& config_path, const std::string& listen_flag, std::ostream& err) {
    ServiceConfig config;
    try {
        config = load_config_file(config_path);
        apply_env_overrides(config, process_env);
    } catch (const Error& e) {
        throw CliFailure{kExitUsage, e.what()};
    }
    const std::string address = !listen_flag.empty() ? listen_flag : config.listen.value_or("127.0.0.1:8080");
    Endpoint endpoint;
    try {
        endpoint = Endpoint::parse(address);
    } catch (const InvalidArgument& e) {
        throw CliFailure{kExitUsage, e.what()};
    }
    if (config.static_dir && !std::filesystem::is_directory(*config.static_dir)) {
        throw CliFailure{kExitResource, "static_dir " + config.static_dir->string() + " is not a directory"};
    }

    SignalBlock signals;
    AnnotationService service;
    HttpServer server(service, HttpServerOptions{config.static_dir, config.cors_origin});
    int port = 0;
    try {
        port = server.bind(endpoint);
    } catch (const Error& e) {
        throw CliFailure{kExitResource, e.what()};
    }
    std::thread http([&] { server.listen(); });
    err << "listening on " << endpoint.host << ':' << port << std::endl;

    // Health answers 503 until the models are built.
    try {
        service.set_resources(load_resources(config, err));
    } catch (const Error& e) {
        server.stop();
        http.join();
        throw CliFailure{kExitResource, e.what()};
    }
    err << "ready" << std::endl;

    const int sig = signals.wait();
    err << "received signal " << sig << ", shutting down" << std::endl;
    server.stop();
    http.join();
    return kExitOk;
}

int cmd_serve_vectors(const std::string& embeddings, const std::string& listen, std::ostream& err) {
    Endpoint endpoint;
    try {
        endpoint = Endpoint::parse(listen);
    } catch (const InvalidArgument& e) {
        throw CliFailure{kExitUsage, e.what()};
    }
    std::optional<EmbeddingStore> store;
    try {
        store.emplace(load_embeddings_file(embeddings));
    } catch (const Error& e) {
        throw CliFailure{kExitResource, e.what()};
    }

    SignalBlock signals;
    std::optional<VectorServer> server;
    try {
        server.emplace(*store, endpoint);
    } catch (const Error& e) {
        throw CliFailure{kExitResource, e.what()};
    }
    server->start();
    err << "listening on " << endpoint.host << ':' << server->port() << std::endl;
    const int sig = signals.wait();
    err << "received signal " << sig << ", shutting down" << std::endl;
    server->stop();
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Unsupervised word sense disambiguation over a sense inventory", "sensekit"};
    app.require_subcommand(1);

    ModelFlags dis_flags;
    bool dis_json = false;
    auto* dis = app.add_subcommand("disambiguate", "annotate text read from stdin");
    add_model_flags(*dis, dis_flags, true);
    dis->add_flag("--json", dis_json, "print the same JSON as the HTTP service");

    ModelFlags eval_flags;
    std::string dataset;
    std::string baseline;
    std::string report;
    auto* ev = app.add_subcommand("evaluate", "score a labelled dataset with ARI");
    add_model_flags(*ev, eval_flags, false);
    ev->add_option("--dataset", dataset, "evaluation TSV")->required();
    ev->add_option("--baseline", baseline, "one or singletons")->check(CLI::IsMember({"one", "singletons"}));
    ev->add_option("--report", report, "JSON report output path")->required();

    std::string inspect_inventory;
    std::optional<std::string> inspect_lemma;
    bool inspect_json = false;
    auto* ins = app.add_subcommand("inspect", "inventory statistics or candidate synsets of a lemma");
    ins->add_option("--inventory", inspect_inventory, "sense inventory TSV")->required();
    ins->add_option("--lemma", inspect_lemma, "list the candidate synsets of this lemma");
    ins->add_flag("--json", inspect_json, "JSON output");

    std::string config;
    std::string listen;
    auto* srv = app.add_subcommand("serve", "run the HTTP annotation service");
    srv->add_option("--config", config, "service config file")->required();
    srv->add_option("--listen", listen, "HOST:PORT (overrides the config)");

    std::string vec_embeddings;
    std::string vec_listen = "127.0.0.1:7070";
    auto* vec = app.add_subcommand("serve-vectors", "serve an embedding file over the vector protocol");
    vec->add_option("--embeddings", vec_embeddings, "word2vec binary embedding file")->required();
    vec->add_option("--listen", vec_listen, "HOST:PORT")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*dis) return cmd_disambiguate(dis_flags, dis_json, in, out);
        if (*ev) return cmd_evaluate(eval_flags, dataset, baseline, report, ev->count("--method") > 0, out, err);
        if (*ins) return cmd_inspect(inspect_inventory, inspect_lemma, inspect_json, out);
        if (*srv) return cmd_serve(config, listen, err);
        if (*vec) return cmd_serve_vectors(vec_embeddings, vec_listen, err);
    } catch (const CliFailure& f) {
        err << "sensekit: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        err << "sensekit: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace sensekit
