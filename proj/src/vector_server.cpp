#include "sensekit/vector_server.hpp"

#include "sensekit/error.hpp"

#include "json.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

namespace sensekit {

using nlohmann::json;

namespace {

constexpr int kIoTimeoutSeconds = 10;
constexpr std::size_t kMaxLine = 64u << 20;

std::string errno_text() { return std::strerror(errno); }

bool send_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return false;
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

// Reads until '\n'; leftover bytes stay in `buffer`. nullopt on EOF or error.
std::optional<std::string> read_line(int fd, std::string& buffer) {
    while (true) {
        if (auto pos = buffer.find('\n'); pos != std::string::npos) {
            std::string line = buffer.substr(0, pos);
            buffer.erase(0, pos + 1);
            return line;
        }
        if (buffer.size() > kMaxLine) return std::nullopt;
        char chunk[8192];
        const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return std::nullopt;
        buffer.append(chunk, static_cast<std::size_t>(n));
    }
}

addrinfo* resolve(const Endpoint& ep, bool passive) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    if (passive) hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    const std::string port = std::to_string(ep.port);
    const int rc = ::getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(), &hints, &res);
    if (rc != 0) throw ConnectionError("cannot resolve " + ep.to_string() + ": " + ::gai_strerror(rc));
    return res;
}

void set_timeouts(int fd) {
    timeval tv{};
    tv.tv_sec = kIoTimeoutSeconds;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

json error_json(std::string message) { return json{{"error", std::move(message)}}; }

}  // namespace

Endpoint Endpoint::parse(std::string_view address) {
    const auto colon = address.rfind(':');
    if (colon == std::string_view::npos) throw InvalidArgument("address must be host:port, got '" + std::string(address) + "'");
    Endpoint ep;
    ep.host = std::string(address.substr(0, colon));
    if (ep.host.size() >= 2 && ep.host.front() == '[' && ep.host.back() == ']') ep.host = ep.host.substr(1, ep.host.size() - 2);
    if (ep.host.empty()) ep.host = "127.0.0.1";
    const auto port = address.substr(colon + 1);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (port.empty() || ec != std::errc() || ptr != port.data() + port.size() || value > 65535) {
        throw InvalidArgument("bad port in address '" + std::string(address) + "'");
    }
    ep.port = static_cast<std::uint16_t>(value);
    return ep;
}

std::string Endpoint::to_string() const { return host + ":" + std::to_string(port); }

std::string encode_lookup_request(std::span<const std::string> words) {
    json req;
    req["op"] = "lookup";
    req["words"] = json::array();
    for (const auto& w : words) req["words"].push_back(w);
    return req.dump();
}

std::string handle_vector_request(const EmbeddingStore& store, std::string_view line) {
    json req;
    try {
        req = json::parse(line);
    } catch (const json::exception&) {
        return error_json("malformed JSON request").dump();
    }
    if (!req.is_object() || !req.contains("op") || req["op"] != "lookup") {
        return error_json("unsupported op").dump();
    }
    if (!req.contains("words") || !req["words"].is_array()) return error_json("'words' must be an array").dump();

    json vectors = json::object();
    for (const auto& w : req["words"]) {
        if (!w.is_string()) return error_json("'words' must contain strings").dump();
        const auto& word = w.get_ref<const std::string&>();
        if (auto v = store.find(word)) {
            json arr = json::array();
            for (float x : *v) arr.push_back(static_cast<double>(x));
            vectors[word] = std::move(arr);
        } else {
            vectors[word] = nullptr;
        }
    }
    json resp;
    resp["dim"] = store.dimension();
    resp["vectors"] = std::move(vectors);
    return resp.dump();
}

RemoteVectorSource::RemoteVectorSource(Endpoint endpoint, std::optional<std::size_t> expected_dimension)
    : endpoint_(std::move(endpoint)) {
    const json resp = json::parse(exchange(encode_lookup_request({})));
    if (resp.contains("error")) throw Error("vector server error: " + resp["error"].get<std::string>());
    dimension_ = resp.at("dim").get<std::size_t>();
    if (dimension_ == 0) throw InvalidArgument("vector server reports dimension 0");
    if (expected_dimension && *expected_dimension != dimension_) {
        throw InvalidArgument("vector server dimension " + std::to_string(dimension_) + " does not match configured " +
                              std::to_string(*expected_dimension));
    }
}

RemoteVectorSource::~RemoteVectorSource() {
    std::lock_guard lock(mutex_);
    close_locked();
}

void RemoteVectorSource::connect_locked() const {
    addrinfo* res = resolve(endpoint_, false);
    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) throw ConnectionError("cannot connect to vector server " + endpoint_.to_string() + ": " + errno_text());
    set_timeouts(fd);
    fd_ = fd;
    buffer_.clear();
}

void RemoteVectorSource::close_locked() const {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
    buffer_.clear();
}

std::string RemoteVectorSource::exchange_once(const std::string& request) const {
    if (fd_ < 0) connect_locked();
    if (!send_all(fd_, request + "\n")) {
        close_locked();
        throw ConnectionError("send to vector server failed");
    }
    auto line = read_line(fd_, buffer_);
    if (!line) {
        close_locked();
        throw ConnectionError("vector server closed the connection");
    }
    ++round_trips_;
    return *line;
}

std::string RemoteVectorSource::exchange(const std::string& request) const {
    std::lock_guard lock(mutex_);
    try {
        return exchange_once(request);
    } catch (const ConnectionError&) {
        // A stale pooled connection fails on first use; one fresh attempt.
        close_locked();
        return exchange_once(request);
    }
}

std::vector<std::optional<WordVector>> RemoteVectorSource::lookup(std::span<const std::string> words) const {
    if (words.empty()) return {};
    json resp;
    try {
        resp = json::parse(exchange(encode_lookup_request(words)));
    } catch (const json::exception& e) {
        throw Error(std::string("malformed vector server response: ") + e.what());
    }
    if (resp.contains("error")) throw Error("vector server error: " + resp["error"].get<std::string>());
    const auto dim = resp.at("dim").get<std::size_t>();
    if (dim != dimension_) {
        throw InvalidArgument("vector server dimension changed from " + std::to_string(dimension_) + " to " +
                              std::to_string(dim));
    }
    const json& vectors = resp.at("vectors");
    std::vector<std::optional<WordVector>> out;
    out.reserve(words.size());
    for (const auto& w : words) {
        auto it = vectors.find(w);
        if (it == vectors.end() || it->is_null()) {
            out.emplace_back(std::nullopt);
            continue;
        }
        if (!it->is_array() || it->size() != dimension_) {
            throw InvalidArgument("vector for '" + w + "' does not have dimension " + std::to_string(dimension_));
        }
        WordVector v;
        v.reserve(dimension_);
        for (const auto& x : *it) v.push_back(static_cast<float>(x.get<double>()));
        out.emplace_back(std::move(v));
    }
    return out;
}

VectorServer::VectorServer(const EmbeddingStore& store, Endpoint listen) : store_(store) {
    addrinfo* res = resolve(listen, true);
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        const int yes = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
        if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
            listen_fd_ = fd;
            break;
        }
        ::close(fd);
    }
    ::freeaddrinfo(res);
    if (listen_fd_ < 0) throw ConnectionError("cannot listen on " + listen.to_string() + ": " + errno_text());

    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    if (addr.ss_family == AF_INET) {
        port_ = ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
    } else {
        port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
    }
}

VectorServer::~VectorServer() {
    stop();
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void VectorServer::start() { acceptor_ = std::thread([this] { run(); }); }

void VectorServer::run() {
    while (!stopping_) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR) continue;
            break;
        }
        std::lock_guard lock(workers_mutex_);
        if (stopping_) {
            ::close(fd);
            break;
        }
        connections_.push_back(fd);
        ++active_;
        std::thread([this, fd] { serve_connection(fd); }).detach();
    }
}

void VectorServer::serve_connection(int fd) {
    std::string buffer;
    while (auto line = read_line(fd, buffer)) {
        if (!send_all(fd, handle_vector_request(store_, *line) + "\n")) break;
    }
    std::lock_guard lock(workers_mutex_);
    std::erase(connections_, fd);
    ::close(fd);
    --active_;
    idle_.notify_all();
}

void VectorServer::stop() {
    if (stopping_.exchange(true)) return;
    if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
    if (acceptor_.joinable()) acceptor_.join();
    std::unique_lock lock(workers_mutex_);
    for (int fd : connections_) ::shutdown(fd, SHUT_RDWR);
    idle_.wait(lock, [this] { return active_ == 0; });
}

}  // namespace sensekit
