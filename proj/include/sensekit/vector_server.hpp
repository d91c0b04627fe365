#pragma once

#include "sensekit/embeddings.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

// Line-delimited JSON word-vector protocol over TCP.
//
//   request:  {"op":"lookup","words":["a","b"]}\n
//   response: {"dim":3,"vectors":{"a":[0.5,1.0,2.0],"b":null}}\n
//
// Unknown ops or malformed requests get {"error":"..."}\n and the connection stays open.
namespace sensekit {

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;

    /// "host:port" or ":port". Throws InvalidArgument.
    static Endpoint parse(std::string_view address);
    std::string to_string() const;
};

std::string encode_lookup_request(std::span<const std::string> words);

/// Server side of the protocol: one request line in, one response line out (no trailing '\n').
std::string handle_vector_request(const EmbeddingStore& store, std::string_view line);

/// Client for a remote vector server. Keeps one connection, reconnects once
/// on failure, and serializes concurrent callers with a mutex.
class RemoteVectorSource final : public VectorSource {
public:
    /// Connects and learns the server's dimension. Throws ConnectionError when
    /// unreachable, InvalidArgument when `expected_dimension` disagrees.
    explicit RemoteVectorSource(Endpoint endpoint, std::optional<std::size_t> expected_dimension = std::nullopt);
    ~RemoteVectorSource() override;

    RemoteVectorSource(const RemoteVectorSource&) = delete;
    RemoteVectorSource& operator=(const RemoteVectorSource&) = delete;

    std::size_t dimension() const override { return dimension_; }
    VectorSourceKind kind() const override { return VectorSourceKind::Remote; }

    /// Batched: one round trip per call. An empty request never touches the network.
    std::vector<std::optional<WordVector>> lookup(std::span<const std::string> words) const override;

    std::size_t round_trips() const noexcept { return round_trips_.load(); }

private:
    std::string exchange(const std::string& request) const;
    std::string exchange_once(const std::string& request) const;
    void connect_locked() const;
    void close_locked() const;

    Endpoint endpoint_;
    std::size_t dimension_ = 0;
    mutable std::mutex mutex_;
    mutable int fd_ = -1;
    mutable std::string buffer_;
    mutable std::atomic<std::size_t> round_trips_{0};
};

/// Serves an EmbeddingStore over the protocol; one thread per connection.
class VectorServer {
public:
    /// Binds immediately (port 0 picks a free port); throws ConnectionError.
    VectorServer(const EmbeddingStore& store, Endpoint listen);
    ~VectorServer();

    VectorServer(const VectorServer&) = delete;
    VectorServer& operator=(const VectorServer&) = delete;

    std::uint16_t port() const noexcept { return port_; }

    void start();  // accept loop on a background thread
    void run();    // accept loop on the calling thread, returns after stop()
    void stop();

private:
    void serve_connection(int fd);

    const EmbeddingStore& store_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::thread acceptor_;
    std::mutex workers_mutex_;
    std::condition_variable idle_;
    std::size_t active_ = 0;
    std::vector<int> connections_;
};

}  // namespace sensekit
