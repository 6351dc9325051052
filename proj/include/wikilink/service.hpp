#pragma once

#include "wikilink/graph_store.hpp"
#include "wikilink/weighting.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace wikilink {

struct ServiceConfig {
    std::filesystem::path network_dir;
    std::string host = "127.0.0.1";
    int port = 8080; // 0 picks a free port
    WeightConfig weights;
    std::size_t default_k = 10;
    std::size_t default_min_step = 1;
    std::size_t default_path_k = 3;
    std::size_t default_max_hops = 10;
    std::size_t default_pool_size = 100;

    /// Throws std::invalid_argument on a bad port or default.
    void validate() const;
};

struct ApiResponse {
    int status = 200;
    std::string body;
};

using QueryParams = std::map<std::string, std::string>;

/// Transport-independent request handling. Every body is canonical JSON
/// (see render_json); errors carry {error, code, suggestions}.
class ApiHandler {
public:
    ApiHandler(const SemanticNetwork& network, ServiceConfig config);

    ApiResponse explore(const QueryParams& params) const;
    ApiResponse path(const QueryParams& params) const;
    ApiResponse concept_view(std::string_view title) const;
    ApiResponse stats() const;
    ApiResponse health() const;

    const ServiceConfig& config() const noexcept { return config_; }

private:
    template <typename Fn>
    ApiResponse guarded(Fn&& fn) const;

    const SemanticNetwork& network_;
    ServiceConfig config_;
};

class ServiceStartError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// HTTP front end over ApiHandler. The network must outlive the server.
class HttpService {
public:
    HttpService(const SemanticNetwork& network, ServiceConfig config);
    ~HttpService();
    HttpService(const HttpService&) = delete;
    HttpService& operator=(const HttpService&) = delete;

    /// Binds the configured address; throws ServiceStartError when the port
    /// is taken. Returns the bound port.
    int bind();

    /// Serves until stop() is called. bind() must have succeeded.
    void run();

    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace wikilink
