#include "wikilink/service.hpp"

#include "wikilink/json_render.hpp"
#include "wikilink/retrieval.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <charconv>

namespace wikilink {

void ServiceConfig::validate() const {
    if (port < 0 || port > 65535) throw std::invalid_argument("port must be in [1, 65535] (or 0 for any free port)");
    if (default_k < 1 || default_min_step < 1 || default_path_k < 1 || default_max_hops < 1)
        throw std::invalid_argument("query defaults must be at least 1");
    if (default_pool_size < default_path_k) throw std::invalid_argument("pool size must be at least the path k");
    weights.validate();
}

namespace {

std::size_t count_param(const QueryParams& params, const std::string& name, std::size_t fallback) {
    auto it = params.find(name);
    if (it == params.end()) return fallback;
    std::size_t value = 0;
    const auto& text = it->second;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw std::invalid_argument("parameter '" + name + "' must be a non-negative integer");
    return value;
}

const std::string& required_param(const QueryParams& params, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end() || it->second.empty()) throw std::invalid_argument("missing parameter '" + name + "'");
    return it->second;
}

std::string param_or(const QueryParams& params, const std::string& name, std::string fallback) {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
}

} // namespace

ApiHandler::ApiHandler(const SemanticNetwork& network, ServiceConfig config)
    : network_(network), config_(std::move(config)) {
    config_.validate();
}

template <typename Fn>
ApiResponse ApiHandler::guarded(Fn&& fn) const {
    try {
        return {200, render_json(fn())};
    } catch (const NotFoundError& e) {
        return {404, render_json(error_to_json(e.what(), "not_found", e.suggestions()))};
    } catch (const std::invalid_argument& e) {
        return {400, render_json(error_to_json(e.what(), "bad_request"))};
    } catch (const std::out_of_range& e) {
        return {400, render_json(error_to_json(e.what(), "bad_request"))};
    } catch (const std::exception& e) {
        spdlog::error("request failed: {}", e.what());
        return {500, render_json(error_to_json(e.what(), "internal"))};
    }
}

ApiResponse ApiHandler::explore(const QueryParams& params) const {
    return guarded([&] {
        ExploreQuery q;
        q.term = required_param(params, "term");
        q.mode = parse_mode(param_or(params, "mode", "general"), false);
        q.min_step = count_param(params, "min_step", config_.default_min_step);
        q.k = count_param(params, "k", config_.default_k);
        return explore_to_json(network_, q, wikilink::explore(network_, q, config_.weights), config_.weights);
    });
}

ApiResponse ApiHandler::path(const QueryParams& params) const {
    return guarded([&] {
        PathQuery q;
        q.from = required_param(params, "from");
        q.to = required_param(params, "to");
        q.mode = parse_mode(param_or(params, "mode", "basic"), true);
        q.k = count_param(params, "k", config_.default_path_k);
        q.max_hops = count_param(params, "max_hops", config_.default_max_hops);
        q.pool_size = std::max(config_.default_pool_size, q.k);
        return paths_to_json(network_, q, search_path(network_, q, config_.weights), config_.weights);
    });
}

ApiResponse ApiHandler::concept_view(std::string_view title) const {
    return guarded([&] {
        const auto& node = resolve_term(network_, title);
        return concept_to_json(network_, node.id, config_.weights);
    });
}

ApiResponse ApiHandler::stats() const {
    return guarded([&] { return stats_to_json(network_); });
}

ApiResponse ApiHandler::health() const {
    return guarded([&] {
        return nlohmann::json{{"schema_version", kSchemaVersion},
                              {"status", "ok"},
                              {"node_count", network_.node_count()},
                              {"edge_count", network_.edge_count()}};
    });
}

struct HttpService::Impl {
    ApiHandler handler;
    httplib::Server server;
    int bound_port = -1;

    Impl(const SemanticNetwork& network, ServiceConfig config) : handler(network, std::move(config)) {}
};

namespace {

QueryParams query_params(const httplib::Request& req) {
    QueryParams out;
    for (const auto& [k, v] : req.params) out.emplace(k, v);
    return out;
}

void reply(httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body, "application/json");
}

} // namespace

HttpService::HttpService(const SemanticNetwork& network, ServiceConfig config)
    : impl_(std::make_unique<Impl>(network, std::move(config))) {
    auto& s = impl_->server;
    const auto& h = impl_->handler;
    // SO_REUSEADDR only: binding a port that is in use fails.
    s.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    s.Get("/api/explore", [&h](const httplib::Request& req, httplib::Response& res) {
        reply(res, h.explore(query_params(req)));
    });
    s.Get("/api/path", [&h](const httplib::Request& req, httplib::Response& res) {
        reply(res, h.path(query_params(req)));
    });
    s.Get(R"(/api/concept/(.+))", [&h](const httplib::Request& req, httplib::Response& res) {
        reply(res, h.concept_view(req.matches[1].str()));
    });
    s.Get("/api/stats", [&h](const httplib::Request&, httplib::Response& res) { reply(res, h.stats()); });
    s.Get("/api/health", [&h](const httplib::Request&, httplib::Response& res) { reply(res, h.health()); });
    s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const bool missing = res.status == 404;
        res.set_content(render_json(error_to_json(missing ? "no such endpoint: " + req.path : "request failed",
                                                  missing ? "not_found" : "bad_request")),
                        "application/json");
    });
}

HttpService::~HttpService() = default;

int HttpService::bind() {
    const auto& cfg = impl_->handler.config();
    auto& s = impl_->server;
    if (cfg.port == 0) {
        impl_->bound_port = s.bind_to_any_port(cfg.host);
        if (impl_->bound_port < 0) throw ServiceStartError("cannot bind " + cfg.host);
    } else {
        if (!s.bind_to_port(cfg.host, cfg.port))
            throw ServiceStartError("cannot bind " + cfg.host + ":" + std::to_string(cfg.port) +
                                    " (port busy or not permitted)");
        impl_->bound_port = cfg.port;
    }
    return impl_->bound_port;
}

void HttpService::run() {
    if (impl_->bound_port < 0) throw ServiceStartError("bind() has not succeeded");
    spdlog::info("serving on {}:{}", impl_->handler.config().host, impl_->bound_port);
    impl_->server.listen_after_bind();
}

void HttpService::stop() { impl_->server.stop(); }

bool HttpService::running() const { return impl_->server.is_running(); }

} // namespace wikilink
