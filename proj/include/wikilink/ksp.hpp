#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wikilink {

/// Directed view of a graph for path enumeration: `arcs(u)` lists (v, cost)
/// pairs with cost >= 0, in ascending v.
struct ArcList {
    struct Arc {
        std::uint32_t to;
        double cost;
    };
    std::function<void(std::uint32_t, std::vector<Arc>&)> arcs;
    std::size_t node_count = 0;
};

struct CostedPath {
    std::vector<std::uint32_t> nodes;
    double cost = 0.0;

    std::size_t hops() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
    friend bool operator==(const CostedPath&, const CostedPath&) = default;
};

/// Orders by cost, then hop count, then node sequence.
bool path_less(const CostedPath& a, const CostedPath& b);

/// Cheapest path from `source` to `target` using at most `max_hops` arcs,
/// avoiding `blocked_nodes` (indexed by node id) and the arcs listed in
/// `blocked_arcs` as (from, to). Ties resolve to fewer hops, then to the
/// smaller node sequence. Empty when unreachable.
CostedPath hop_limited_shortest_path(const ArcList& graph, std::uint32_t source, std::uint32_t target,
                                     std::size_t max_hops, const std::vector<bool>& blocked_nodes,
                                     std::span<const std::pair<std::uint32_t, std::uint32_t>> blocked_arcs);

/// Up to `k` loopless source->target paths of at most `max_hops` arcs in
/// ascending `path_less` order, by deviation from previously accepted paths.
std::vector<CostedPath> k_shortest_simple_paths(const ArcList& graph, std::uint32_t source, std::uint32_t target,
                                                std::size_t k, std::size_t max_hops);

} // namespace wikilink
