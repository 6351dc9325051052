#include "wikilink/ksp.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace wikilink {

bool path_less(const CostedPath& a, const CostedPath& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
}

namespace {

constexpr std::uint32_t kNoParent = UINT32_MAX;

struct Label {
    std::uint32_t node;
    double cost;
    std::uint32_t hops;
    std::uint32_t parent;
    bool dead = false;
};

std::vector<std::uint32_t> unwind(const std::vector<Label>& labels, std::uint32_t id) {
    std::vector<std::uint32_t> seq;
    for (; id != kNoParent; id = labels[id].parent) seq.push_back(labels[id].node);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

double arc_cost(const ArcList& graph, std::uint32_t from, std::uint32_t to, std::vector<ArcList::Arc>& scratch) {
    graph.arcs(from, scratch);
    for (const auto& a : scratch) {
        if (a.to == to) return a.cost;
    }
    throw std::logic_error("path uses a missing arc");
}

double path_cost(const ArcList& graph, const std::vector<std::uint32_t>& nodes, std::vector<ArcList::Arc>& scratch) {
    double cost = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) cost += arc_cost(graph, nodes[i], nodes[i + 1], scratch);
    return cost;
}

} // namespace

CostedPath hop_limited_shortest_path(const ArcList& graph, std::uint32_t source, std::uint32_t target,
                                     std::size_t max_hops, const std::vector<bool>& blocked_nodes,
                                     std::span<const std::pair<std::uint32_t, std::uint32_t>> blocked_arcs) {
    if (source == target || max_hops == 0) return {};

    // Label-setting search over (cost, hops): a label survives at a node only
    // if no other label there is at least as cheap with at most as many hops.
    std::vector<Label> labels;
    std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> front; // node -> live label ids
    using Key = std::tuple<double, std::uint32_t, std::uint32_t, std::uint32_t>; // cost, hops, node, label
    std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;

    labels.push_back({source, 0.0, 0, kNoParent});
    front[source].push_back(0);
    heap.emplace(0.0, 0u, source, 0u);

    std::vector<ArcList::Arc> arcs;
    while (!heap.empty()) {
        const auto [cost, hops, node, id] = heap.top();
        heap.pop();
        if (labels[id].dead) continue;
        if (node == target) return {unwind(labels, id), cost};
        if (hops >= max_hops) continue;

        graph.arcs(node, arcs);
        for (const auto& arc : arcs) {
            if (blocked_nodes[arc.to] || arc.to == source) continue;
            if (std::find(blocked_arcs.begin(), blocked_arcs.end(), std::pair{node, arc.to}) != blocked_arcs.end())
                continue;
            const double c = cost + arc.cost;
            const std::uint32_t h = hops + 1;

            auto& live = front[arc.to];
            bool dominated = false;
            std::uint32_t tie = kNoParent;
            for (auto other : live) {
                const auto& o = labels[other];
                if (o.cost == c && o.hops == h) {
                    tie = other;
                } else if (o.cost <= c && o.hops <= h) {
                    dominated = true;
                    break;
                }
            }
            if (dominated) continue;
            if (tie != kNoParent) {
                // Same key: keep the lexicographically smaller node sequence.
                auto current = unwind(labels, labels[tie].parent);
                auto candidate = unwind(labels, id);
                if (candidate < current) labels[tie].parent = id;
                continue;
            }
            std::erase_if(live, [&](std::uint32_t other) {
                auto& o = labels[other];
                if (c <= o.cost && h <= o.hops) {
                    o.dead = true;
                    return true;
                }
                return false;
            });
            const auto new_id = static_cast<std::uint32_t>(labels.size());
            labels.push_back({arc.to, c, h, id});
            live.push_back(new_id);
            heap.emplace(c, h, arc.to, new_id);
        }
    }
    return {};
}

std::vector<CostedPath> k_shortest_simple_paths(const ArcList& graph, std::uint32_t source, std::uint32_t target,
                                                std::size_t k, std::size_t max_hops) {
    std::vector<CostedPath> accepted;
    if (k == 0 || source == target) return accepted;

    std::vector<bool> blocked(graph.node_count, false);
    CostedPath first = hop_limited_shortest_path(graph, source, target, max_hops, blocked, {});
    if (first.nodes.empty()) return accepted;
    accepted.push_back(std::move(first));

    std::set<CostedPath, decltype(&path_less)> candidates(&path_less);
    std::vector<ArcList::Arc> scratch;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> blocked_arcs;

    while (accepted.size() < k) {
        const CostedPath previous = accepted.back();
        for (std::size_t i = 0; i + 1 < previous.nodes.size(); ++i) {
            const std::uint32_t spur = previous.nodes[i];
            const std::size_t budget = max_hops - i;

            blocked_arcs.clear();
            for (const auto& p : accepted) {
                if (p.nodes.size() > i + 1 && std::equal(p.nodes.begin(), p.nodes.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                                         previous.nodes.begin()))
                    blocked_arcs.emplace_back(spur, p.nodes[i + 1]);
            }
            for (std::size_t r = 0; r < i; ++r) blocked[previous.nodes[r]] = true;

            CostedPath tail = hop_limited_shortest_path(graph, spur, target, budget, blocked, blocked_arcs);

            for (std::size_t r = 0; r < i; ++r) blocked[previous.nodes[r]] = false;
            if (tail.nodes.empty()) continue;

            CostedPath candidate;
            candidate.nodes.assign(previous.nodes.begin(), previous.nodes.begin() + static_cast<std::ptrdiff_t>(i));
            candidate.nodes.insert(candidate.nodes.end(), tail.nodes.begin(), tail.nodes.end());
            candidate.cost = path_cost(graph, candidate.nodes, scratch);
            candidates.insert(std::move(candidate));
        }
        if (candidates.empty()) break;
        accepted.push_back(*candidates.begin());
        candidates.erase(candidates.begin());
    }
    return accepted;
}

} // namespace wikilink
