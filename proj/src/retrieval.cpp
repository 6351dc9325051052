#include "wikilink/retrieval.hpp"

#include "wikilink/ksp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace wikilink {

NotFoundError::NotFoundError(std::string term, std::vector<std::string> suggestions)
    : std::runtime_error("unknown concept '" + term + "'"), term_(std::move(term)), suggestions_(std::move(suggestions)) {}

const ConceptNode& resolve_term(const SemanticNetwork& network, std::string_view term) {
    if (const auto* node = network.lookup(term)) return *node;
    throw NotFoundError(std::string(term), network.suggest(term, 5));
}

void ExploreQuery::validate() const {
    if (!is_explore_mode(mode)) throw std::invalid_argument("explore needs mode general or specific");
    if (min_step < 1) throw std::invalid_argument("min_step must be at least 1");
    if (k && *k < 1) throw std::invalid_argument("k must be at least 1");
    if (max_cost && !(*max_cost >= 0.0)) throw std::invalid_argument("max_cost must be non-negative");
}

void PathQuery::validate() const {
    if (is_explore_mode(mode)) throw std::invalid_argument("path search needs mode basic or professional");
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (max_hops < 1) throw std::invalid_argument("max_hops must be at least 1");
    if (pool_size < k) throw std::invalid_argument("pool_size must be at least k");
}

namespace {

constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

struct Settle {
    double cost = std::numeric_limits<double>::infinity();
    std::uint32_t hops = 0;
    NodeId parent = kNone;
    bool done = false;
};

std::vector<NodeId> trace(const std::vector<Settle>& state, NodeId node) {
    std::vector<NodeId> seq;
    for (; node != kNone; node = state[node].parent) seq.push_back(node);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

} // namespace

std::vector<ExploreHit> explore(const SemanticNetwork& network, const ExploreQuery& query, const WeightConfig& config) {
    query.validate();
    config.validate();
    const ConceptNode& source = resolve_term(network, query.term);
    const ModeSpec spec = mode_spec(query.mode, config);

    std::vector<Settle> state(network.node_count());
    using Key = std::tuple<double, std::uint32_t, NodeId>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
    state[source.id].cost = 0.0;
    heap.emplace(0.0, 0u, source.id);

    std::vector<ExploreHit> hits;
    // Kept sorted by (distance, id) while the search runs.
    auto hit_less = [](const ExploreHit& a, const ExploreHit& b) {
        return std::tie(a.distance, a.concept_id) < std::tie(b.distance, b.concept_id);
    };

    while (!heap.empty()) {
        const auto [cost, hops, node] = heap.top();
        heap.pop();
        auto& here = state[node];
        if (here.done || cost != here.cost || hops != here.hops) continue;
        if (query.max_cost && cost > *query.max_cost) break;
        if (query.k && hits.size() >= *query.k && cost > hits[*query.k - 1].distance) break;
        here.done = true;

        if (node != source.id && hops >= query.min_step) {
            ExploreHit hit{node, cost, hops, trace(state, node)};
            hits.insert(std::upper_bound(hits.begin(), hits.end(), hit, hit_less), std::move(hit));
            if (query.k && hits.size() > *query.k) hits.pop_back();
        }

        for (const auto& adj : network.adjacency(node)) {
            auto& next = state[adj.neighbor];
            if (next.done) continue;
            const double c = cost + traversal_cost(network.edge_inputs(node, network.edges()[adj.edge]), spec,
                                                   config.formula);
            const std::uint32_t h = hops + 1;
            bool better = c < next.cost || (c == next.cost && h < next.hops);
            if (!better && c == next.cost && h == next.hops && next.parent != kNone) {
                // Both parents are settled: compare their witness paths.
                better = trace(state, node) < trace(state, next.parent);
            }
            if (!better) continue;
            next.cost = c;
            next.hops = h;
            next.parent = node;
            heap.emplace(c, h, adj.neighbor);
        }
    }
    return hits;
}

std::vector<double> path_strengths(const SemanticNetwork& network, std::span<const NodeId> nodes, const ModeSpec& spec,
                                   WeightFormula formula) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const EdgeRecord* edge = network.find_edge(nodes[i], nodes[i + 1]);
        if (!edge) throw std::invalid_argument("path uses a missing edge");
        out.push_back(edge_value(network.edge_inputs(nodes[i], *edge), spec, formula));
    }
    return out;
}

bool path_result_before(const PathResult& a, const PathResult& b) {
    if (a.aggregate != b.aggregate) return a.aggregate > b.aggregate;
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
}

std::vector<PathResult> search_path(const SemanticNetwork& network, const PathQuery& query, const WeightConfig& config) {
    query.validate();
    config.validate();
    const ConceptNode& from = resolve_term(network, query.from);
    const ConceptNode& to = resolve_term(network, query.to);
    if (from.id == to.id) throw std::invalid_argument("path terminals are the same concept");
    const ModeSpec spec = mode_spec(query.mode, config);

    ArcList graph;
    graph.node_count = network.node_count();
    graph.arcs = [&](std::uint32_t u, std::vector<ArcList::Arc>& out) {
        out.clear();
        for (const auto& adj : network.adjacency(u)) {
            const double s = edge_value(network.edge_inputs(u, network.edges()[adj.edge]), spec, config.formula);
            out.push_back({adj.neighbor, -std::log(std::max(s, kMinPathStrength))});
        }
    };

    std::vector<PathResult> results;
    for (auto& candidate : k_shortest_simple_paths(graph, from.id, to.id, query.pool_size, query.max_hops)) {
        PathResult r;
        r.strengths = path_strengths(network, candidate.nodes, spec, config.formula);
        r.aggregate = aggregate(r.strengths, spec.aggregation);
        r.nodes = std::move(candidate.nodes);
        results.push_back(std::move(r));
    }
    std::sort(results.begin(), results.end(), path_result_before);
    if (results.size() > query.k) results.resize(query.k);
    return results;
}

} // namespace wikilink
