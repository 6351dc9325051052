#include "wikilink/graph_store.hpp"

#include "wikilink/title.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <tuple>

namespace wikilink {

namespace {

std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

} // namespace

std::uint64_t default_pair_increment(PairRole a, PairRole b) {
    if (a == PairRole::see_also && b == PairRole::see_also) return 9;
    if ((a == PairRole::title && b == PairRole::see_also) || (a == PairRole::see_also && b == PairRole::title))
        return 9;
    return 1;
}

double quantize_semantic(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    return std::strtod(buf, nullptr);
}

NetworkStats compute_stats(std::size_t node_count, std::span<const EdgeRecord> edges) {
    NetworkStats stats;
    stats.node_count = node_count;
    stats.edge_count = edges.size();
    std::vector<std::uint64_t> sums(node_count, 0);
    if (!edges.empty()) {
        stats.w_min = std::numeric_limits<std::uint64_t>::max();
        for (const auto& e : edges) {
            stats.w_min = std::min(stats.w_min, e.raw_weight);
            stats.w_max = std::max(stats.w_max, e.raw_weight);
            sums[e.u] += e.raw_weight;
            sums[e.v] += e.raw_weight;
        }
    }
    stats.strength_sum.assign(sums.begin(), sums.end());
    return stats;
}

// ---------------------------------------------------------------------------
// SemanticNetwork

SemanticNetwork::SemanticNetwork(std::vector<ConceptNode> nodes, std::vector<EdgeRecord> edges,
                                 BuildManifest manifest, std::optional<CategoryIndex> category_index)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      manifest_(std::move(manifest)),
      category_index_(std::move(category_index)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id != i) throw std::invalid_argument("node ids must be dense and in order");
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (e.u >= e.v || e.v >= nodes_.size()) throw std::invalid_argument("edge endpoints must satisfy u < v < node_count");
        if (e.raw_weight == 0) throw std::invalid_argument("raw weight must be >= 1");
        if (!(e.semantic_weight >= 0.0 && e.semantic_weight <= 1.0))
            throw std::invalid_argument("semantic weight must lie in [0,1]");
        if (i > 0 && std::tie(edges_[i - 1].u, edges_[i - 1].v) >= std::tie(e.u, e.v))
            throw std::invalid_argument("edges must be sorted and unique");
    }
    stats_ = compute_stats(nodes_.size(), edges_);
    index();
}

void SemanticNetwork::index() {
    by_key_.clear();
    by_folded_key_.clear();
    for (const auto& n : nodes_) {
        if (!by_key_.emplace(title_key(n.title), n.id).second)
            throw std::invalid_argument("duplicate concept title '" + n.title + "'");
        by_folded_key_.emplace(folded_title_key(n.title), n.id);
    }

    offsets_.assign(nodes_.size() + 1, 0);
    for (const auto& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.assign(offsets_.back(), {});
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t i = 0; i < edges_.size(); ++i) {
        adjacency_[fill[edges_[i].u]++] = {edges_[i].v, i};
        adjacency_[fill[edges_[i].v]++] = {edges_[i].u, i};
    }
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[n]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[n + 1]),
                  [](const AdjacencyEntry& a, const AdjacencyEntry& b) { return a.neighbor < b.neighbor; });
    }
}

const ConceptNode& SemanticNetwork::node(NodeId id) const {
    if (id >= nodes_.size()) throw std::out_of_range("node id " + std::to_string(id) + " out of range");
    return nodes_[id];
}

const ConceptNode* SemanticNetwork::lookup(std::string_view title) const {
    if (auto it = by_key_.find(title_key(title)); it != by_key_.end()) return &nodes_[it->second];
    if (auto it = by_folded_key_.find(folded_title_key(title)); it != by_folded_key_.end()) return &nodes_[it->second];
    return nullptr;
}

std::vector<std::string> SemanticNetwork::suggest(std::string_view prefix, std::size_t limit) const {
    std::vector<std::string> out;
    const std::string folded = folded_title_key(prefix);
    if (folded.empty()) return out;
    for (const auto& n : nodes_) {
        if (out.size() >= limit) break;
        if (folded_title_key(n.title).starts_with(folded)) out.push_back(n.title);
    }
    return out;
}

std::span<const AdjacencyEntry> SemanticNetwork::adjacency(NodeId id) const {
    if (id >= nodes_.size()) throw std::out_of_range("node id " + std::to_string(id) + " out of range");
    return std::span<const AdjacencyEntry>(adjacency_).subspan(offsets_[id], offsets_[id + 1] - offsets_[id]);
}

std::vector<Neighbor> SemanticNetwork::neighbors(NodeId id) const {
    std::vector<Neighbor> out;
    for (const auto& a : adjacency(id)) out.push_back({&nodes_[a.neighbor], &edges_[a.edge]});
    return out;
}

const EdgeRecord* SemanticNetwork::find_edge(NodeId a, NodeId b) const {
    if (a >= nodes_.size() || b >= nodes_.size()) return nullptr;
    const auto adj = adjacency(a);
    auto it = std::lower_bound(adj.begin(), adj.end(), b,
                               [](const AdjacencyEntry& e, NodeId target) { return e.neighbor < target; });
    return (it != adj.end() && it->neighbor == b) ? &edges_[it->edge] : nullptr;
}

EdgeInputs SemanticNetwork::edge_inputs(NodeId from, const EdgeRecord& edge) const {
    return {edge.raw_weight, edge.semantic_weight, stats_.w_min, stats_.w_max, stats_.strength_sum[from]};
}

bool operator==(const SemanticNetwork& a, const SemanticNetwork& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.stats_ == b.stats_ && a.manifest_ == b.manifest_ &&
           a.category_index_ == b.category_index_;
}

// ---------------------------------------------------------------------------
// NetworkBuilder

NetworkBuilder::NetworkBuilder(PairRule rule) : rule_(std::move(rule)) {}

void NetworkBuilder::require_open() const {
    if (frozen_) throw FinalizeError("network is finalized; no further accumulation");
}

std::uint32_t NetworkBuilder::intern(std::string_view title, bool is_article) {
    std::string display = normalize_title(title);
    auto [it, inserted] = ids_.try_emplace(title_key(display), static_cast<std::uint32_t>(titles_.size()));
    if (inserted) {
        titles_.push_back(std::move(display));
        is_article_.push_back(is_article);
        categories_.emplace_back();
        return it->second;
    }
    // Display form: the article's own title if there is one, otherwise the
    // smallest spelling seen.
    const std::uint32_t id = it->second;
    if (is_article && !is_article_[id]) {
        titles_[id] = std::move(display);
        is_article_[id] = true;
    } else if (is_article == is_article_[id] && display < titles_[id]) {
        titles_[id] = std::move(display);
    }
    return id;
}

void NetworkBuilder::add_weight(std::string_view a, std::string_view b, std::uint64_t increment) {
    require_open();
    const auto ia = intern(a, false);
    const auto ib = intern(b, false);
    if (ia == ib) throw std::invalid_argument("self pair '" + std::string(a) + "'");
    if (increment == 0) return;
    weights_[pack(ia, ib)] += increment;
}

void NetworkBuilder::accumulate(const ArticleRecord& record) {
    require_open();
    std::vector<std::pair<std::uint32_t, PairRole>> concepts;
    auto add = [&](std::string_view title, PairRole role, bool is_article) {
        const auto id = intern(title, is_article);
        for (auto& c : concepts) {
            if (c.first == id) {
                if (role == PairRole::see_also && c.second == PairRole::main) c.second = role;
                return;
            }
        }
        concepts.emplace_back(id, role);
    };
    add(record.title, PairRole::title, true);
    const auto title_id = concepts.front().first;
    for (const auto& c : record.categories) {
        auto& cats = categories_[title_id];
        if (std::find(cats.begin(), cats.end(), c) == cats.end()) cats.push_back(c);
    }
    for (const auto& link : record.main_links) add(link, PairRole::main, false);
    for (const auto& link : record.see_also) add(link, PairRole::see_also, false);

    for (std::size_t i = 0; i < concepts.size(); ++i) {
        for (std::size_t j = i + 1; j < concepts.size(); ++j) {
            const auto inc = rule_(concepts[i].second, concepts[j].second);
            if (inc > 0) weights_[pack(concepts[i].first, concepts[j].first)] += inc;
        }
    }
}

void NetworkBuilder::merge(const NetworkBuilder& other) {
    require_open();
    std::vector<std::uint32_t> remap(other.titles_.size());
    for (std::size_t i = 0; i < other.titles_.size(); ++i) {
        remap[i] = intern(other.titles_[i], other.is_article_[i]);
        auto& cats = categories_[remap[i]];
        for (const auto& c : other.categories_[i]) {
            if (std::find(cats.begin(), cats.end(), c) == cats.end()) cats.push_back(c);
        }
    }
    for (const auto& [key, weight] : other.weights_) {
        const auto a = static_cast<std::uint32_t>(key >> 32);
        const auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
        weights_[pack(remap[a], remap[b])] += weight;
    }
}

std::uint64_t NetworkBuilder::raw_weight(std::string_view a, std::string_view b) const {
    auto ia = ids_.find(title_key(a));
    auto ib = ids_.find(title_key(b));
    if (ia == ids_.end() || ib == ids_.end()) return 0;
    auto it = weights_.find(pack(ia->second, ib->second));
    return it == weights_.end() ? 0 : it->second;
}

SemanticNetwork NetworkBuilder::finalize(const SemanticFn& semantic, BuildManifest manifest,
                                         std::optional<CategoryIndex> category_index) {
    require_open();
    if (weights_.empty()) throw FinalizeError("nothing to finalize: the network has no edges");

    std::vector<std::uint32_t> order(titles_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return titles_[a] < titles_[b]; });
    std::vector<NodeId> final_id(titles_.size());
    std::vector<ConceptNode> nodes(titles_.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        final_id[order[rank]] = static_cast<NodeId>(rank);
        nodes[rank] = {static_cast<NodeId>(rank), titles_[order[rank]], categories_[order[rank]]};
    }

    std::vector<EdgeRecord> edges;
    edges.reserve(weights_.size());
    for (const auto& [key, weight] : weights_) {
        NodeId a = final_id[key >> 32];
        NodeId b = final_id[key & 0xffffffffu];
        if (a > b) std::swap(a, b);
        edges.push_back({a, b, weight, 0.0});
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeRecord& x, const EdgeRecord& y) {
        return std::tie(x.u, x.v) < std::tie(y.u, y.v);
    });
    if (semantic) {
        for (auto& e : edges)
            e.semantic_weight = quantize_semantic(std::clamp(semantic(nodes[e.u].title, nodes[e.v].title), 0.0, 1.0));
    }

    frozen_ = true;
    return SemanticNetwork(std::move(nodes), std::move(edges), std::move(manifest), std::move(category_index));
}

double average_node_degree(const SemanticNetwork& network, std::span<const NodeId> concepts,
                           const std::optional<ModeSpec>& combined, WeightFormula formula) {
    if (concepts.empty()) throw std::invalid_argument("average node degree of an empty concept list");
    double total = 0.0;
    for (NodeId id : concepts) {
        for (const auto& adj : network.adjacency(id)) {
            const auto& edge = network.edges()[adj.edge];
            total += combined ? edge_value(network.edge_inputs(id, edge), *combined, formula)
                              : static_cast<double>(edge.raw_weight);
        }
    }
    return total / static_cast<double>(concepts.size());
}

} // namespace wikilink
