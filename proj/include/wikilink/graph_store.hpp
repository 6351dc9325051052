#pragma once

#include "wikilink/dump_ingest.hpp"
#include "wikilink/weighting.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wikilink {

using NodeId = std::uint32_t;

struct ConceptNode {
    NodeId id = 0;
    std::string title;
    std::vector<std::string> categories;

    friend bool operator==(const ConceptNode&, const ConceptNode&) = default;
};

struct EdgeRecord {
    NodeId u = 0; // smaller endpoint
    NodeId v = 0; // larger endpoint
    std::uint64_t raw_weight = 0;
    double semantic_weight = 0.0;

    NodeId other(NodeId endpoint) const noexcept { return endpoint == u ? v : u; }
    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct NetworkStats {
    std::uint64_t w_min = 0;
    std::uint64_t w_max = 0;
    std::vector<double> strength_sum; // S_i per node
    std::size_t node_count = 0;
    std::size_t edge_count = 0;

    friend bool operator==(const NetworkStats&, const NetworkStats&) = default;
};

/// Recomputes the statistics from an edge list.
NetworkStats compute_stats(std::size_t node_count, std::span<const EdgeRecord> edges);

struct BuildManifest {
    IngestPolicy policy;
    std::size_t ngram_min = 3;
    std::size_t ngram_max = 6;
    std::map<std::string, std::string> source_digests; // source name -> sha256 hex

    friend bool operator==(const BuildManifest&, const BuildManifest&) = default;
};

class FinalizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Which end of an article a concept came from, for the pair rule.
enum class PairRole { title, main, see_also };

/// Raw-weight increment for a co-occurring pair: 9 when both concepts are
/// see-also entries or one is the title and the other a see-also entry,
/// otherwise 1.
std::uint64_t default_pair_increment(PairRole a, PairRole b);

using PairRule = std::function<std::uint64_t(PairRole, PairRole)>;

/// Semantic weight for an edge given its endpoint titles.
using SemanticFn = std::function<double(std::string_view, std::string_view)>;

class SemanticNetwork;

struct Neighbor {
    const ConceptNode* node;
    const EdgeRecord* edge;
};

struct AdjacencyEntry {
    NodeId neighbor;
    std::uint32_t edge; // index into SemanticNetwork::edges()
};

/// Finalized, immutable network. Node ids are dense and assigned in
/// ascending byte order of the display title.
class SemanticNetwork {
public:
    SemanticNetwork() = default;
    SemanticNetwork(std::vector<ConceptNode> nodes, std::vector<EdgeRecord> edges, BuildManifest manifest,
                    std::optional<CategoryIndex> category_index);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const ConceptNode& node(NodeId id) const;
    std::span<const ConceptNode> nodes() const noexcept { return nodes_; }
    /// Sorted by (u, v).
    std::span<const EdgeRecord> edges() const noexcept { return edges_; }
    const NetworkStats& stats() const noexcept { return stats_; }
    const BuildManifest& manifest() const noexcept { return manifest_; }
    const std::optional<CategoryIndex>& category_index() const noexcept { return category_index_; }

    /// Normalized exact match first, then a whole-title case-insensitive
    /// match (lowest id wins). nullptr when absent.
    const ConceptNode* lookup(std::string_view title) const;

    /// Up to `limit` display titles whose case-folded form starts with the
    /// case-folded prefix, in id order.
    std::vector<std::string> suggest(std::string_view prefix, std::size_t limit = 5) const;

    /// Incident edges in ascending neighbor id. Throws std::out_of_range.
    std::vector<Neighbor> neighbors(NodeId id) const;
    std::span<const AdjacencyEntry> adjacency(NodeId id) const;

    const EdgeRecord* find_edge(NodeId a, NodeId b) const;

    /// Inputs for weighing the traversal from -> over `edge`.
    EdgeInputs edge_inputs(NodeId from, const EdgeRecord& edge) const;

    friend bool operator==(const SemanticNetwork& a, const SemanticNetwork& b);

private:
    void index();

    std::vector<ConceptNode> nodes_;
    std::vector<EdgeRecord> edges_;
    NetworkStats stats_;
    BuildManifest manifest_;
    std::optional<CategoryIndex> category_index_;

    std::unordered_map<std::string, NodeId> by_key_;
    std::unordered_map<std::string, NodeId> by_folded_key_;
    std::vector<std::size_t> offsets_;
    std::vector<AdjacencyEntry> adjacency_;
};

/// Build-phase accumulator. Raw weights are keyed by concept and the result
/// does not depend on article order. Shards can be combined with merge().
class NetworkBuilder {
public:
    explicit NetworkBuilder(PairRule rule = default_pair_increment);

    /// Adds the concept set {title} + main_links + see_also of an admitted
    /// article and increments every unordered pair once.
    void accumulate(const ArticleRecord& record);

    /// Adds `increment` to the raw weight between two concepts.
    void add_weight(std::string_view a, std::string_view b, std::uint64_t increment);

    /// Pointwise sum of raw weights; node display titles and categories merge.
    void merge(const NetworkBuilder& other);

    std::size_t node_count() const noexcept { return titles_.size(); }
    std::size_t edge_count() const noexcept { return weights_.size(); }
    std::uint64_t raw_weight(std::string_view a, std::string_view b) const;
    bool frozen() const noexcept { return frozen_; }

    /// Freezes the builder and produces the immutable network. Semantic
    /// weights come from `semantic` (0 when empty) and are rounded to six
    /// decimals, the precision they are persisted with.
    SemanticNetwork finalize(const SemanticFn& semantic = {}, BuildManifest manifest = {},
                             std::optional<CategoryIndex> category_index = std::nullopt);

private:
    std::uint32_t intern(std::string_view title, bool is_article);
    void require_open() const;

    PairRule rule_;
    bool frozen_ = false;
    std::unordered_map<std::string, std::uint32_t> ids_; // title_key -> provisional id
    std::vector<std::string> titles_;
    std::vector<bool> is_article_;
    std::vector<std::vector<std::string>> categories_;
    std::unordered_map<std::uint64_t, std::uint64_t> weights_; // packed (lo, hi) -> raw weight
};

/// Rounds to the six fractional digits used in edges.tsv.
double quantize_semantic(double value);

/// Node degree: sum of incident edge weights. `combined` = nullopt uses raw
/// weights; otherwise each edge contributes its combined strength under the
/// given mode, read from the measured node.
double average_node_degree(const SemanticNetwork& network, std::span<const NodeId> concepts,
                           const std::optional<ModeSpec>& combined, WeightFormula formula = WeightFormula::strength);

// ---------------------------------------------------------------------------
// Persistence

inline constexpr int kFormatVersion = 1;

class PersistenceError : public std::runtime_error {
public:
    enum class Kind { missing_file, version_mismatch, checksum_mismatch, malformed, io };
    PersistenceError(Kind kind, const std::string& message);
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Writes nodes.tsv, edges.tsv and meta.json into `directory` (created if
/// needed). Output bytes depend only on the network.
void save(const SemanticNetwork& network, const std::filesystem::path& directory);

/// Verifies version and checksums before returning anything.
SemanticNetwork load(const std::filesystem::path& directory);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

} // namespace wikilink
