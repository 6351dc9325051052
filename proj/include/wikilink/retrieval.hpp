#pragma once

#include "wikilink/graph_store.hpp"
#include "wikilink/weighting.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wikilink {

/// Query term or terminal that does not resolve to a concept.
class NotFoundError : public std::runtime_error {
public:
    NotFoundError(std::string term, std::vector<std::string> suggestions);
    const std::string& term() const noexcept { return term_; }
    const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

private:
    std::string term_;
    std::vector<std::string> suggestions_;
};

/// Resolves `term` or throws NotFoundError with up to five prefix suggestions.
const ConceptNode& resolve_term(const SemanticNetwork& network, std::string_view term);

struct ExploreQuery {
    std::string term;
    Mode mode = Mode::explore_general;
    std::size_t min_step = 1;
    std::optional<std::size_t> k = 10; // nullopt: every reachable concept
    std::optional<double> max_cost;

    void validate() const;
};

struct ExploreHit {
    NodeId concept_id = 0;
    double distance = 0.0;
    std::size_t hops = 0;
    std::vector<NodeId> witness_path;

    friend bool operator==(const ExploreHit&, const ExploreHit&) = default;
};

/// Single-source shortest paths from the query term. Hits are the k nearest
/// concepts whose witness path has at least min_step edges, sorted by
/// distance and then node id. Equal-cost routes resolve to fewer hops, then
/// to the smaller node sequence.
std::vector<ExploreHit> explore(const SemanticNetwork& network, const ExploreQuery& query,
                                const WeightConfig& config = {});

struct PathQuery {
    std::string from;
    std::string to;
    Mode mode = Mode::path_basic;
    std::size_t k = 3;
    std::size_t max_hops = 10;
    std::size_t pool_size = 100;

    void validate() const;
};

struct PathResult {
    std::vector<NodeId> nodes;
    std::vector<double> strengths; // per edge, in traversal direction
    double aggregate = 0.0;

    std::size_t hops() const noexcept { return strengths.size(); }
    friend bool operator==(const PathResult&, const PathResult&) = default;
};

/// Floor applied to edge strengths before taking -ln for candidate costs.
inline constexpr double kMinPathStrength = 1e-12;

/// Candidate paths by additive cost sum(-ln s), re-ranked by the mode's mean
/// (descending), then fewer hops, then smaller node sequence.
std::vector<PathResult> search_path(const SemanticNetwork& network, const PathQuery& query,
                                    const WeightConfig& config = {});

/// Per-edge values along `nodes` under the mode, each read from its exit node.
std::vector<double> path_strengths(const SemanticNetwork& network, std::span<const NodeId> nodes,
                                   const ModeSpec& spec, WeightFormula formula);

/// Orders path results as search_path returns them.
bool path_result_before(const PathResult& a, const PathResult& b);

} // namespace wikilink
