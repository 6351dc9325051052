#pragma once

#include "wikilink/eval.hpp"
#include "wikilink/retrieval.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace wikilink {

/// Version of every JSON document produced by the CLI and the HTTP API.
inline constexpr int kSchemaVersion = 1;

/// Neighbor cap of the concept view.
inline constexpr std::size_t kConceptNeighborLimit = 50;

nlohmann::json explore_to_json(const SemanticNetwork& network, const ExploreQuery& query,
                               const std::vector<ExploreHit>& hits, const WeightConfig& config);

nlohmann::json paths_to_json(const SemanticNetwork& network, const PathQuery& query,
                             const std::vector<PathResult>& paths, const WeightConfig& config);

/// The concept and up to `limit` neighbors ordered by combined strength in
/// general mode (descending, then id).
nlohmann::json concept_to_json(const SemanticNetwork& network, NodeId id, const WeightConfig& config,
                               std::size_t limit = kConceptNeighborLimit);

nlohmann::json stats_to_json(const SemanticNetwork& network);

nlohmann::json error_to_json(std::string_view message, std::string_view code,
                             const std::vector<std::string>& suggestions = {});

nlohmann::json concept_coverage_to_json(const ConceptCoverage& coverage);
nlohmann::json relation_coverage_to_json(const RelationCoverage& coverage);
nlohmann::json category_distribution_to_json(const std::map<std::string, std::size_t>& counts);
nlohmann::json ratings_to_json(double alpha, const std::vector<GroupAgreement>& groups);

/// Canonical text form: two-space indentation and a trailing newline.
std::string render_json(const nlohmann::json& document);

} // namespace wikilink
