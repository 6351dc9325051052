#include "wikilink/json_render.hpp"

#include <algorithm>

namespace wikilink {

using json = nlohmann::json;

namespace {

json titles(const SemanticNetwork& network, std::span<const NodeId> ids) {
    json out = json::array();
    for (NodeId id : ids) out.push_back(network.node(id).title);
    return out;
}

json weights_json(const WeightConfig& config) {
    return {{"alpha_general", config.alpha_general},
            {"alpha_specific", config.alpha_specific},
            {"formula", to_string(config.formula)}};
}

json with_version(json body) {
    json doc = {{"schema_version", kSchemaVersion}};
    doc.update(body);
    return doc;
}

json coverage_rate(const CoverageRate& r) {
    return {{"found", r.found}, {"total", r.total}, {"rate", r.rate()}};
}

} // namespace

json explore_to_json(const SemanticNetwork& network, const ExploreQuery& query, const std::vector<ExploreHit>& hits,
                     const WeightConfig& config) {
    json items = json::array();
    for (const auto& h : hits) {
        items.push_back({{"concept", network.node(h.concept_id).title},
                         {"id", h.concept_id},
                         {"distance", h.distance},
                         {"hops", h.hops},
                         {"witness_path", titles(network, h.witness_path)}});
    }
    const auto* source = network.lookup(query.term);
    return with_version({{"query",
                          {{"term", query.term},
                           {"resolved", source ? json(source->title) : json(nullptr)},
                           {"mode", to_string(query.mode)},
                           {"min_step", query.min_step},
                           {"k", query.k ? json(*query.k) : json(nullptr)},
                           {"max_cost", query.max_cost ? json(*query.max_cost) : json(nullptr)},
                           {"weights", weights_json(config)}}},
                         {"hits", items}});
}

json paths_to_json(const SemanticNetwork& network, const PathQuery& query, const std::vector<PathResult>& paths,
                   const WeightConfig& config) {
    json items = json::array();
    for (const auto& p : paths) {
        items.push_back({{"nodes", titles(network, p.nodes)},
                         {"strengths", p.strengths},
                         {"aggregate", p.aggregate},
                         {"hops", p.hops()}});
    }
    return with_version({{"query",
                          {{"from", query.from},
                           {"to", query.to},
                           {"mode", to_string(query.mode)},
                           {"k", query.k},
                           {"max_hops", query.max_hops},
                           {"pool_size", query.pool_size},
                           {"weights", weights_json(config)}}},
                         {"paths", items}});
}

json concept_to_json(const SemanticNetwork& network, NodeId id, const WeightConfig& config, std::size_t limit) {
    const auto& node = network.node(id);
    const ModeSpec general = mode_spec(Mode::explore_general, config);
    struct Row {
        NodeId id;
        const EdgeRecord* edge;
        double strength;
    };
    std::vector<Row> rows;
    for (const auto& adj : network.adjacency(id)) {
        const auto& edge = network.edges()[adj.edge];
        rows.push_back({adj.neighbor, &edge, edge_value(network.edge_inputs(id, edge), general, config.formula)});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.strength > b.strength; });
    const std::size_t degree = rows.size();
    if (rows.size() > limit) rows.resize(limit);

    json neighbors = json::array();
    for (const auto& r : rows) {
        neighbors.push_back({{"concept", network.node(r.id).title},
                             {"id", r.id},
                             {"raw_weight", r.edge->raw_weight},
                             {"semantic_weight", r.edge->semantic_weight},
                             {"strength", r.strength}});
    }
    return with_version({{"concept",
                          {{"title", node.title}, {"id", node.id}, {"categories", node.categories}, {"degree", degree}}},
                         {"weights", weights_json(config)},
                         {"neighbors", neighbors}});
}

json stats_to_json(const SemanticNetwork& network) {
    const auto& s = network.stats();
    json counts = nullptr;
    if (network.category_index() && network.node_count() > 0)
        counts = category_distribution_to_json(category_distribution(network)).at("category_counts");
    return with_version({{"node_count", s.node_count},
                         {"edge_count", s.edge_count},
                         {"w_min", s.w_min},
                         {"w_max", s.w_max},
                         {"category_counts", counts}});
}

json error_to_json(std::string_view message, std::string_view code, const std::vector<std::string>& suggestions) {
    return with_version({{"error", message}, {"code", code}, {"suggestions", suggestions}});
}

json concept_coverage_to_json(const ConceptCoverage& coverage) {
    json per = json::object();
    for (const auto& [category, rate] : coverage.per_category) per[category] = coverage_rate(rate);
    return with_version({{"concept_coverage",
                          {{"overall", coverage_rate(coverage.overall)},
                           {"per_category", per},
                           {"missing", coverage.missing}}}});
}

json relation_coverage_to_json(const RelationCoverage& coverage) {
    return with_version({{"relationship_coverage",
                          {{"retrieved", coverage.retrieved}, {"total", coverage.total}, {"rate", coverage.rate()}}}});
}

json category_distribution_to_json(const std::map<std::string, std::size_t>& counts) {
    json out = json::object();
    for (const auto& [label, n] : counts) out[label] = n;
    return with_version({{"category_counts", out}});
}

json ratings_to_json(double alpha, const std::vector<GroupAgreement>& groups) {
    json items = json::array();
    for (const auto& g : groups) {
        items.push_back({{"group", g.group},
                         {"n", g.n},
                         {"rho", g.rho},
                         {"critical", g.critical},
                         {"decision", to_string(g.decision)}});
    }
    return with_version({{"cronbach_alpha", alpha}, {"groups", items}});
}

std::string render_json(const json& document) { return document.dump(2) + "\n"; }

} // namespace wikilink
