#include "wikilink/cli.hpp"

#include "wikilink/build_pipeline.hpp"
#include "wikilink/eval.hpp"
#include "wikilink/json_render.hpp"
#include "wikilink/retrieval.hpp"
#include "wikilink/service.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <csignal>
#include <ostream>

namespace wikilink {

namespace {

/// Options shared by every command that reads a saved network.
struct QueryOptions {
    std::string network;
    double alpha_general = WeightConfig{}.alpha_general;
    double alpha_specific = WeightConfig{}.alpha_specific;
    std::string formula = "strength";
    bool json = false;

    WeightConfig weights() const {
        WeightConfig w;
        w.alpha_general = alpha_general;
        w.alpha_specific = alpha_specific;
        w.formula = parse_weight_formula(formula);
        w.validate();
        return w;
    }

    std::string directory() const {
        std::string dir = network;
        if (dir.empty()) {
            if (const char* env = std::getenv("WIKILINK_NETWORK")) dir = env;
        }
        if (dir.empty()) throw std::invalid_argument("no network directory: pass --network or set WIKILINK_NETWORK");
        return dir;
    }

    SemanticNetwork load_network() const { return load(directory()); }
};

void add_network_options(CLI::App* cmd, QueryOptions& o, bool weights) {
    cmd->add_option("--network", o.network, "Network directory (default: $WIKILINK_NETWORK)");
    if (weights) {
        cmd->add_option("--alpha-general", o.alpha_general, "Semantic coefficient for general/basic modes");
        cmd->add_option("--alpha-specific", o.alpha_specific, "Semantic coefficient for specific/professional modes");
        cmd->add_option("--weight-formula", o.formula, "Edge weight formula")->check(CLI::IsMember({"strength", "literal"}));
    }
    cmd->add_flag("--json", o.json, "Print JSON instead of a table");
}

std::string fixed(double value, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

std::string join_titles(const SemanticNetwork& network, std::span<const NodeId> ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += " -> ";
        out += network.node(ids[i]).title;
    }
    return out;
}

void print_explore(std::ostream& out, const SemanticNetwork& network, const std::vector<ExploreHit>& hits) {
    if (hits.empty()) {
        out << "no results\n";
        return;
    }
    std::size_t width = 7;
    for (const auto& h : hits) width = std::max(width, network.node(h.concept_id).title.size());
    out << "rank  " << std::string("concept") << std::string(width - 7 + 2, ' ') << "distance  hops  path\n";
    std::size_t rank = 0;
    for (const auto& h : hits) {
        const auto& title = network.node(h.concept_id).title;
        std::string r = std::to_string(++rank);
        out << r << std::string(6 - std::min<std::size_t>(r.size(), 5), ' ') << title
            << std::string(width - title.size() + 2, ' ') << fixed(h.distance) << "  " << h.hops
            << std::string(6 - std::min<std::size_t>(std::to_string(h.hops).size(), 5), ' ')
            << join_titles(network, h.witness_path) << '\n';
    }
}

void print_paths(std::ostream& out, const SemanticNetwork& network, const std::vector<PathResult>& paths) {
    if (paths.empty()) {
        out << "no path within the hop limit\n";
        return;
    }
    std::size_t rank = 0;
    for (const auto& p : paths) {
        out << ++rank << ". aggregate " << fixed(p.aggregate) << ", " << p.hops() << " hops\n   ";
        for (std::size_t i = 0; i < p.nodes.size(); ++i) {
            out << network.node(p.nodes[i]).title;
            if (i < p.strengths.size()) out << " -[" << fixed(p.strengths[i], 4) << "]-> ";
        }
        out << '\n';
    }
}

HttpService* g_service = nullptr;

void handle_signal(int) {
    if (g_service) g_service->stop();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Semantic network builder and retrieval tool", "wikilink"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
        ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

    // build
    auto* build = app.add_subcommand("build", "Build a network from a dump and save it");
    BuildOptions build_opts;
    std::string dump_path, vectors_path, out_dir;
    build->add_option("--dump", dump_path, "MediaWiki XML export")->required();
    build->add_option("--vectors", vectors_path, "Subword vector file");
    build->add_option("--out", out_dir, "Output directory")->required();
    build->add_option("--category-depth", build_opts.policy.category_depth, "Category tree depth limit");
    build->add_option("--max-links", build_opts.policy.max_links_per_article, "Link cap per article");
    build->add_option("--ngram-min", build_opts.ngram_min, "Smallest character n-gram");
    build->add_option("--ngram-max", build_opts.ngram_max, "Largest character n-gram");

    // explore
    auto* explore_cmd = app.add_subcommand("explore", "Rank the concepts nearest to a term");
    QueryOptions explore_opts;
    ExploreQuery explore_query;
    std::string explore_mode = "general";
    std::size_t explore_k = 10;
    explore_cmd->add_option("term", explore_query.term, "Query concept")->required();
    explore_cmd->add_option("--mode", explore_mode, "general|specific");
    explore_cmd->add_option("--k", explore_k, "Number of results");
    explore_cmd->add_option("--min-step", explore_query.min_step, "Minimum witness path length");
    add_network_options(explore_cmd, explore_opts, true);

    // path
    auto* path_cmd = app.add_subcommand("path", "Find ranked paths between two concepts");
    QueryOptions path_opts;
    PathQuery path_query;
    std::string path_mode = "basic";
    path_cmd->add_option("from", path_query.from, "First concept")->required();
    path_cmd->add_option("to", path_query.to, "Second concept")->required();
    path_cmd->add_option("--mode", path_mode, "basic|professional");
    path_cmd->add_option("--k", path_query.k, "Number of paths");
    path_cmd->add_option("--max-hops", path_query.max_hops, "Hop limit");
    path_cmd->add_option("--pool-size", path_query.pool_size, "Candidate paths to re-rank");
    add_network_options(path_cmd, path_opts, true);

    // concept
    auto* concept_cmd = app.add_subcommand("concept", "Show a concept and its strongest neighbors");
    QueryOptions concept_opts;
    std::string concept_title;
    concept_cmd->add_option("title", concept_title, "Concept")->required();
    add_network_options(concept_cmd, concept_opts, true);

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Show network statistics");
    QueryOptions stats_opts;
    add_network_options(stats_cmd, stats_opts, false);

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluation reports");
    eval->require_subcommand(1);
    QueryOptions eval_opts;
    std::string golden_concepts, golden_relations, relation_concepts, ratings_path, ratings_mode = "general";
    auto* eval_concepts = eval->add_subcommand("concepts", "Golden concept coverage");
    eval_concepts->add_option("file", golden_concepts, "category<TAB>concept lines")->required();
    add_network_options(eval_concepts, eval_opts, false);
    auto* eval_relations = eval->add_subcommand("relations", "Golden relationship coverage");
    eval_relations->add_option("file", golden_relations, "concept<TAB>concept lines")->required();
    eval_relations->add_option("--concepts", relation_concepts, "Golden concept file the pairs must belong to");
    add_network_options(eval_relations, eval_opts, false);
    auto* eval_categories = eval->add_subcommand("categories", "Node counts per main category");
    add_network_options(eval_categories, eval_opts, false);
    auto* eval_ratings = eval->add_subcommand("ratings", "Rater reliability and correlation with edge weights");
    eval_ratings->add_option("file", ratings_path, "pair,group,rater1,... CSV")->required();
    eval_ratings->add_option("--mode", ratings_mode, "Mode whose edge values are correlated");
    add_network_options(eval_ratings, eval_opts, true);

    // serve
    auto* serve = app.add_subcommand("serve", "Serve the JSON API");
    QueryOptions serve_opts;
    ServiceConfig service_cfg;
    serve->add_option("--host", service_cfg.host, "Bind address");
    serve->add_option("--port", service_cfg.port, "Port (0: any free port)");
    serve->add_option("--k", service_cfg.default_k, "Default explore k");
    serve->add_option("--min-step", service_cfg.default_min_step, "Default explore min step");
    serve->add_option("--max-hops", service_cfg.default_max_hops, "Default path hop limit");
    add_network_options(serve, serve_opts, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUserError;
    }
    spdlog::set_level(spdlog::level::from_str(log_level));

    if (*build) {
        build_opts.dump = dump_path;
        if (!vectors_path.empty()) build_opts.vectors = vectors_path;
        BuildReport report;
        const auto network = build_network(build_opts, &report);
        save(network, out_dir);
        out << "built " << network.node_count() << " concepts and " << network.edge_count() << " edges from "
            << report.admitted << " articles into " << out_dir << '\n';
        return kExitOk;
    }
    if (*explore_cmd) {
        const auto network = explore_opts.load_network();
        const auto weights = explore_opts.weights();
        explore_query.mode = parse_mode(explore_mode, false);
        explore_query.k = explore_k;
        const auto hits = explore(network, explore_query, weights);
        if (explore_opts.json)
            out << render_json(explore_to_json(network, explore_query, hits, weights));
        else
            print_explore(out, network, hits);
        return kExitOk;
    }
    if (*path_cmd) {
        const auto network = path_opts.load_network();
        const auto weights = path_opts.weights();
        path_query.mode = parse_mode(path_mode, true);
        path_query.pool_size = std::max(path_query.pool_size, path_query.k);
        const auto paths = search_path(network, path_query, weights);
        if (path_opts.json)
            out << render_json(paths_to_json(network, path_query, paths, weights));
        else
            print_paths(out, network, paths);
        return kExitOk;
    }
    if (*concept_cmd) {
        const auto network = concept_opts.load_network();
        const auto weights = concept_opts.weights();
        const auto& node = resolve_term(network, concept_title);
        const auto doc = concept_to_json(network, node.id, weights);
        if (concept_opts.json) {
            out << render_json(doc);
        } else {
            out << node.title << " (" << doc["concept"]["degree"].get<std::size_t>() << " neighbors)\n";
            for (const auto& n : doc["neighbors"])
                out << "  " << fixed(n["strength"].get<double>()) << "  " << n["concept"].get<std::string>() << '\n';
        }
        return kExitOk;
    }
    if (*stats_cmd) {
        const auto network = stats_opts.load_network();
        const auto doc = stats_to_json(network);
        if (stats_opts.json) {
            out << render_json(doc);
        } else {
            out << "concepts " << network.node_count() << "\nedges    " << network.edge_count() << "\nw_min    "
                << network.stats().w_min << "\nw_max    " << network.stats().w_max << '\n';
        }
        return kExitOk;
    }
    if (*eval) {
        const auto network = eval_opts.load_network();
        if (*eval_concepts) {
            const auto cov = concept_coverage(network, read_golden_concepts(std::filesystem::path(golden_concepts)));
            if (eval_opts.json) {
                out << render_json(concept_coverage_to_json(cov));
            } else {
                out << "C_R " << fixed(cov.overall.rate(), 4) << " (" << cov.overall.found << "/" << cov.overall.total
                    << ")\n";
                for (const auto& [cat, r] : cov.per_category)
                    out << "  " << cat << ": " << fixed(r.rate(), 4) << " (" << r.found << "/" << r.total << ")\n";
            }
        } else if (*eval_relations) {
            std::optional<GoldenConceptSet> concepts;
            if (!relation_concepts.empty()) concepts = read_golden_concepts(std::filesystem::path(relation_concepts));
            const auto cov = relationship_coverage(
                network, read_golden_relations(std::filesystem::path(golden_relations), concepts ? &*concepts : nullptr));
            if (eval_opts.json)
                out << render_json(relation_coverage_to_json(cov));
            else
                out << "R " << fixed(cov.rate(), 4) << " (" << cov.retrieved << "/" << cov.total << ")\n";
        } else if (*eval_categories) {
            const auto counts = category_distribution(network);
            if (eval_opts.json) {
                out << render_json(category_distribution_to_json(counts));
            } else {
                for (const auto& [label, n] : counts) out << label << '\t' << n << '\n';
            }
        } else if (*eval_ratings) {
            const auto ratings = read_ratings(std::filesystem::path(ratings_path));
            const auto weights = eval_opts.weights();
            const double alpha = cronbach_alpha(ratings);
            const auto groups =
                rating_correlation(network, ratings, mode_spec(parse_mode(ratings_mode, false), weights), weights.formula);
            if (eval_opts.json) {
                out << render_json(ratings_to_json(alpha, groups));
            } else {
                out << "cronbach alpha " << fixed(alpha, 4) << '\n';
                for (const auto& g : groups)
                    out << "  group " << g.group << ": rho " << fixed(g.rho, 4) << " (n=" << g.n << ", critical "
                        << fixed(g.critical, 3) << ") " << to_string(g.decision) << '\n';
            }
        }
        return kExitOk;
    }
    if (*serve) {
        const auto network = serve_opts.load_network();
        service_cfg.network_dir = serve_opts.directory();
        service_cfg.weights = serve_opts.weights();
        HttpService service(network, service_cfg);
        const int port = service.bind();
        out << "listening on http://" << service_cfg.host << ":" << port << '\n' << std::flush;
        g_service = &service;
        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        service.run();
        g_service = nullptr;
        return kExitOk;
    }
    return kExitUserError;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run(args, out, err);
    } catch (const NotFoundError& e) {
        err << "error: " << e.what();
        if (!e.suggestions().empty()) {
            err << "; did you mean:";
            for (const auto& s : e.suggestions()) err << " '" << s << "'";
        }
        err << '\n';
        return kExitUserError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const EvalInputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const PersistenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const DumpParseError& e) {
        err << "error: malformed dump at byte " << e.offset() << ": " << e.what() << '\n';
        return kExitUserError;
    } catch (const VectorParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const ServiceStartError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
}

} // namespace wikilink
