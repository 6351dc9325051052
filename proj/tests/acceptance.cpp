#include "test_support.hpp"

#include "wikilink/build_pipeline.hpp"
#include "wikilink/eval.hpp"
#include "wikilink/weighting.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace wikilink;
using namespace wikilink::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f s", s);
    return buf;
}

SemanticNetwork fixture_network() {
    return build_network(BuildOptions{fixture("mini-dump.xml"), fixture("vectors.txt"), {}, 3, 6});
}

Outcome fixture_build() {
    const auto start = Clock::now();
    const auto net = build_network(BuildOptions{fixture("mini-dump.xml"), std::nullopt, {}, 3, 6});
    const double elapsed = seconds_since(start);
    const bool same = raw_weight_table(net) == slurp(fixture("expected_raw_weights.tsv"));
    return {same && elapsed < 5.0,
            std::to_string(net.edge_count()) + " edges, oracle " + (same ? "equal" : "differs") + ", " +
                fmt_seconds(elapsed)};
}

Outcome normalization() {
    bool ok = global_normalize(5, 1, 9) == 0.5 && global_normalize(1, 1, 9) == 0.0 &&
              global_normalize(9, 1, 9) == 1.0 && global_normalize(4, 4, 4) == 1.0 &&
              local_normalize(3, 10.0) == 0.3 && local_normalize(7, 7.0) == 1.0 && local_normalize(9, 12.0) == 0.75;
    const auto net = fixture_network();
    double worst = 0.0;
    for (const auto& node : net.nodes()) {
        double sum = 0.0;
        for (const auto& adj : net.adjacency(node.id)) {
            sum += normalized_statistical(net.edge_inputs(node.id, net.edges()[adj.edge]), Normalization::local);
        }
        if (!net.adjacency(node.id).empty()) worst = std::max(worst, std::abs(sum - 1.0));
    }
    ok = ok && worst <= 1e-9;
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |sum local - 1| = %.2e over %zu nodes", worst, net.node_count());
    return {ok, buf};
}

Outcome means() {
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
    bool ok = near(geometric_mean(std::vector<double>{0.25, 1.0}), 0.5) &&
              near(geometric_mean(std::vector<double>{0.5, 0.5, 0.5}), 0.5) &&
              near(harmonic_mean(std::vector<double>{0.5, 1.0}), 2.0 / 3.0) &&
              near(harmonic_mean(std::vector<double>{0.7, 0.7}), 0.7);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> value(1e-6, 1.0);
    std::uniform_int_distribution<int> length(1, 12);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> s(static_cast<std::size_t>(length(rng)));
        for (auto& x : s) x = value(rng);
        const double gm = geometric_mean(s);
        const double hm = harmonic_mean(s);
        if (!(hm <= gm && gm <= *std::max_element(s.begin(), s.end()))) ++violations;
    }
    ok = ok && violations == 0;
    return {ok, "1000 random lists, " + std::to_string(violations) + " ordering violations"};
}

Outcome explore_oracle() {
    const auto start = Clock::now();
    std::mt19937 rng(20261016);
    int graphs = 0, mismatches = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(trial) % 9;
        const auto net = random_network(rng, n, 0.3, 9, trial % 2 == 1);
        ++graphs;
        for (Mode mode : {Mode::explore_general, Mode::explore_specific}) {
            for (WeightFormula f : {WeightFormula::strength, WeightFormula::literal}) {
                WeightConfig cfg;
                cfg.formula = f;
                for (NodeId source = 0; source < n; source += 3) {
                    const auto got = explore(net, {net.node(source).title, mode, 1, std::nullopt, std::nullopt}, cfg);
                    if (got != brute_force_explore(net, source, mode_spec(mode, cfg), f)) ++mismatches;
                }
            }
        }
    }
    const double elapsed = seconds_since(start);
    return {mismatches == 0 && elapsed < 10.0, std::to_string(graphs) + " graphs of 4..12 nodes, " +
                                                   std::to_string(mismatches) + " mismatches, " + fmt_seconds(elapsed)};
}

Outcome search_path_oracle() {
    std::mt19937 rng(1016);
    int queries = 0, mismatches = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(trial) % 9;
        const auto net = random_network(rng, n, 0.3, 9, trial % 3 == 0);
        const auto titles = numbered_titles(n);
        for (Mode mode : {Mode::path_basic, Mode::path_professional}) {
            for (WeightFormula f : {WeightFormula::strength, WeightFormula::literal}) {
                WeightConfig cfg;
                cfg.formula = f;
                const auto all = brute_force_paths(net, 0, static_cast<NodeId>(n - 1), 6, mode_spec(mode, cfg), f);
                PathQuery q{titles.front(), titles.back(), mode, 5, 6, std::max<std::size_t>(all.size(), 5)};
                auto expected = all;
                if (expected.size() > 5) expected.resize(5);
                ++queries;
                if (search_path(net, q, cfg) != expected) ++mismatches;
            }
        }
    }
    return {mismatches == 0, std::to_string(queries) + " queries with max_hops=6, " + std::to_string(mismatches) +
                                 " mismatches"};
}

Outcome evaluation_arithmetic() {
    // 1000 golden relations between disjoint pairs, 721 of which are edges.
    std::vector<std::string> titles;
    for (int i = 0; i < 2000; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "c%04d", i);
        titles.emplace_back(buf);
    }
    auto coverage = [&](int present) {
        std::vector<TestEdge> edges;
        std::ostringstream golden;
        for (int i = 0; i < 1000; ++i) {
            const auto a = static_cast<NodeId>(2 * i), b = static_cast<NodeId>(2 * i + 1);
            if (i < present) edges.push_back({a, b, 1, 0.5});
            golden << titles[a] << '\t' << titles[b] << '\n';
        }
        std::istringstream in(golden.str());
        return relationship_coverage(make_network(titles, edges), read_golden_relations(in));
    };
    const auto high = coverage(721);
    const auto low = coverage(170);
    const double rho = spearman_rho(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{2, 1, 4, 3, 5});
    bool ok = high.retrieved == 721 && high.rate() == 0.721 && low.retrieved == 170 && low.rate() == 0.170 &&
              std::abs(rho - 0.8) <= 1e-12;
    for (double r : {0.69, 0.89, 0.64}) ok = ok && significance_decision(r, 10, 0.57) == Decision::reject;
    char buf[128];
    std::snprintf(buf, sizeof buf, "coverage %.3f and %.3f, rho %.12f, 3 of 3 rejected at 0.57", high.rate(),
                  low.rate(), rho);
    return {ok, buf};
}

Outcome degree_balancing() {
    // Query q; hub H with a heavy but semantically loose link to q and heavy
    // links to h1..h6; leaves l1..l6 with moderate, semantically close links
    // to q; one faint l1-l2 link sets the global minimum.
    std::vector<std::string> titles{"H"};
    for (int i = 1; i <= 6; ++i) titles.push_back("h" + std::to_string(i));
    for (int i = 1; i <= 6; ++i) titles.push_back("l" + std::to_string(i));
    titles.push_back("q");
    const NodeId hub = 0, q = 13;
    std::vector<TestEdge> edges{{hub, q, 50, 0.3}};
    for (NodeId i = 1; i <= 6; ++i) edges.push_back({hub, i, 40, 0.1});
    for (NodeId i = 7; i <= 12; ++i) edges.push_back({i, q, 20, 0.95});
    edges.push_back({7, 8, 1, 0.0});
    const auto net = make_network(titles, edges);

    auto average_degree = [&](double alpha) {
        WeightConfig cfg;
        cfg.alpha_general = alpha;
        std::vector<NodeId> ids;
        for (const auto& hit : explore(net, {"q", Mode::explore_general, 1, 5, std::nullopt}, cfg))
            ids.push_back(hit.concept_id);
        return average_node_degree(net, ids, std::nullopt);
    };
    const double statistical = average_degree(0.0);
    const double combined = average_degree(WeightConfig{}.alpha_general);
    char buf[96];
    std::snprintf(buf, sizeof buf, "average raw degree: combined %.1f, statistical %.1f", combined, statistical);
    return {combined <= statistical, buf};
}

Outcome persistence() {
    const auto net = fixture_network();
    TempDir a("accept-a"), b("accept-b");
    save(net, a.path());
    const auto loaded = load(a.path());
    save(loaded, b.path());
    bool bytes = true;
    for (const char* f : {"nodes.tsv", "edges.tsv", "meta.json"}) bytes = bytes && slurp(a.path() / f) == slurp(b.path() / f);
    const bool exact = loaded == net && loaded.category_index() == net.category_index();
    return {exact && bytes, std::string("round trip ") + (exact ? "exact" : "differs") + ", saves " +
                                (bytes ? "byte-identical" : "differ")};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"fixture build matches pair-count oracle", fixture_build},
        {"normalization suite", normalization},
        {"mean suite", means},
        {"explore oracle equivalence", explore_oracle},
        {"search path oracle equivalence", search_path_oracle},
        {"evaluation arithmetic", evaluation_arithmetic},
        {"degree balancing", degree_balancing},
        {"persistence round trip and determinism", persistence},
    };
    spdlog::set_level(spdlog::level::err);
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failures;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << name << " (" << outcome.detail << ")\n";
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " primary criteria passed\n";
    return failures == 0 ? 0 : 1;
}
