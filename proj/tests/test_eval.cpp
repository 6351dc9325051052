#include "test_support.hpp"

#include "wikilink/build_pipeline.hpp"
#include "wikilink/eval.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace wikilink;
using namespace wikilink::testing;

namespace {

SemanticNetwork ten_concepts() {
    std::vector<TestEdge> edges;
    for (NodeId i = 0; i + 1 < 10; ++i) edges.push_back({i, i + 1, 1, 0.5});
    return make_network(numbered_titles(10), edges);
}

GoldenConceptSet concepts_from(const std::string& text) {
    std::istringstream in(text);
    return read_golden_concepts(in);
}

GoldenRelationSet relations_from(const std::string& text) {
    std::istringstream in(text);
    return read_golden_relations(in);
}

RatingsMatrix ratings_from(const std::string& text) {
    std::istringstream in(text);
    return read_ratings(in);
}

} // namespace

TEST(ConceptCoverage, AllPresent) {
    std::string text;
    for (const auto& t : numbered_titles(10)) text += "cat\t" + t + "\n";
    const auto cov = concept_coverage(ten_concepts(), concepts_from(text));
    EXPECT_EQ(cov.overall.rate(), 1.0);
}

TEST(ConceptCoverage, SevenOfTenAndPerCategory) {
    const auto golden = concepts_from("a\tn00\na\tn01\na\tn02\na\tmissing1\nb\tn03\nb\tn04\nb\tn05\nb\tn06\n"
                                      "b\tmissing2\nb\tmissing3\n");
    const auto cov = concept_coverage(ten_concepts(), golden);
    EXPECT_EQ(cov.overall.found, 7u);
    EXPECT_DOUBLE_EQ(cov.overall.rate(), 0.7);
    EXPECT_DOUBLE_EQ(cov.per_category.at("a").rate(), 0.75);
    EXPECT_DOUBLE_EQ(cov.per_category.at("b").rate(), 4.0 / 6.0);
    EXPECT_EQ(cov.missing, (std::vector<std::string>{"missing1", "missing2", "missing3"}));
}

TEST(ConceptCoverage, PermutationInvariant) {
    auto a = concepts_from("x\tn00\ny\tnope\nx\tn05\n");
    auto b = concepts_from("x\tn05\nx\tn00\ny\tnope\n");
    const auto net = ten_concepts();
    EXPECT_EQ(concept_coverage(net, a).overall.rate(), concept_coverage(net, b).overall.rate());
}

TEST(GoldenFiles, Errors) {
    EXPECT_THROW(concepts_from(""), EvalInputError);
    EXPECT_THROW(concepts_from("a\tX\nb\tX\n"), EvalInputError);
    EXPECT_THROW(concepts_from("no tab here\n"), EvalInputError);
    EXPECT_THROW(relations_from("A\tB\nB\tA\n"), EvalInputError);
    EXPECT_THROW(relations_from("A\tA\n"), EvalInputError);
    const auto concepts = concepts_from("c\tA\nc\tB\n");
    std::istringstream in("A\tC\n");
    EXPECT_THROW(read_golden_relations(in, &concepts), EvalInputError);
}

TEST(RelationshipCoverage, FixtureThreeOfFour) {
    const auto net = build_network(BuildOptions{fixture("mini-dump.xml"), std::nullopt, {}, 3, 6});
    const auto golden = relations_from("Hair dryer\tVacuum cleaner\nBrain\tartificial intelligence\n"
                                       "Word2vec\tFastText\nBrain\tHair dryer\n");
    const auto cov = relationship_coverage(net, golden);
    EXPECT_EQ(cov.retrieved, 3u);
    EXPECT_DOUBLE_EQ(cov.rate(), 0.75);
}

TEST(RelationshipCoverage, DisjointIsZero) {
    const auto cov = relationship_coverage(ten_concepts(), relations_from("n00\tn05\nn01\tn07\n"));
    EXPECT_EQ(cov.rate(), 0.0);
}

TEST(RelationshipCoverage, MatchesNestedLoopOracle) {
    std::mt19937 rng(41);
    const auto net = random_network(rng, 12, 0.3, 5);
    GoldenRelationSet golden;
    for (NodeId a = 0; a < 12; ++a) {
        for (NodeId b = a + 1; b < 12; b += 2) golden.pairs.emplace_back(net.node(a).title, net.node(b).title);
    }
    std::size_t expected = 0;
    for (const auto& [x, y] : golden.pairs) {
        for (const auto& e : net.edges()) {
            const auto& u = net.node(e.u).title;
            const auto& v = net.node(e.v).title;
            if ((u == x && v == y) || (u == y && v == x)) ++expected;
        }
    }
    EXPECT_EQ(relationship_coverage(net, golden).retrieved, expected);
}

TEST(RelationshipCoverage, RatesFromCounts) {
    EXPECT_EQ((RelationCoverage{721, 1000}).rate(), 0.721);
    EXPECT_EQ((RelationCoverage{170, 1000}).rate(), 0.170);
}

TEST(CategoryDistribution, FixtureCounts) {
    const auto net = build_network(BuildOptions{fixture("mini-dump.xml"), std::nullopt, {}, 3, 6});
    const auto counts = category_distribution(net);
    EXPECT_EQ(counts.size(), 14u);
    // Articles: FastText, Word2vec, Artificial intelligence, Computer, 3D printing, Hair dryer, Vacuum cleaner
    // under technology; Hair dryer under health; Brain under natural.
    EXPECT_EQ(counts.at("technology"), 7u);
    EXPECT_EQ(counts.at("health"), 1u);
    EXPECT_EQ(counts.at("natural"), 1u);
    EXPECT_EQ(counts.at("people"), 0u);
    EXPECT_EQ(counts.at("uncategorized"), net.node_count() - 8);
}

TEST(CategoryDistribution, ThreeNodesUnderOneCategory) {
    std::vector<ConceptNode> nodes{{0, "a", {"Leaf"}}, {1, "b", {"Leaf"}}, {2, "c", {"Health and fitness"}}};
    CategoryGraph g;
    g.add_link("Leaf", "Health and fitness");
    SemanticNetwork net(nodes, {{0, 1, 1, 0.0}, {1, 2, 1, 0.0}}, {}, build_category_index(g, 3));
    const auto counts = category_distribution(net);
    EXPECT_EQ(counts.at("health"), 3u);
    EXPECT_EQ(counts.at("uncategorized"), 0u);
}

TEST(Spearman, Examples) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    EXPECT_NEAR(spearman_rho(x, x), 1.0, 1e-12);
    EXPECT_NEAR(spearman_rho(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0, 1e-12);
    EXPECT_NEAR(spearman_rho(x, std::vector<double>{2, 1, 4, 3, 5}), 0.8, 1e-12);
}

TEST(Spearman, InvariantUnderMonotoneTransforms) {
    const std::vector<double> x{0.3, 1.7, 0.9, 4.2, 2.2, 3.1};
    const std::vector<double> y{1, 3, 2, 2, 5, 4};
    std::vector<double> tx;
    for (double v : x) tx.push_back(std::exp(v) + 3.0);
    EXPECT_NEAR(spearman_rho(x, y), spearman_rho(tx, y), 1e-12);
}

TEST(Spearman, TiesUseAverageRanks) {
    // Ranks of y: [1.5, 1.5, 3]; Pearson of ([1,2,3],[1.5,1.5,3]) = sqrt(3)/2.
    EXPECT_NEAR(spearman_rho(std::vector<double>{1, 2, 3}, std::vector<double>{7, 7, 9}), std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(Spearman, Errors) {
    EXPECT_THROW(spearman_rho(std::vector<double>{1, 2}, std::vector<double>{1, 2}), std::invalid_argument);
    EXPECT_THROW(spearman_rho(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), std::invalid_argument);
    EXPECT_THROW(spearman_rho(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}), std::domain_error);
}

TEST(Cronbach, IdenticalRatersGiveOne) {
    const auto m = ratings_from("pair,group,r1,r2,r3\na|b,1,1,1,1\nc|d,1,3,3,3\ne|f,1,5,5,5\n");
    EXPECT_NEAR(cronbach_alpha(m), 1.0, 1e-12);
}

TEST(Cronbach, HandComputedThreeByTwo) {
    // Columns (2,3,4) and (3,3,5): variances 1 and 4/3; totals (5,6,9) variance 13/3.
    const auto m = ratings_from("pair,group,r1,r2\na|b,g,2,3\nc|d,g,3,3\ne|f,g,4,5\n");
    EXPECT_NEAR(cronbach_alpha(m), 2.0 * (1.0 - (1.0 + 4.0 / 3.0) / (13.0 / 3.0)), 1e-12);
}

TEST(Cronbach, Errors) {
    EXPECT_THROW(cronbach_alpha(ratings_from("pair,group,r1\na|b,g,2\nc|d,g,3\n")), std::invalid_argument);
    EXPECT_THROW(cronbach_alpha(ratings_from("pair,group,r1,r2\na|b,g,2,2\nc|d,g,2,2\n")), std::domain_error);
    EXPECT_THROW(ratings_from("pair,group,r1\na|b,g,6\n"), EvalInputError);
    EXPECT_THROW(ratings_from("pair,group,r1\na|b,g,2\na|b,g,3\n"), EvalInputError);
    EXPECT_THROW(ratings_from("pair,group,r1\na|b,g\n"), EvalInputError);
    EXPECT_THROW(ratings_from("term,group,r1\n"), EvalInputError);
}

TEST(Ratings, QuotedFields) {
    const auto m = ratings_from("pair,group,r1\n\"Rock, paper|Scissors\",1,4\n");
    EXPECT_EQ(m.pairs[0], "Rock, paper|Scissors");
}

TEST(Significance, Decisions) {
    EXPECT_EQ(significance_decision(0.69, 10, 0.57), Decision::reject);
    EXPECT_EQ(significance_decision(0.89, 10, 0.57), Decision::reject);
    EXPECT_EQ(significance_decision(0.64, 10, 0.57), Decision::reject);
    EXPECT_EQ(significance_decision(0.57, 10, 0.57), Decision::fail_to_reject);
    EXPECT_THROW(significance_decision(0.9, 2, 0.5), std::invalid_argument);
}

namespace {

/// Exact one-tailed critical value: the smallest attainable rho whose
/// permutation upper-tail probability is at most 0.05, by counting the
/// distribution of sum d^2 over all n! rankings.
double exact_critical_value(std::size_t n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const std::size_t max_d2 = n * (n * n - 1) / 3;
    std::vector<double> count(max_d2 + 1, 0.0);
    double total = 0.0;
    do {
        std::size_t d2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const long d = static_cast<long>(i) - perm[i];
            d2 += static_cast<std::size_t>(d * d);
        }
        count[d2] += 1.0;
        total += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    // Upper tail in rho means small sum d^2.
    double tail = 0.0;
    std::size_t threshold = 0;
    for (std::size_t d2 = 0; d2 <= max_d2; ++d2) {
        if ((tail + count[d2]) / total > 0.05) break;
        tail += count[d2];
        if (count[d2] > 0) threshold = d2;
    }
    const double nn = static_cast<double>(n);
    return 1.0 - 6.0 * static_cast<double>(threshold) / (nn * (nn * nn - 1.0));
}

} // namespace

TEST(Significance, TableMatchesExactDistribution) {
    for (std::size_t n = 4; n <= 9; ++n)
        EXPECT_NEAR(one_tailed_critical_value(n), exact_critical_value(n), 5e-4) << "n = " << n;
    EXPECT_THROW(one_tailed_critical_value(3), std::out_of_range);
    EXPECT_THROW(one_tailed_critical_value(15), std::out_of_range);
}

TEST(Significance, RatingCorrelationPerGroup) {
    const auto net = make_network(numbered_titles(6), {{0, 1, 1, 0.9}, {0, 2, 1, 0.7}, {0, 3, 1, 0.5},
                                                       {0, 4, 1, 0.3}, {0, 5, 1, 0.1}});
    WeightConfig c;
    c.alpha_general = 1.0;
    const auto m = ratings_from("pair,group,r1,r2\nn00|n01,g,5,5\nn00|n02,g,4,5\nn00|n03,g,3,3\nn00|n04,g,2,2\n"
                                "n00|n05,g,1,1\n");
    const auto groups = rating_correlation(net, m, mode_spec(Mode::explore_general, c));
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_NEAR(groups[0].rho, 1.0, 1e-12);
    EXPECT_EQ(groups[0].n, 5u);
    EXPECT_EQ(groups[0].critical, 0.9);
    EXPECT_EQ(groups[0].decision, Decision::reject);
}
