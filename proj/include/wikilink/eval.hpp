#pragma once

#include "wikilink/graph_store.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wikilink {

class EvalInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GoldenConcept {
    std::string category;
    std::string concept_title;
};

struct GoldenConceptSet {
    std::vector<GoldenConcept> entries;
};

struct GoldenRelationSet {
    std::vector<std::pair<std::string, std::string>> pairs;
};

struct RatingsMatrix {
    std::vector<std::string> pairs;  // row labels
    std::vector<std::string> groups; // per row
    std::vector<std::string> raters; // column labels
    std::vector<std::vector<int>> cells; // rows x raters, each 1..5
};

/// "category<TAB>concept" lines; duplicate concepts are an error.
GoldenConceptSet read_golden_concepts(std::istream& in);
GoldenConceptSet read_golden_concepts(const std::filesystem::path& path);

/// "concept_a<TAB>concept_b" lines; duplicate unordered pairs are an error.
/// When `concepts` is given, both members must belong to it.
GoldenRelationSet read_golden_relations(std::istream& in, const GoldenConceptSet* concepts = nullptr);
GoldenRelationSet read_golden_relations(const std::filesystem::path& path, const GoldenConceptSet* concepts = nullptr);

/// Header "pair,group,rater1,...", integer cells on a 1..5 scale.
RatingsMatrix read_ratings(std::istream& in);
RatingsMatrix read_ratings(const std::filesystem::path& path);

struct CoverageRate {
    std::size_t found = 0;
    std::size_t total = 0;
    double rate() const noexcept { return total == 0 ? 0.0 : static_cast<double>(found) / static_cast<double>(total); }
};

struct ConceptCoverage {
    CoverageRate overall;
    std::map<std::string, CoverageRate> per_category;
    std::vector<std::string> missing;
};

ConceptCoverage concept_coverage(const SemanticNetwork& network, const GoldenConceptSet& golden);

struct RelationCoverage {
    std::size_t retrieved = 0; // |V ∩ H|
    std::size_t total = 0;     // |H|
    double rate() const noexcept { return total == 0 ? 0.0 : static_cast<double>(retrieved) / static_cast<double>(total); }
};

RelationCoverage relationship_coverage(const SemanticNetwork& network, const GoldenRelationSet& golden);

/// Node count per main category label, plus "uncategorized". A node counts
/// once for every main category one of its admitted categories descends from.
std::map<std::string, std::size_t> category_distribution(const SemanticNetwork& network);

/// Pearson correlation of average ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// K/(K-1) * (1 - sum of rater variances / variance of row totals), sample
/// variances.
double cronbach_alpha(const RatingsMatrix& ratings);

enum class Decision { reject, fail_to_reject };

std::string_view to_string(Decision decision);

/// Rejects the no-correlation hypothesis iff rho > critical.
Decision significance_decision(double rho, std::size_t n, double critical);

/// One-tailed 0.05 critical values of Spearman's rho, for n in 4..14.
double one_tailed_critical_value(std::size_t n);

struct GroupAgreement {
    std::string group;
    std::size_t n = 0;
    double rho = 0.0;
    double critical = 0.0;
    Decision decision = Decision::fail_to_reject;
};

/// Per rating group: rho between the mean human rating of each pair and the
/// pair's edge value under `spec` (0 when the pair is not connected),
/// compared against the tabulated critical value for the group size.
std::vector<GroupAgreement> rating_correlation(const SemanticNetwork& network, const RatingsMatrix& ratings,
                                               const ModeSpec& spec, WeightFormula formula = WeightFormula::strength);

} // namespace wikilink
