#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace wikilink {

enum class Mode { explore_general, explore_specific, path_basic, path_professional };
enum class Normalization { global, local };
enum class Aggregation { none, geometric, harmonic };

/// `strength`: s = a*w_semantic + (1-a)*w_norm, traversal cost 1 - s.
/// `literal`:  v = a*(1-w_semantic) + (1-a)*w_norm, used as the cost itself.
enum class WeightFormula { strength, literal };

struct WeightConfig {
    double alpha_general = 0.3;  // explore_general, path_basic
    double alpha_specific = 0.2; // explore_specific, path_professional
    WeightFormula formula = WeightFormula::strength;

    void validate() const;
};

struct ModeSpec {
    Mode mode = Mode::explore_general;
    double semantic_coefficient = 0.3;
    Normalization normalization = Normalization::global;
    Aggregation aggregation = Aggregation::none;

    double statistical_coefficient() const noexcept { return 1.0 - semantic_coefficient; }
};

ModeSpec mode_spec(Mode mode, const WeightConfig& config = {});

bool is_explore_mode(Mode mode) noexcept;
std::string_view to_string(Mode mode);
std::string_view to_string(WeightFormula formula);
Mode parse_mode(std::string_view text, bool path_query);
WeightFormula parse_weight_formula(std::string_view text);

/// (w - w_min) / (w_max - w_min); 1.0 when every edge has the same weight.
double global_normalize(std::uint64_t raw, std::uint64_t w_min, std::uint64_t w_max);

/// raw / S_i, where S_i is the strength sum of the node the edge is read from.
double local_normalize(std::uint64_t raw, double strength_sum);

struct EdgeStrength {
    double value = 0.0;
    double semantic = 0.0;
    double statistical = 0.0; // normalized statistical weight
};

EdgeStrength combined_strength(double semantic, double normalized, const ModeSpec& spec);

/// The fusion exactly as printed in the source formulas, semantic term inverted.
double literal_weight(double semantic, double normalized, const ModeSpec& spec);

double edge_cost(const EdgeStrength& strength);

/// Log-space geometric mean; 0 when any element is 0. Throws on empty input.
double geometric_mean(std::span<const double> strengths);

/// n / sum(1/s); 0 when any element is 0. Throws on empty input.
double harmonic_mean(std::span<const double> strengths);

double aggregate(std::span<const double> strengths, Aggregation how);

/// Everything needed to weigh one directed traversal of an edge.
struct EdgeInputs {
    std::uint64_t raw = 1;
    double semantic = 0.0;
    std::uint64_t w_min = 1;
    std::uint64_t w_max = 1;
    double exit_strength_sum = 1.0; // S of the node the edge is left from
};

double normalized_statistical(const EdgeInputs& edge, Normalization normalization);

/// Per-edge value under the configured formula: the combined strength, or the
/// literal fused value.
double edge_value(const EdgeInputs& edge, const ModeSpec& spec, WeightFormula formula);

/// Shortest-path cost under the configured formula.
double traversal_cost(const EdgeInputs& edge, const ModeSpec& spec, WeightFormula formula);

} // namespace wikilink
