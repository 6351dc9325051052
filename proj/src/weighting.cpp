#include "wikilink/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace wikilink {

namespace {

void require_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

void require_nonempty(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean of an empty strength list");
}

} // namespace

void WeightConfig::validate() const {
    require_unit(alpha_general, "alpha_general");
    require_unit(alpha_specific, "alpha_specific");
}

ModeSpec mode_spec(Mode mode, const WeightConfig& config) {
    switch (mode) {
    case Mode::explore_general:
        return {mode, config.alpha_general, Normalization::global, Aggregation::none};
    case Mode::explore_specific:
        return {mode, config.alpha_specific, Normalization::local, Aggregation::none};
    case Mode::path_basic:
        return {mode, config.alpha_general, Normalization::global, Aggregation::geometric};
    case Mode::path_professional:
        return {mode, config.alpha_specific, Normalization::local, Aggregation::harmonic};
    }
    throw std::invalid_argument("unknown mode");
}

bool is_explore_mode(Mode mode) noexcept {
    return mode == Mode::explore_general || mode == Mode::explore_specific;
}

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::explore_general:
        return "general";
    case Mode::explore_specific:
        return "specific";
    case Mode::path_basic:
        return "basic";
    case Mode::path_professional:
        return "professional";
    }
    return "unknown";
}

std::string_view to_string(WeightFormula formula) {
    return formula == WeightFormula::literal ? "literal" : "strength";
}

Mode parse_mode(std::string_view text, bool path_query) {
    if (!path_query) {
        if (text == "general" || text == "explore_general") return Mode::explore_general;
        if (text == "specific" || text == "explore_specific") return Mode::explore_specific;
        throw std::invalid_argument("explore mode must be 'general' or 'specific', got '" + std::string(text) + "'");
    }
    if (text == "basic" || text == "path_basic") return Mode::path_basic;
    if (text == "professional" || text == "path_professional") return Mode::path_professional;
    throw std::invalid_argument("path mode must be 'basic' or 'professional', got '" + std::string(text) + "'");
}

WeightFormula parse_weight_formula(std::string_view text) {
    if (text == "strength") return WeightFormula::strength;
    if (text == "literal") return WeightFormula::literal;
    throw std::invalid_argument("weight formula must be 'strength' or 'literal', got '" + std::string(text) + "'");
}

double global_normalize(std::uint64_t raw, std::uint64_t w_min, std::uint64_t w_max) {
    if (w_min > w_max || raw < w_min || raw > w_max)
        throw std::invalid_argument("raw weight " + std::to_string(raw) + " outside [" + std::to_string(w_min) +
                                    ", " + std::to_string(w_max) + "]");
    if (w_max == w_min) return 1.0;
    return static_cast<double>(raw - w_min) / static_cast<double>(w_max - w_min);
}

double local_normalize(std::uint64_t raw, double strength_sum) {
    if (!(strength_sum > 0.0)) throw std::invalid_argument("strength sum must be positive");
    if (raw == 0 || static_cast<double>(raw) > strength_sum)
        throw std::invalid_argument("raw weight must satisfy 0 < w <= S");
    return static_cast<double>(raw) / strength_sum;
}

EdgeStrength combined_strength(double semantic, double normalized, const ModeSpec& spec) {
    require_unit(semantic, "semantic weight");
    require_unit(normalized, "normalized statistical weight");
    const double a = spec.semantic_coefficient;
    const double value = std::clamp(a * semantic + (1.0 - a) * normalized, 0.0, 1.0);
    return {value, semantic, normalized};
}

double literal_weight(double semantic, double normalized, const ModeSpec& spec) {
    require_unit(semantic, "semantic weight");
    require_unit(normalized, "normalized statistical weight");
    const double a = spec.semantic_coefficient;
    return std::clamp(a * (1.0 - semantic) + (1.0 - a) * normalized, 0.0, 1.0);
}

double edge_cost(const EdgeStrength& strength) {
    return 1.0 - strength.value;
}

double geometric_mean(std::span<const double> strengths) {
    require_nonempty(strengths);
    // Sorted summation keeps the result independent of edge order.
    std::vector<double> sorted(strengths.begin(), strengths.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() <= 0.0) return 0.0;
    double log_sum = 0.0;
    for (double s : sorted) log_sum += std::log(s);
    return std::clamp(std::exp(log_sum / static_cast<double>(sorted.size())), sorted.front(), sorted.back());
}

double harmonic_mean(std::span<const double> strengths) {
    require_nonempty(strengths);
    std::vector<double> sorted(strengths.begin(), strengths.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() <= 0.0) return 0.0;
    double inverse_sum = 0.0;
    for (double s : sorted) inverse_sum += 1.0 / s;
    return std::clamp(static_cast<double>(sorted.size()) / inverse_sum, sorted.front(), sorted.back());
}

double aggregate(std::span<const double> strengths, Aggregation how) {
    switch (how) {
    case Aggregation::geometric:
        return geometric_mean(strengths);
    case Aggregation::harmonic:
        return harmonic_mean(strengths);
    case Aggregation::none:
        break;
    }
    throw std::invalid_argument("mode has no path aggregation");
}

double normalized_statistical(const EdgeInputs& edge, Normalization normalization) {
    return normalization == Normalization::global ? global_normalize(edge.raw, edge.w_min, edge.w_max)
                                                  : local_normalize(edge.raw, edge.exit_strength_sum);
}

double edge_value(const EdgeInputs& edge, const ModeSpec& spec, WeightFormula formula) {
    const double normalized = normalized_statistical(edge, spec.normalization);
    return formula == WeightFormula::literal ? literal_weight(edge.semantic, normalized, spec)
                                             : combined_strength(edge.semantic, normalized, spec).value;
}

double traversal_cost(const EdgeInputs& edge, const ModeSpec& spec, WeightFormula formula) {
    const double normalized = normalized_statistical(edge, spec.normalization);
    if (formula == WeightFormula::literal) return literal_weight(edge.semantic, normalized, spec);
    return edge_cost(combined_strength(edge.semantic, normalized, spec));
}

} // namespace wikilink
