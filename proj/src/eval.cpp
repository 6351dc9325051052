#include "wikilink/eval.hpp"

#include "wikilink/title.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <unordered_set>

namespace wikilink {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EvalInputError("cannot open " + path.string());
    return in;
}

std::string line_error(std::size_t line, const std::string& message) {
    return "line " + std::to_string(line) + ": " + message;
}

/// Reads non-empty lines, dropping a trailing CR.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        fn(line, no);
    }
}

std::pair<std::string, std::string> split_tab_pair(const std::string& line, std::size_t no) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
        throw EvalInputError(line_error(no, "expected two tab-separated fields"));
    std::string a = normalize_title(line.substr(0, tab));
    std::string b = normalize_title(line.substr(tab + 1));
    if (a.empty() || b.empty()) throw EvalInputError(line_error(no, "empty field"));
    return {std::move(a), std::move(b)};
}

std::pair<std::string, std::string> unordered_key(std::string_view a, std::string_view b) {
    auto ka = folded_title_key(a);
    auto kb = folded_title_key(b);
    if (kb < ka) std::swap(ka, kb);
    return {std::move(ka), std::move(kb)};
}

/// Comma-separated fields; double quotes group a field and "" escapes a quote.
std::vector<std::string> split_csv(const std::string& line, std::size_t no) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw EvalInputError(line_error(no, "unterminated quote"));
    return fields;
}

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

double sample_variance(std::span<const double> values) {
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / (n - 1.0);
}

} // namespace

GoldenConceptSet read_golden_concepts(std::istream& in) {
    GoldenConceptSet set;
    std::unordered_set<std::string> seen;
    for_each_line(in, [&](const std::string& line, std::size_t no) {
        auto [category, title] = split_tab_pair(line, no);
        if (!seen.insert(folded_title_key(title)).second)
            throw EvalInputError(line_error(no, "duplicate golden concept '" + title + "'"));
        set.entries.push_back({std::move(category), std::move(title)});
    });
    if (set.entries.empty()) throw EvalInputError("golden concept set is empty");
    return set;
}

GoldenConceptSet read_golden_concepts(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_golden_concepts(in);
}

GoldenRelationSet read_golden_relations(std::istream& in, const GoldenConceptSet* concepts) {
    std::unordered_set<std::string> known;
    if (concepts) {
        for (const auto& e : concepts->entries) known.insert(folded_title_key(e.concept_title));
    }
    GoldenRelationSet set;
    std::set<std::pair<std::string, std::string>> seen;
    for_each_line(in, [&](const std::string& line, std::size_t no) {
        auto [a, b] = split_tab_pair(line, no);
        if (folded_title_key(a) == folded_title_key(b))
            throw EvalInputError(line_error(no, "a relation needs two distinct concepts"));
        if (!seen.insert(unordered_key(a, b)).second)
            throw EvalInputError(line_error(no, "duplicate golden relation '" + a + "' / '" + b + "'"));
        if (concepts && (!known.contains(folded_title_key(a)) || !known.contains(folded_title_key(b))))
            throw EvalInputError(line_error(no, "relation member is not a golden concept"));
        set.pairs.emplace_back(std::move(a), std::move(b));
    });
    if (set.pairs.empty()) throw EvalInputError("golden relation set is empty");
    return set;
}

GoldenRelationSet read_golden_relations(const std::filesystem::path& path, const GoldenConceptSet* concepts) {
    auto in = open_input(path);
    return read_golden_relations(in, concepts);
}

RatingsMatrix read_ratings(std::istream& in) {
    RatingsMatrix m;
    bool header = true;
    std::unordered_set<std::string> seen;
    for_each_line(in, [&](const std::string& line, std::size_t no) {
        auto fields = split_csv(line, no);
        if (header) {
            if (fields.size() < 3 || trim(fields[0]) != "pair" || trim(fields[1]) != "group")
                throw EvalInputError(line_error(no, "header must be pair,group,rater1,..."));
            for (std::size_t i = 2; i < fields.size(); ++i) m.raters.emplace_back(trim(fields[i]));
            header = false;
            return;
        }
        if (fields.size() != m.raters.size() + 2)
            throw EvalInputError(line_error(no, "expected " + std::to_string(m.raters.size() + 2) + " fields"));
        std::string pair(trim(fields[0]));
        if (pair.find('|') == std::string::npos) throw EvalInputError(line_error(no, "pair must be written a|b"));
        if (!seen.insert(pair).second) throw EvalInputError(line_error(no, "duplicate pair '" + pair + "'"));
        std::vector<int> row;
        for (std::size_t i = 2; i < fields.size(); ++i) {
            const auto cell = trim(fields[i]);
            int value = 0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc{} || ptr != cell.data() + cell.size() || value < 1 || value > 5)
                throw EvalInputError(line_error(no, "rating must be an integer from 1 to 5"));
            row.push_back(value);
        }
        m.pairs.push_back(std::move(pair));
        m.groups.emplace_back(trim(fields[1]));
        m.cells.push_back(std::move(row));
    });
    if (header) throw EvalInputError("ratings file is empty");
    return m;
}

RatingsMatrix read_ratings(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_ratings(in);
}

ConceptCoverage concept_coverage(const SemanticNetwork& network, const GoldenConceptSet& golden) {
    if (golden.entries.empty()) throw std::invalid_argument("golden concept set is empty");
    ConceptCoverage out;
    for (const auto& e : golden.entries) {
        const bool found = network.lookup(e.concept_title) != nullptr;
        auto& cat = out.per_category[e.category];
        ++cat.total;
        ++out.overall.total;
        if (found) {
            ++cat.found;
            ++out.overall.found;
        } else {
            out.missing.push_back(e.concept_title);
        }
    }
    return out;
}

RelationCoverage relationship_coverage(const SemanticNetwork& network, const GoldenRelationSet& golden) {
    if (golden.pairs.empty()) throw std::invalid_argument("golden relation set is empty");
    RelationCoverage out;
    out.total = golden.pairs.size();
    for (const auto& [a, b] : golden.pairs) {
        const auto* na = network.lookup(a);
        const auto* nb = network.lookup(b);
        if (na && nb && na->id != nb->id && network.find_edge(na->id, nb->id)) ++out.retrieved;
    }
    return out;
}

std::map<std::string, std::size_t> category_distribution(const SemanticNetwork& network) {
    if (network.node_count() == 0) throw std::invalid_argument("network is empty");
    if (!network.category_index()) throw std::invalid_argument("network has no category index");
    const auto& index = *network.category_index();
    std::map<std::string, std::size_t> counts;
    for (const auto& mc : kMainCategories) counts[std::string(mc.label)] = 0;
    counts["uncategorized"] = 0;
    for (const auto& node : network.nodes()) {
        std::uint16_t roots = 0;
        for (const auto& c : node.categories) {
            if (const auto* entry = index.find(c)) roots = static_cast<std::uint16_t>(roots | entry->roots);
        }
        if (roots == 0) {
            ++counts["uncategorized"];
            continue;
        }
        for (std::size_t i = 0; i < kMainCategories.size(); ++i) {
            if (roots & (1u << i)) ++counts[std::string(kMainCategories[i].label)];
        }
    }
    return counts;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman_rho needs lists of equal length");
    if (x.size() < 3) throw std::invalid_argument("spearman_rho needs at least 3 observations");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::domain_error("spearman_rho is undefined for constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double cronbach_alpha(const RatingsMatrix& ratings) {
    const std::size_t items = ratings.cells.size();
    const std::size_t k = ratings.raters.size();
    if (k < 2) throw std::invalid_argument("cronbach_alpha needs at least 2 raters");
    if (items < 2) throw std::invalid_argument("cronbach_alpha needs at least 2 rated pairs");
    double rater_var = 0.0;
    std::vector<double> column(items);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t i = 0; i < items; ++i) column[i] = ratings.cells.at(i).at(r);
        rater_var += sample_variance(column);
    }
    std::vector<double> totals(items);
    for (std::size_t i = 0; i < items; ++i)
        totals[i] = std::accumulate(ratings.cells[i].begin(), ratings.cells[i].end(), 0.0);
    const double total_var = sample_variance(totals);
    if (total_var == 0.0) throw std::domain_error("cronbach_alpha is undefined when row totals do not vary");
    const double kd = static_cast<double>(k);
    return kd / (kd - 1.0) * (1.0 - rater_var / total_var);
}

std::string_view to_string(Decision decision) {
    return decision == Decision::reject ? "reject" : "fail_to_reject";
}

Decision significance_decision(double rho, std::size_t n, double critical) {
    if (n < 3) throw std::invalid_argument("significance test needs n >= 3");
    return rho > critical ? Decision::reject : Decision::fail_to_reject;
}

double one_tailed_critical_value(std::size_t n) {
    // Smallest rho whose exact permutation tail probability is <= 0.05.
    static constexpr std::array<double, 11> kTable{1.000, 0.900, 0.829, 0.714, 0.643, 0.600,
                                                   0.564, 0.536, 0.503, 0.484, 0.464};
    if (n < 4 || n > 14) throw std::out_of_range("no tabulated critical value for n = " + std::to_string(n));
    return kTable[n - 4];
}

std::vector<GroupAgreement> rating_correlation(const SemanticNetwork& network, const RatingsMatrix& ratings,
                                               const ModeSpec& spec, WeightFormula formula) {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (std::size_t i = 0; i < ratings.pairs.size(); ++i) {
        const auto& row = ratings.cells[i];
        const double mean = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
        const auto bar = ratings.pairs[i].find('|');
        const auto* a = network.lookup(ratings.pairs[i].substr(0, bar));
        const auto* b = network.lookup(ratings.pairs[i].substr(bar + 1));
        double computed = 0.0;
        if (!a || !b) {
            spdlog::warn("rated pair '{}' is not in the network; its computed weight is 0", ratings.pairs[i]);
        } else if (const auto* edge = network.find_edge(a->id, b->id)) {
            computed = edge_value(network.edge_inputs(a->id, *edge), spec, formula);
        }
        auto& g = groups[ratings.groups[i]];
        g.first.push_back(mean);
        g.second.push_back(computed);
    }
    std::vector<GroupAgreement> out;
    for (const auto& [name, values] : groups) {
        GroupAgreement g;
        g.group = name;
        g.n = values.first.size();
        g.rho = spearman_rho(values.first, values.second);
        g.critical = one_tailed_critical_value(g.n);
        g.decision = significance_decision(g.rho, g.n, g.critical);
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace wikilink
