#include "wikilink/embeddings.hpp"

#include "wikilink/title.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace wikilink {

VectorParseError::VectorParseError(const std::string& message, std::size_t line)
    : std::runtime_error("vectors line " + std::to_string(line) + ": " + message), line_(line) {}

EmbeddingTable::EmbeddingTable(std::size_t dim, std::size_t ngram_min, std::size_t ngram_max)
    : dim_(dim), ngram_min_(ngram_min), ngram_max_(ngram_max) {
    if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
    if (ngram_min == 0 || ngram_min > ngram_max) throw std::invalid_argument("n-gram range must satisfy 1 <= min <= max");
}

void EmbeddingTable::check_dim(const std::vector<float>& values) const {
    if (values.size() != dim_)
        throw std::invalid_argument("vector of length " + std::to_string(values.size()) + ", expected " +
                                    std::to_string(dim_));
}

bool EmbeddingTable::insert(std::string_view token, std::vector<float> values) {
    if (token.size() >= 3 && token.front() == '<' && token.back() == '>')
        return insert_ngram(token.substr(1, token.size() - 2), std::move(values));
    return insert_word(token, std::move(values));
}

bool EmbeddingTable::insert_word(std::string_view word, std::vector<float> values) {
    check_dim(values);
    return words_.insert_or_assign(ascii_lower(word), std::move(values)).second;
}

bool EmbeddingTable::insert_ngram(std::string_view ngram, std::vector<float> values) {
    check_dim(values);
    return ngrams_.insert_or_assign(ascii_lower(ngram), std::move(values)).second;
}

const std::vector<float>* EmbeddingTable::word(std::string_view word) const {
    auto it = words_.find(ascii_lower(word));
    return it == words_.end() ? nullptr : &it->second;
}

const std::vector<float>* EmbeddingTable::ngram(std::string_view ngram) const {
    auto it = ngrams_.find(ascii_lower(ngram));
    return it == ngrams_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

} // namespace

EmbeddingTable load_vectors(std::istream& in, std::size_t ngram_min, std::size_t ngram_max) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw VectorParseError("missing '<count> <dim>' header", line_no);
    const auto header = split_fields(line);
    std::size_t count = 0;
    std::size_t dim = 0;
    if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) || dim == 0)
        throw VectorParseError("malformed header, expected '<count> <dim>'", line_no);

    EmbeddingTable table(dim, ngram_min, ngram_max);
    std::size_t entries = 0;
    std::vector<float> values;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != dim + 1)
            throw VectorParseError("expected token and " + std::to_string(dim) + " values, found " +
                                       std::to_string(fields.size() - 1) + " values",
                                   line_no);
        values.assign(dim, 0.0f);
        for (std::size_t d = 0; d < dim; ++d) {
            if (!parse_number(fields[d + 1], values[d]) || !std::isfinite(values[d]))
                throw VectorParseError("invalid number '" + std::string(fields[d + 1]) + "'", line_no);
        }
        if (!table.insert(fields[0], values)) spdlog::warn("duplicate vector token '{}' on line {}; keeping the last", fields[0], line_no);
        ++entries;
    }
    if (entries != count)
        throw VectorParseError("header announces " + std::to_string(count) + " entries, file has " +
                                   std::to_string(entries),
                               line_no);
    return table;
}

EmbeddingTable load_vectors(const std::filesystem::path& path, std::size_t ngram_min, std::size_t ngram_max) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open vectors file " + path.string());
    return load_vectors(in, ngram_min, ngram_max);
}

std::vector<std::string> char_ngrams(std::string_view term, std::size_t ngram_min, std::size_t ngram_max) {
    const std::string wrapped = "<" + std::string(term) + ">";
    std::vector<std::size_t> starts; // byte offset of each code point
    for (std::size_t i = 0; i < wrapped.size(); ++i) {
        if ((static_cast<unsigned char>(wrapped[i]) & 0xC0) != 0x80) starts.push_back(i);
    }
    const std::size_t chars = starts.size();
    starts.push_back(wrapped.size());

    std::vector<std::string> grams;
    for (std::size_t begin = 0; begin < chars; ++begin) {
        for (std::size_t n = ngram_min; n <= ngram_max && begin + n <= chars; ++n)
            grams.emplace_back(wrapped.substr(starts[begin], starts[begin + n] - starts[begin]));
    }
    return grams;
}

namespace {

// Vector of a single word; returns false when nothing about it is known.
bool word_vector(const EmbeddingTable& table, std::string_view word, std::vector<double>& out, bool& composed) {
    out.assign(table.dim(), 0.0);
    if (const auto* stored = table.word(word)) {
        std::copy(stored->begin(), stored->end(), out.begin());
        return true;
    }
    bool any = false;
    for (const auto& gram : char_ngrams(ascii_lower(word), table.ngram_min(), table.ngram_max())) {
        if (const auto* v = table.ngram(gram)) {
            for (std::size_t d = 0; d < out.size(); ++d) out[d] += (*v)[d];
            any = true;
        }
    }
    composed = composed || any;
    return any;
}

} // namespace

TermVector term_vector(const EmbeddingTable& table, std::string_view term) {
    TermVector result;
    result.values.assign(table.dim(), 0.0);

    std::vector<double> word;
    std::size_t resolved = 0;
    bool composed = false;
    std::size_t i = 0;
    while (i < term.size()) {
        while (i < term.size() && term[i] == ' ') ++i;
        std::size_t j = i;
        while (j < term.size() && term[j] != ' ') ++j;
        if (j > i && word_vector(table, term.substr(i, j - i), word, composed)) {
            for (std::size_t d = 0; d < word.size(); ++d) result.values[d] += word[d];
            ++resolved;
        }
        i = j;
    }
    if (resolved == 0) {
        result.values.assign(table.dim(), 0.0);
        return result;
    }
    if (resolved > 1) {
        for (auto& v : result.values) v /= static_cast<double>(resolved);
    }
    result.provenance = composed ? Provenance::composed : Provenance::stored;
    return result;
}

double cosine_unit(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine of vectors with different lengths");
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

double semantic_weight(const EmbeddingTable& table, std::string_view a, std::string_view b) {
    const auto va = term_vector(table, a);
    const auto vb = term_vector(table, b);
    return cosine_unit(va.values, vb.values);
}

const TermVector& SemanticScorer::vector_for(std::string_view term) {
    auto it = cache_.find(std::string(term));
    if (it != cache_.end()) return it->second;
    auto vec = term_vector(table_, term);
    if (vec.provenance == Provenance::absent) {
        ++absent_;
        spdlog::debug("no vector for '{}'", term);
    }
    return cache_.emplace(std::string(term), std::move(vec)).first->second;
}

double SemanticScorer::operator()(std::string_view a, std::string_view b) {
    const auto& va = vector_for(a);
    const auto& vb = vector_for(b);
    return cosine_unit(va.values, vb.values);
}

} // namespace wikilink
