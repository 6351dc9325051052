#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wikilink {

class VectorParseError : public std::runtime_error {
public:
    VectorParseError(const std::string& message, std::size_t line);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Word vectors plus character n-gram vectors, all of one dimension.
///
/// In the text format an n-gram entry is written wrapped in angle brackets:
/// the n-gram "whe" is the token `<whe>`, the word-initial n-gram "<wh" is
/// `<<wh>`. Every other token is a word. Tokens are stored ASCII-lowercased.
class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dim, std::size_t ngram_min = 3, std::size_t ngram_max = 6);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t ngram_min() const noexcept { return ngram_min_; }
    std::size_t ngram_max() const noexcept { return ngram_max_; }
    std::size_t word_count() const noexcept { return words_.size(); }
    std::size_t ngram_count() const noexcept { return ngrams_.size(); }
    std::size_t size() const noexcept { return words_.size() + ngrams_.size(); }

    /// Inserts a file-format token; returns false when it replaced an entry.
    bool insert(std::string_view token, std::vector<float> values);
    bool insert_word(std::string_view word, std::vector<float> values);
    bool insert_ngram(std::string_view ngram, std::vector<float> values);

    const std::vector<float>* word(std::string_view word) const;
    const std::vector<float>* ngram(std::string_view ngram) const;

private:
    void check_dim(const std::vector<float>& values) const;

    std::size_t dim_;
    std::size_t ngram_min_;
    std::size_t ngram_max_;
    std::unordered_map<std::string, std::vector<float>> words_;
    std::unordered_map<std::string, std::vector<float>> ngrams_;
};

/// Text format: header "<count> <dim>", then "<token> <dim floats>" per line.
EmbeddingTable load_vectors(std::istream& in, std::size_t ngram_min = 3, std::size_t ngram_max = 6);
EmbeddingTable load_vectors(const std::filesystem::path& path, std::size_t ngram_min = 3, std::size_t ngram_max = 6);

/// All substrings of ngram_min..ngram_max characters (UTF-8 code points) of
/// "<" + term + ">", ordered by start position, then by length. Duplicates
/// are kept.
std::vector<std::string> char_ngrams(std::string_view term, std::size_t ngram_min, std::size_t ngram_max);

enum class Provenance { stored, composed, absent };

struct TermVector {
    std::vector<double> values;
    Provenance provenance = Provenance::absent;
};

/// Stored vector for known words, sum of known n-gram vectors otherwise;
/// multi-word terms average the vectors of their resolvable words.
TermVector term_vector(const EmbeddingTable& table, std::string_view term);

/// Cosine similarity clamped to [0,1]; 0 when either side is the zero vector.
double cosine_unit(std::span<const double> a, std::span<const double> b);

double semantic_weight(const EmbeddingTable& table, std::string_view a, std::string_view b);

/// Memoizes term vectors by title so each concept is vectorized once per
/// build. Not thread-safe.
class SemanticScorer {
public:
    explicit SemanticScorer(const EmbeddingTable& table) : table_(table) {}

    double operator()(std::string_view a, std::string_view b);

    /// Titles for which no vector could be formed so far.
    std::size_t absent_terms() const noexcept { return absent_; }

private:
    const TermVector& vector_for(std::string_view term);

    const EmbeddingTable& table_;
    std::unordered_map<std::string, TermVector> cache_;
    std::size_t absent_ = 0;
};

} // namespace wikilink
