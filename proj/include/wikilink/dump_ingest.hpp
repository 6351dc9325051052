#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wikilink {

/// One `<page>` element of a MediaWiki pages-articles export.
struct RawPage {
    std::string title;
    std::string wikitext;
    std::string namespace_hint; // text before the first colon of the title, if any
    std::optional<std::string> redirect_title; // from a `<redirect title=...>` element
};

/// A parsed article: links are normalized display titles, deduplicated
/// (first occurrence kept), and never equal to the article's own title.
struct ArticleRecord {
    std::string title;
    std::vector<std::string> main_links;
    std::vector<std::string> see_also;
    std::vector<std::string> categories;

    friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

struct IngestPolicy {
    int category_depth = 3;
    std::size_t max_links_per_article = 500;
    bool exclude_colon_titles = true;

    // Throws std::invalid_argument when an invariant does not hold.
    void validate() const;

    friend bool operator==(const IngestPolicy&, const IngestPolicy&) = default;
};

/// Fatal XML error in the dump stream. `offset()` is the byte position
/// reported by the XML tokenizer.
class DumpParseError : public std::runtime_error {
public:
    DumpParseError(const std::string& message, std::uint64_t offset);
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

using PageSink = std::function<void(RawPage&&)>;

/// Streams a MediaWiki XML export and hands every `<page>` to `sink` in
/// document order. Only the page being assembled is held in memory.
/// Pages without a usable title, or whose text was deleted, are skipped with
/// a warning. Returns the number of pages delivered.
std::size_t parse_dump(std::istream& source, const PageSink& sink);

/// Convenience wrapper collecting every page.
std::vector<RawPage> read_dump(std::istream& source);

/// Target of a redirect page, from the `<redirect>` element or a leading
/// `#REDIRECT [[Target]]` in the wikitext.
std::optional<std::string> redirect_target(const RawPage& page);

/// Throws std::invalid_argument for redirect pages.
ArticleRecord parse_article(const RawPage& page);

// ---------------------------------------------------------------------------
// Category filtering

struct MainCategory {
    std::string_view label; // short name used in reports
    std::string_view title; // category page title without the "Category:" prefix
};

inline constexpr std::array<MainCategory, 13> kMainCategories{{
    {"cultural", "Culture and the arts"},
    {"geography", "Geography and places"},
    {"health", "Health and fitness"},
    {"history", "History and events"},
    {"human", "Human activities"},
    {"mathematics", "Mathematics and logic"},
    {"natural", "Natural and physical sciences"},
    {"people", "People and self"},
    {"philosophy", "Philosophy and thinking"},
    {"religion", "Religion and belief systems"},
    {"society", "Society and social sciences"},
    {"technology", "Technology and applied sciences"},
    {"reference", "Reference works"},
}};

/// Parent links between categories, collected from "Category:" pages.
class CategoryGraph {
public:
    /// Records the `[[Category:...]]` parents of a category page. Pages whose
    /// title does not start with "Category:" are ignored.
    void add_page(const RawPage& page);
    void add_link(std::string_view child, std::string_view parent);

    bool contains(std::string_view category) const;
    const std::vector<std::string>& children(std::string_view category) const;
    std::string_view display_name(std::string_view key) const;

private:
    void touch(std::string_view category);

    std::unordered_map<std::string, std::vector<std::string>> children_; // key -> child keys
    std::unordered_map<std::string, std::string> display_;               // key -> display name
};

struct CategoryIndex {
    struct Entry {
        std::string name;        // display name
        int depth = 0;           // fewest hops from any main category
        std::uint16_t roots = 0; // bit i set: reachable within the limit from kMainCategories[i]
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    int depth_limit = 3;
    std::unordered_map<std::string, Entry> admitted; // keyed by title_key

    bool contains(std::string_view category) const;
    const Entry* find(std::string_view category) const;

    friend bool operator==(const CategoryIndex&, const CategoryIndex&) = default;
};

/// Breadth-first walk from the main categories down to `depth` hops.
/// Main categories missing from the graph are logged and skipped.
CategoryIndex build_category_index(const CategoryGraph& graph, int depth);
CategoryIndex build_category_index(std::span<const RawPage> pages, int depth);

enum class RejectReason { none, colon_title, no_admitted_category };

struct AdmissionDecision {
    bool admitted = false;
    RejectReason reason = RejectReason::none;
    std::optional<ArticleRecord> record; // present iff admitted, links capped
    std::size_t dropped_links = 0;
};

AdmissionDecision admit_article(const ArticleRecord& record, const CategoryIndex& index,
                                const IngestPolicy& policy);

std::string_view to_string(RejectReason reason);

// ---------------------------------------------------------------------------
// Redirects

/// title_key(redirect title) -> normalized target title
class RedirectMap {
public:
    void add(std::string_view from, std::string_view to);
    /// Follows chains (bounded, cycle safe); returns the input when unmapped.
    std::string resolve(std::string_view title) const;
    std::size_t size() const noexcept { return targets_.size(); }

private:
    std::unordered_map<std::string, std::string> targets_;
};

/// Rewrites link targets through `redirects`, then restores the record
/// invariants (no duplicates, no self links).
void resolve_redirects(ArticleRecord& record, const RedirectMap& redirects);

} // namespace wikilink
