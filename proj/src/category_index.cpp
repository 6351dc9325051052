#include "wikilink/dump_ingest.hpp"

#include "wikilink/title.hpp"

#include <spdlog/spdlog.h>

#include <deque>
#include <unordered_set>
#include <unordered_set>

namespace wikilink {

namespace {

constexpr std::string_view kCategoryPrefix = "category:";

const std::vector<std::string> kNoChildren;

} // namespace

void IngestPolicy::validate() const {
    if (category_depth < 0) throw std::invalid_argument("category_depth must be >= 0");
    if (max_links_per_article < 2) throw std::invalid_argument("max_links_per_article must be >= 2");
}

void CategoryGraph::touch(std::string_view category) {
    std::string key = title_key(category);
    if (!display_.contains(key)) display_.emplace(key, normalize_title(category));
    children_.try_emplace(std::move(key));
}

void CategoryGraph::add_link(std::string_view child, std::string_view parent) {
    touch(child);
    touch(parent);
    auto& kids = children_[title_key(parent)];
    std::string child_key = title_key(child);
    if (std::find(kids.begin(), kids.end(), child_key) == kids.end()) kids.push_back(std::move(child_key));
}

void CategoryGraph::add_page(const RawPage& page) {
    if (!istarts_with_ascii(page.title, kCategoryPrefix)) return;
    const std::string name = normalize_title(std::string_view(page.title).substr(kCategoryPrefix.size()));
    if (name.empty()) return;
    touch(name);
    if (redirect_target(page)) return;
    for (const auto& parent : parse_article(page).categories) add_link(name, parent);
}

bool CategoryGraph::contains(std::string_view category) const {
    return children_.contains(title_key(category));
}

const std::vector<std::string>& CategoryGraph::children(std::string_view category) const {
    auto it = children_.find(title_key(category));
    return it == children_.end() ? kNoChildren : it->second;
}

std::string_view CategoryGraph::display_name(std::string_view key) const {
    auto it = display_.find(std::string(key));
    return it == display_.end() ? key : std::string_view(it->second);
}

bool CategoryIndex::contains(std::string_view category) const {
    return admitted.contains(title_key(category));
}

const CategoryIndex::Entry* CategoryIndex::find(std::string_view category) const {
    auto it = admitted.find(title_key(category));
    return it == admitted.end() ? nullptr : &it->second;
}

CategoryIndex build_category_index(const CategoryGraph& graph, int depth) {
    if (depth < 0) throw std::invalid_argument("category depth must be >= 0");
    CategoryIndex index;
    index.depth_limit = depth;

    std::string absent;
    std::size_t absent_count = 0;
    for (std::size_t root = 0; root < kMainCategories.size(); ++root) {
        const std::string_view main = kMainCategories[root].title;
        if (!graph.contains(main)) {
            if (absent_count++ > 0) absent += ", ";
            absent += main;
            continue;
        }
        std::unordered_set<std::string> visited;
        std::deque<std::pair<std::string, int>> frontier;
        const std::string main_key = title_key(main);
        visited.insert(main_key);
        frontier.emplace_back(main_key, 0);
        while (!frontier.empty()) {
            auto [key, hops] = std::move(frontier.front());
            frontier.pop_front();

            auto [it, inserted] = index.admitted.try_emplace(key);
            auto& entry = it->second;
            if (inserted) {
                entry.name = std::string(graph.display_name(key));
                entry.depth = hops;
            } else {
                entry.depth = std::min(entry.depth, hops);
            }
            entry.roots = static_cast<std::uint16_t>(entry.roots | (1u << root));

            if (hops == depth) continue;
            for (const auto& child : graph.children(key)) {
                if (visited.insert(child).second) frontier.emplace_back(child, hops + 1);
            }
        }
    }
    if (!absent.empty())
        spdlog::warn("{} of {} main categories are absent from the dump: {}", absent_count, kMainCategories.size(),
                     absent);
    return index;
}

CategoryIndex build_category_index(std::span<const RawPage> pages, int depth) {
    CategoryGraph graph;
    for (const auto& page : pages) graph.add_page(page);
    return build_category_index(graph, depth);
}

AdmissionDecision admit_article(const ArticleRecord& record, const CategoryIndex& index,
                                const IngestPolicy& policy) {
    AdmissionDecision decision;
    if (policy.exclude_colon_titles && record.title.find(':') != std::string::npos) {
        decision.reason = RejectReason::colon_title;
        return decision;
    }
    const bool categorized = std::any_of(record.categories.begin(), record.categories.end(),
                                         [&](const std::string& c) { return index.contains(c); });
    if (!categorized) {
        decision.reason = RejectReason::no_admitted_category;
        return decision;
    }

    decision.admitted = true;
    decision.record = record;
    auto& links = decision.record->main_links;

    std::unordered_set<std::string> see_also_keys;
    for (const auto& s : record.see_also) see_also_keys.insert(title_key(s));
    std::size_t union_size = see_also_keys.size();
    for (const auto& m : links) {
        if (!see_also_keys.contains(title_key(m))) ++union_size;
    }
    if (union_size <= policy.max_links_per_article) return decision;

    // Keep main links in document order until the union reaches the cap.
    std::size_t size = see_also_keys.size();
    std::size_t keep = 0;
    for (; keep < links.size(); ++keep) {
        const bool grows = !see_also_keys.contains(title_key(links[keep]));
        if (grows && size >= policy.max_links_per_article) break;
        if (grows) ++size;
    }
    decision.dropped_links = links.size() - keep;
    links.resize(keep);
    return decision;
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
    case RejectReason::none:
        return "none";
    case RejectReason::colon_title:
        return "colon";
    case RejectReason::no_admitted_category:
        return "category";
    }
    return "unknown";
}

void RedirectMap::add(std::string_view from, std::string_view to) {
    std::string key = title_key(from);
    if (key.empty() || key == title_key(to)) return;
    targets_.insert_or_assign(std::move(key), normalize_title(to));
}

std::string RedirectMap::resolve(std::string_view title) const {
    constexpr int kMaxHops = 8;
    std::string current = normalize_title(title);
    for (int hop = 0; hop < kMaxHops; ++hop) {
        auto it = targets_.find(title_key(current));
        if (it == targets_.end()) break;
        current = it->second;
    }
    return current;
}

void resolve_redirects(ArticleRecord& record, const RedirectMap& redirects) {
    if (redirects.size() == 0) return;
    const std::string self_key = title_key(record.title);
    auto rewrite = [&](std::vector<std::string>& list) {
        std::unordered_set<std::string> seen;
        std::vector<std::string> out;
        out.reserve(list.size());
        for (const auto& link : list) {
            std::string target = redirects.resolve(link);
            std::string key = title_key(target);
            if (key == self_key || !seen.insert(std::move(key)).second) continue;
            out.push_back(std::move(target));
        }
        list = std::move(out);
    };
    rewrite(record.main_links);
    rewrite(record.see_also);
}

} // namespace wikilink
