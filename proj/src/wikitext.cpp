#include "wikilink/dump_ingest.hpp"

#include "wikilink/title.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <unordered_set>

namespace wikilink {

namespace {

constexpr std::string_view kCategoryPrefix = "category:";

// Removes HTML comments and `{{...}}` templates (with nesting). Unmatched
// braces are left as literal text.
std::string strip_markup(std::string_view text) {
    std::string no_comments;
    no_comments.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text.compare(i, 4, "<!--") == 0) {
            auto end = text.find("-->", i + 4);
            if (end == std::string_view::npos) break;
            i = end + 3;
            continue;
        }
        no_comments.push_back(text[i++]);
    }

    const std::string_view s = no_comments;
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // matched [begin, end)
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i + 1 < s.size();) {
        if (s[i] == '{' && s[i + 1] == '{') {
            open.push_back(i);
            i += 2;
        } else if (s[i] == '}' && s[i + 1] == '}' && !open.empty()) {
            pairs.emplace_back(open.back(), i + 2);
            open.pop_back();
            i += 2;
        } else {
            ++i;
        }
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::pair<std::size_t, std::size_t>> removed;
    for (const auto& p : pairs) {
        if (!removed.empty() && p.first < removed.back().second) continue; // nested
        removed.push_back(p);
    }

    std::string out;
    out.reserve(s.size());
    std::size_t cursor = 0;
    for (const auto& [begin, end] : removed) {
        out.append(s.substr(cursor, begin - cursor));
        cursor = end;
    }
    out.append(s.substr(cursor));
    return out;
}

struct Heading {
    int level = 0;
    std::string_view text;
};

std::optional<Heading> parse_heading(std::string_view line) {
    line = trim(line);
    std::size_t lead = 0;
    while (lead < line.size() && line[lead] == '=') ++lead;
    std::size_t tail = 0;
    while (tail < line.size() - lead && line[line.size() - 1 - tail] == '=') ++tail;
    const std::size_t level = std::min(lead, tail);
    if (level == 0 || line.size() <= 2 * level) return std::nullopt;
    return Heading{static_cast<int>(level), trim(line.substr(level, line.size() - 2 * level))};
}

// `[[...]]` bodies found in one line, in order of their opening brackets.
// An unclosed link is closed at the end of the line (or at the next "[[").
std::vector<std::string_view> scan_links(std::string_view line, std::string_view page_title) {
    std::vector<std::pair<std::size_t, std::string_view>> found;
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i + 1 < line.size();) {
        if (line[i] == '[' && line[i + 1] == '[') {
            open.push_back(i + 2);
            i += 2;
        } else if (line[i] == ']' && line[i + 1] == ']' && !open.empty()) {
            const std::size_t begin = open.back();
            open.pop_back();
            found.emplace_back(begin, line.substr(begin, i - begin));
            i += 2;
        } else {
            ++i;
        }
    }
    if (!open.empty()) {
        spdlog::warn("unbalanced link brackets in '{}'; closing at end of line", page_title);
        std::sort(open.begin(), open.end());
        for (std::size_t k = 0; k < open.size(); ++k) {
            std::size_t end = line.size();
            auto next = line.find("[[", open[k]);
            if (next != std::string_view::npos) end = next;
            found.emplace_back(open[k], line.substr(open[k], end - open[k]));
        }
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string_view> out;
    out.reserve(found.size());
    for (const auto& f : found) out.push_back(f.second);
    return out;
}

class LinkList {
public:
    explicit LinkList(std::vector<std::string>& target) : target_(target) {}

    void add(std::string title, const std::string& self_key) {
        std::string key = title_key(title);
        if (key == self_key || !seen_.insert(std::move(key)).second) return;
        target_.push_back(std::move(title));
    }

private:
    std::vector<std::string>& target_;
    std::unordered_set<std::string> seen_;
};

} // namespace

std::optional<std::string> redirect_target(const RawPage& page) {
    if (page.redirect_title && !page.redirect_title->empty()) return page.redirect_title;
    std::string_view text = trim(page.wikitext);
    if (!istarts_with_ascii(text, "#redirect")) return std::nullopt;
    text.remove_prefix(9);
    auto open = text.find("[[");
    if (open == std::string_view::npos) return std::nullopt;
    auto close = text.find("]]", open + 2);
    std::string_view body = text.substr(open + 2, close == std::string_view::npos ? std::string_view::npos
                                                                                 : close - open - 2);
    body = body.substr(0, body.find('|'));
    body = body.substr(0, body.find('#'));
    std::string target = normalize_title(body);
    if (target.empty()) return std::nullopt;
    return target;
}

ArticleRecord parse_article(const RawPage& page) {
    if (redirect_target(page)) throw std::invalid_argument("parse_article called on redirect page '" + page.title + "'");

    ArticleRecord record;
    record.title = normalize_title(page.title);
    const std::string self_key = title_key(record.title);

    LinkList main_links(record.main_links);
    LinkList see_also(record.see_also);
    LinkList categories(record.categories);

    const std::string text = strip_markup(page.wikitext);
    int see_also_level = 0; // nonzero while inside a "See also" section

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;

        if (auto heading = parse_heading(line)) {
            if (iequals_ascii(heading->text, "see also")) {
                see_also_level = heading->level;
            } else if (see_also_level != 0 && heading->level <= see_also_level) {
                see_also_level = 0;
            }
            continue;
        }

        for (std::string_view body : scan_links(line, record.title)) {
            std::string_view target = trim(body.substr(0, body.find('|')));
            if (istarts_with_ascii(target, kCategoryPrefix)) {
                std::string name = normalize_title(target.substr(kCategoryPrefix.size()));
                if (!name.empty()) categories.add(std::move(name), {});
                continue;
            }
            if (!target.empty() && target.front() == ':') target.remove_prefix(1);
            target = target.substr(0, target.find('#'));
            if (target.find(':') != std::string_view::npos) continue;
            std::string title = normalize_title(target);
            if (title.empty()) continue;
            (see_also_level != 0 ? see_also : main_links).add(std::move(title), self_key);
        }
    }
    return record;
}

} // namespace wikilink
