#include "wikilink/dump_ingest.hpp"

#include "wikilink/title.hpp"

#include <expat.h>
#include <spdlog/spdlog.h>

#include <cstring>
#include <exception>
#include <istream>
#include <memory>

namespace wikilink {

DumpParseError::DumpParseError(const std::string& message, std::uint64_t offset)
    : std::runtime_error(message + " at byte offset " + std::to_string(offset)), offset_(offset) {}

namespace {

constexpr std::size_t kChunkSize = 1 << 16;

enum class Field { none, title, text };

struct PageAssembler {
    const PageSink* sink = nullptr;
    XML_Parser parser = nullptr;
    std::exception_ptr failure;

    bool in_page = false;
    int depth_in_page = 0;
    Field field = Field::none;
    bool text_deleted = false;
    RawPage page;
    std::size_t delivered = 0;
    std::size_t skipped = 0;

    void begin_page() {
        in_page = true;
        depth_in_page = 0;
        page = RawPage{};
        text_deleted = false;
    }

    void end_page() {
        in_page = false;
        std::string title = normalize_title(page.title);
        if (title.empty()) {
            ++skipped;
            spdlog::warn("skipping page without a title near byte {}", XML_GetCurrentByteIndex(parser));
            return;
        }
        if (text_deleted) {
            ++skipped;
            spdlog::warn("skipping page '{}': revision text is not available", title);
            return;
        }
        page.title = std::move(title);
        page.namespace_hint = std::string(namespace_prefix(page.title));
        ++delivered;
        (*sink)(std::move(page));
    }
};

const char* find_attribute(const XML_Char** attrs, const char* name) {
    for (int i = 0; attrs[i] != nullptr; i += 2) {
        if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
    }
    return nullptr;
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto& st = *static_cast<PageAssembler*>(user);
    if (std::strcmp(name, "page") == 0) {
        st.begin_page();
        return;
    }
    if (!st.in_page) return;
    ++st.depth_in_page;
    if (std::strcmp(name, "title") == 0 && st.depth_in_page == 1) {
        st.field = Field::title;
        st.page.title.clear();
    } else if (std::strcmp(name, "text") == 0) {
        st.field = Field::text;
        st.page.wikitext.clear();
        st.text_deleted = find_attribute(attrs, "deleted") != nullptr;
    } else if (std::strcmp(name, "redirect") == 0 && st.depth_in_page == 1) {
        if (const char* target = find_attribute(attrs, "title")) st.page.redirect_title = normalize_title(target);
    }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
    auto& st = *static_cast<PageAssembler*>(user);
    if (!st.in_page) return;
    if (std::strcmp(name, "page") == 0) {
        try {
            st.end_page();
        } catch (...) {
            st.failure = std::current_exception();
            XML_StopParser(st.parser, XML_FALSE);
        }
        return;
    }
    --st.depth_in_page;
    st.field = Field::none;
}

void XMLCALL on_chars(void* user, const XML_Char* data, int len) {
    auto& st = *static_cast<PageAssembler*>(user);
    switch (st.field) {
    case Field::title:
        st.page.title.append(data, static_cast<std::size_t>(len));
        break;
    case Field::text:
        st.page.wikitext.append(data, static_cast<std::size_t>(len));
        break;
    case Field::none:
        break;
    }
}

struct ParserDeleter {
    void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

} // namespace

std::size_t parse_dump(std::istream& source, const PageSink& sink) {
    std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
    if (!parser) throw std::runtime_error("failed to allocate XML parser");

    PageAssembler state;
    state.sink = &sink;
    state.parser = parser.get();
    XML_SetUserData(parser.get(), &state);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_chars);

    std::vector<char> buffer(kChunkSize);
    bool done = false;
    while (!done) {
        source.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto got = source.gcount();
        done = got == 0 || source.eof();
        if (XML_Parse(parser.get(), buffer.data(), static_cast<int>(got), done ? XML_TRUE : XML_FALSE) ==
            XML_STATUS_ERROR) {
            if (state.failure) std::rethrow_exception(state.failure);
            throw DumpParseError(std::string("malformed dump XML: ") + XML_ErrorString(XML_GetErrorCode(parser.get())),
                                 static_cast<std::uint64_t>(XML_GetCurrentByteIndex(parser.get())));
        }
        if (source.bad()) throw std::runtime_error("I/O error while reading dump");
    }
    if (state.skipped > 0) spdlog::warn("{} page(s) skipped while reading dump", state.skipped);
    return state.delivered;
}

std::vector<RawPage> read_dump(std::istream& source) {
    std::vector<RawPage> pages;
    parse_dump(source, [&pages](RawPage&& page) { pages.push_back(std::move(page)); });
    return pages;
}

} // namespace wikilink
