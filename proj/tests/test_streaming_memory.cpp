#include "wikilink/dump_ingest.hpp"

#include <gtest/gtest.h>

#include <sys/resource.h>

#include <iostream>
#include <istream>
#include <streambuf>
#include <string>

using namespace wikilink;

namespace {

/// Produces a MediaWiki export on demand, one page at a time.
class SyntheticDumpBuf : public std::streambuf {
public:
    SyntheticDumpBuf(std::size_t pages, std::size_t page_bytes) : pages_(pages), page_bytes_(page_bytes) {
        chunk_ = "<mediawiki xmlns=\"http://www.mediawiki.org/xml/export-0.10/\">\n";
        reset();
    }

    std::size_t bytes_served() const { return served_; }

protected:
    int_type underflow() override {
        if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
        if (!next_chunk()) return traits_type::eof();
        return traits_type::to_int_type(*gptr());
    }

private:
    void reset() { setg(chunk_.data(), chunk_.data(), chunk_.data() + chunk_.size()); }

    bool next_chunk() {
        served_ += chunk_.size();
        if (emitted_ > pages_) return false;
        if (emitted_ == pages_) {
            chunk_ = "</mediawiki>\n";
        } else {
            const std::string title = "Synthetic page " + std::to_string(emitted_);
            chunk_ = "<page><title>" + title + "</title><ns>0</ns><id>" + std::to_string(emitted_ + 1) +
                     "</id><revision><text xml:space=\"preserve\">";
            std::size_t link = 0;
            while (chunk_.size() < page_bytes_) {
                chunk_ += "Filler prose about topic " + std::to_string(link) + " mentions [[Linked concept " +
                          std::to_string((emitted_ * 31 + link) % 5000) + "]] and {{cite|x=[[not a link]]}}. ";
                ++link;
            }
            chunk_ += "\n[[Category:Synthetic]]</text></revision></page>\n";
        }
        ++emitted_;
        reset();
        return true;
    }

    std::size_t pages_;
    std::size_t page_bytes_;
    std::size_t emitted_ = 0;
    std::size_t served_ = 0;
    std::string chunk_;
};

long peak_rss_kib() {
    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    return usage.ru_maxrss;
}

std::size_t stream_dump(std::size_t pages, std::size_t page_bytes, std::size_t* bytes = nullptr,
                        std::size_t* links = nullptr) {
    SyntheticDumpBuf buf(pages, page_bytes);
    std::istream in(&buf);
    std::size_t link_count = 0;
    const std::size_t delivered = parse_dump(in, [&](RawPage&& page) {
        link_count += parse_article(page).main_links.size();
    });
    if (bytes) *bytes = buf.bytes_served();
    if (links) *links = link_count;
    return delivered;
}

} // namespace

TEST(StreamingMemory, ThousandPageDumpStaysUnderCeiling) {
    constexpr std::size_t kPageBytes = 64 * 1024;
    constexpr std::size_t kPages = 1000;
    // Bring allocator arenas and the XML parser to steady state first.
    ASSERT_EQ(stream_dump(5, kPageBytes), 5u);
    const long before = peak_rss_kib();

    std::size_t bytes = 0;
    std::size_t links = 0;
    ASSERT_EQ(stream_dump(kPages, kPageBytes, &bytes, &links), kPages);
    const long growth_kib = peak_rss_kib() - before;

    EXPECT_GT(bytes, kPages * kPageBytes);
    EXPECT_GT(links, kPages);
    // Ceiling: 64 times the largest page, far below the 64 MiB dump itself.
    const long ceiling_kib = static_cast<long>(64 * kPageBytes / 1024);
    std::cout << "peak RSS growth " << growth_kib << " KiB, ceiling " << ceiling_kib << " KiB\n";
    EXPECT_LT(growth_kib, ceiling_kib) << "peak RSS grew by " << growth_kib << " KiB while streaming "
                                       << bytes / 1024 << " KiB";
}
