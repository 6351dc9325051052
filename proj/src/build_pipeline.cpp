#include "wikilink/build_pipeline.hpp"

#include "wikilink/title.hpp"

#include <spdlog/spdlog.h>

#include <fstream>

namespace wikilink {

namespace {

bool is_category_page(const RawPage& page) {
    return istarts_with_ascii(normalize_title(page.title), "Category:");
}

} // namespace

SemanticNetwork build_network(const DumpOpener& open_dump, const EmbeddingTable* table, const IngestPolicy& policy,
                              BuildManifest manifest, BuildReport* report) {
    policy.validate();
    BuildReport local;
    BuildReport& r = report ? *report : local;
    r = {};

    CategoryGraph categories;
    RedirectMap redirects;
    {
        auto in = open_dump();
        r.pages = parse_dump(*in, [&](RawPage&& page) {
            if (auto target = redirect_target(page)) {
                redirects.add(page.title, *target);
                ++r.redirects;
            } else if (is_category_page(page)) {
                categories.add_page(page);
                ++r.category_pages;
            }
        });
    }

    CategoryIndex index = build_category_index(categories, policy.category_depth);
    r.admitted_categories = index.admitted.size();

    NetworkBuilder builder;
    {
        auto in = open_dump();
        parse_dump(*in, [&](RawPage&& page) {
            if (redirect_target(page) || is_category_page(page)) return;
            ArticleRecord record = parse_article(page);
            resolve_redirects(record, redirects);
            auto decision = admit_article(record, index, policy);
            if (!decision.admitted) {
                ++(decision.reason == RejectReason::colon_title ? r.rejected_colon : r.rejected_category);
                spdlog::debug("skipped '{}': {}", record.title, to_string(decision.reason));
                return;
            }
            ++r.admitted;
            r.dropped_links += decision.dropped_links;
            builder.accumulate(*decision.record);
        });
    }
    spdlog::info("ingested {} pages: {} admitted, {} colon titles, {} outside the category tree, {} redirects",
                 r.pages, r.admitted, r.rejected_colon, r.rejected_category, r.redirects);

    manifest.policy = policy;
    SemanticFn semantic;
    std::optional<SemanticScorer> scorer;
    if (table) {
        scorer.emplace(*table);
        semantic = [&](std::string_view a, std::string_view b) { return (*scorer)(a, b); };
    }
    SemanticNetwork network = builder.finalize(semantic, std::move(manifest), std::move(index));
    if (scorer) {
        r.absent_terms = scorer->absent_terms();
        if (r.absent_terms > 0) spdlog::warn("{} concepts have no vector; their semantic weights are 0", r.absent_terms);
    }
    return network;
}

SemanticNetwork build_network(const BuildOptions& options, BuildReport* report) {
    if (!std::filesystem::is_regular_file(options.dump))
        throw std::invalid_argument("dump file not found: " + options.dump.string());
    BuildManifest manifest;
    manifest.ngram_min = options.ngram_min;
    manifest.ngram_max = options.ngram_max;
    manifest.source_digests["dump"] = sha256_file(options.dump);

    std::optional<EmbeddingTable> table;
    if (options.vectors) {
        if (!std::filesystem::is_regular_file(*options.vectors))
            throw std::invalid_argument("vectors file not found: " + options.vectors->string());
        table.emplace(load_vectors(*options.vectors, options.ngram_min, options.ngram_max));
        manifest.source_digests["vectors"] = sha256_file(*options.vectors);
    }

    const DumpOpener opener = [&]() -> std::unique_ptr<std::istream> {
        auto in = std::make_unique<std::ifstream>(options.dump, std::ios::binary);
        if (!*in) throw std::runtime_error("cannot open " + options.dump.string());
        return in;
    };
    return build_network(opener, table ? &*table : nullptr, options.policy, std::move(manifest), report);
}

} // namespace wikilink
