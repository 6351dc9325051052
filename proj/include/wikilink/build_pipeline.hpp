#pragma once

#include "wikilink/dump_ingest.hpp"
#include "wikilink/embeddings.hpp"
#include "wikilink/graph_store.hpp"

#include <filesystem>
#include <functional>
#include <istream>
#include <memory>
#include <optional>

namespace wikilink {

struct BuildOptions {
    std::filesystem::path dump;
    std::optional<std::filesystem::path> vectors;
    IngestPolicy policy;
    std::size_t ngram_min = 3;
    std::size_t ngram_max = 6;
};

struct BuildReport {
    std::size_t pages = 0;
    std::size_t category_pages = 0;
    std::size_t redirects = 0;
    std::size_t admitted = 0;
    std::size_t rejected_colon = 0;
    std::size_t rejected_category = 0;
    std::size_t dropped_links = 0;
    std::size_t admitted_categories = 0;
    std::size_t absent_terms = 0;
};

/// Opens a fresh stream over the dump; called once per pass.
using DumpOpener = std::function<std::unique_ptr<std::istream>()>;

/// Two passes over the dump: the first collects category parents and
/// redirects, the second parses, admits and accumulates articles.
/// `table` may be null, in which case every semantic weight is 0.
SemanticNetwork build_network(const DumpOpener& open_dump, const EmbeddingTable* table, const IngestPolicy& policy,
                              BuildManifest manifest, BuildReport* report = nullptr);

/// File-based build; the manifest records sha256 digests of the inputs.
SemanticNetwork build_network(const BuildOptions& options, BuildReport* report = nullptr);

} // namespace wikilink
