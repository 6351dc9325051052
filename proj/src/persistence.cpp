#include "wikilink/graph_store.hpp"

#include "wikilink/title.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace wikilink {

using json = nlohmann::json;

PersistenceError::PersistenceError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

namespace {

constexpr const char* kNodesFile = "nodes.tsv";
constexpr const char* kEdgesFile = "edges.tsv";
constexpr const char* kMetaFile = "meta.json";

struct DigestDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256 initialisation failed");
    }
    void update(std::string_view data) { EVP_DigestUpdate(ctx_.get(), data.data(), data.size()); }
    std::string hex() {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_.get(), digest, &len);
        static constexpr char kHex[] = "0123456789abcdef";
        std::string out;
        for (unsigned int i = 0; i < len; ++i) {
            out.push_back(kHex[digest[i] >> 4]);
            out.push_back(kHex[digest[i] & 0xf]);
        }
        return out;
    }

private:
    std::unique_ptr<EVP_MD_CTX, DigestDeleter> ctx_;
};

std::string render_nodes(const SemanticNetwork& network) {
    std::string out;
    for (const auto& n : network.nodes()) {
        out += std::to_string(n.id);
        out += '\t';
        out += n.title;
        out += '\t';
        for (std::size_t i = 0; i < n.categories.size(); ++i) {
            if (i > 0) out += '|';
            out += n.categories[i];
        }
        out += '\n';
    }
    return out;
}

std::string render_edges(const SemanticNetwork& network) {
    std::string out;
    char weight[64];
    for (const auto& e : network.edges()) {
        std::snprintf(weight, sizeof weight, "%.6f", e.semantic_weight);
        out += std::to_string(e.u);
        out += '\t';
        out += std::to_string(e.v);
        out += '\t';
        out += std::to_string(e.raw_weight);
        out += '\t';
        out += weight;
        out += '\n';
    }
    return out;
}

json category_index_json(const CategoryIndex& index) {
    std::vector<const CategoryIndex::Entry*> entries;
    for (const auto& [key, entry] : index.admitted) entries.push_back(&entry);
    std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) { return a->name < b->name; });
    json admitted = json::array();
    for (const auto* e : entries) {
        json roots = json::array();
        for (std::size_t i = 0; i < kMainCategories.size(); ++i) {
            if (e->roots & (1u << i)) roots.push_back(kMainCategories[i].label);
        }
        admitted.push_back({{"name", e->name}, {"depth", e->depth}, {"roots", roots}});
    }
    return {{"depth_limit", index.depth_limit}, {"admitted", admitted}};
}

CategoryIndex category_index_from_json(const json& j) {
    CategoryIndex index;
    index.depth_limit = j.at("depth_limit").get<int>();
    for (const auto& item : j.at("admitted")) {
        CategoryIndex::Entry entry;
        entry.name = item.at("name").get<std::string>();
        entry.depth = item.at("depth").get<int>();
        for (const auto& label : item.at("roots")) {
            const auto l = label.get<std::string>();
            for (std::size_t i = 0; i < kMainCategories.size(); ++i) {
                if (kMainCategories[i].label == l) entry.roots = static_cast<std::uint16_t>(entry.roots | (1u << i));
            }
        }
        index.admitted.emplace(title_key(entry.name), std::move(entry));
    }
    return index;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PersistenceError(PersistenceError::Kind::io, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw PersistenceError(PersistenceError::Kind::io, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PersistenceError(PersistenceError::Kind::missing_file, "missing network file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_int(std::string_view text, const char* file, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw PersistenceError(PersistenceError::Kind::malformed,
                               std::string(file) + " line " + std::to_string(line) + ": bad integer '" +
                                   std::string(text) + "'");
    return value;
}

template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto eol = content.find('\n', pos);
        if (eol == std::string_view::npos) eol = content.size();
        fn(content.substr(pos, eol - pos), ++line_no);
        pos = eol + 1;
    }
}

} // namespace

std::string sha256_hex(std::string_view data) {
    Sha256 h;
    h.update(data);
    return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Sha256 h;
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
    }
    return h.hex();
}

void save(const SemanticNetwork& network, const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw PersistenceError(PersistenceError::Kind::io, "cannot create " + directory.string() + ": " + ec.message());

    const std::string nodes = render_nodes(network);
    const std::string edges = render_edges(network);
    const auto& stats = network.stats();
    const auto& manifest = network.manifest();

    json meta;
    meta["format_version"] = kFormatVersion;
    meta["w_min"] = stats.w_min;
    meta["w_max"] = stats.w_max;
    meta["node_count"] = stats.node_count;
    meta["edge_count"] = stats.edge_count;
    meta["build_policy"] = {
        {"category_depth", manifest.policy.category_depth},
        {"max_links_per_article", manifest.policy.max_links_per_article},
        {"exclude_colon_titles", manifest.policy.exclude_colon_titles},
        {"ngram_min", manifest.ngram_min},
        {"ngram_max", manifest.ngram_max},
    };
    meta["sources"] = manifest.source_digests;
    meta["checksums"] = {{kNodesFile, sha256_hex(nodes)}, {kEdgesFile, sha256_hex(edges)}};
    meta["category_index"] = network.category_index() ? category_index_json(*network.category_index()) : json(nullptr);

    write_file(directory / kNodesFile, nodes);
    write_file(directory / kEdgesFile, edges);
    write_file(directory / kMetaFile, meta.dump(2) + "\n");
}

SemanticNetwork load(const std::filesystem::path& directory) {
    using Kind = PersistenceError::Kind;
    const std::string meta_text = read_file(directory / kMetaFile);
    json meta;
    try {
        meta = json::parse(meta_text);
    } catch (const json::parse_error& e) {
        throw PersistenceError(Kind::malformed, std::string("meta.json: ") + e.what());
    }

    try {
        const int version = meta.at("format_version").get<int>();
        if (version != kFormatVersion)
            throw PersistenceError(Kind::version_mismatch, "unsupported network format version " +
                                                               std::to_string(version) + " (expected " +
                                                               std::to_string(kFormatVersion) + ")");

        const std::string nodes_text = read_file(directory / kNodesFile);
        const std::string edges_text = read_file(directory / kEdgesFile);
        if (sha256_hex(nodes_text) != meta.at("checksums").at(kNodesFile).get<std::string>())
            throw PersistenceError(Kind::checksum_mismatch, "checksum mismatch for nodes.tsv");
        if (sha256_hex(edges_text) != meta.at("checksums").at(kEdgesFile).get<std::string>())
            throw PersistenceError(Kind::checksum_mismatch, "checksum mismatch for edges.tsv");

        std::vector<ConceptNode> nodes;
        for_each_line(nodes_text, [&](std::string_view line, std::size_t no) {
            auto fields = split(line, '\t');
            if (fields.size() != 3)
                throw PersistenceError(Kind::malformed, "nodes.tsv line " + std::to_string(no) + ": expected 3 fields");
            ConceptNode node;
            node.id = parse_int<NodeId>(fields[0], kNodesFile, no);
            node.title = std::string(fields[1]);
            if (!fields[2].empty()) {
                for (auto c : split(fields[2], '|')) node.categories.emplace_back(c);
            }
            nodes.push_back(std::move(node));
        });

        std::vector<EdgeRecord> edges;
        for_each_line(edges_text, [&](std::string_view line, std::size_t no) {
            auto fields = split(line, '\t');
            if (fields.size() != 4)
                throw PersistenceError(Kind::malformed, "edges.tsv line " + std::to_string(no) + ": expected 4 fields");
            EdgeRecord e;
            e.u = parse_int<NodeId>(fields[0], kEdgesFile, no);
            e.v = parse_int<NodeId>(fields[1], kEdgesFile, no);
            e.raw_weight = parse_int<std::uint64_t>(fields[2], kEdgesFile, no);
            const std::string w(fields[3]);
            char* end = nullptr;
            e.semantic_weight = std::strtod(w.c_str(), &end);
            if (w.empty() || end != w.c_str() + w.size())
                throw PersistenceError(Kind::malformed, "edges.tsv line " + std::to_string(no) + ": bad weight");
            edges.push_back(e);
        });

        BuildManifest manifest;
        const auto& policy = meta.at("build_policy");
        manifest.policy.category_depth = policy.at("category_depth").get<int>();
        manifest.policy.max_links_per_article = policy.at("max_links_per_article").get<std::size_t>();
        manifest.policy.exclude_colon_titles = policy.at("exclude_colon_titles").get<bool>();
        manifest.ngram_min = policy.at("ngram_min").get<std::size_t>();
        manifest.ngram_max = policy.at("ngram_max").get<std::size_t>();
        manifest.source_digests = meta.at("sources").get<std::map<std::string, std::string>>();

        std::optional<CategoryIndex> index;
        if (!meta.at("category_index").is_null()) index = category_index_from_json(meta.at("category_index"));

        SemanticNetwork network(std::move(nodes), std::move(edges), std::move(manifest), std::move(index));
        const auto& stats = network.stats();
        if (stats.w_min != meta.at("w_min").get<std::uint64_t>() || stats.w_max != meta.at("w_max").get<std::uint64_t>() ||
            stats.node_count != meta.at("node_count").get<std::size_t>() ||
            stats.edge_count != meta.at("edge_count").get<std::size_t>())
            throw PersistenceError(Kind::malformed, "meta.json statistics disagree with the edge list");
        return network;
    } catch (const json::exception& e) {
        throw PersistenceError(Kind::malformed, std::string("meta.json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw PersistenceError(Kind::malformed, std::string("network files: ") + e.what());
    }
}

} // namespace wikilink
