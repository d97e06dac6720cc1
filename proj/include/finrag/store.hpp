#pragma once

// In-memory vector store with metadata pre-filtering and exact brute-force
// similarity. The filter runs before ranking, so k matches are returned
// whenever k matches exist. Persistence is JSONL with a header line.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "finrag/chunker.hpp"
#include "finrag/embed.hpp"
#include "finrag/error.hpp"

namespace finrag {

struct ChunkMetadata {
    std::string company;
    std::string sector;
    std::string quarter;
    std::string doc_id;
};

// Conjunction of exact-match predicates over the metadata schema; an empty
// predicate map matches everything.
struct MetadataFilter {
    std::map<std::string, std::string> predicates;

    static MetadataFilter match_all() { return {}; }

    static MetadataFilter for_company(std::string company) {
        MetadataFilter f;
        f.predicates.emplace("company", std::move(company));
        return f;
    }

    bool matches(const ChunkMetadata& m) const {
        for (const auto& [field, want] : predicates) {
            const std::string* have = nullptr;
            if (field == "company") have = &m.company;
            else if (field == "sector") have = &m.sector;
            else if (field == "quarter") have = &m.quarter;
            else if (field == "doc_id") have = &m.doc_id;
            else throw ValidationError("unknown metadata filter field: " + field);
            if (*have != want) return false;
        }
        return true;
    }
};

struct EmbeddedChunk {
    Chunk chunk;
    EmbeddingVector vector;
    ChunkMetadata metadata;
};

struct ScoredChunk {
    EmbeddedChunk chunk;
    double score = 0.0;
};

inline constexpr int kStoreFormatVersion = 1;

class VectorStore {
public:
    explicit VectorStore(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw ValidationError("store dimension must be positive");
    }

    VectorStore(VectorStore&& other) noexcept {
        std::unique_lock lock(other.mutex_);
        dim_ = other.dim_;
        chunks_ = std::move(other.chunks_);
        index_by_id_ = std::move(other.index_by_id_);
    }

    VectorStore& operator=(VectorStore&& other) noexcept {
        if (this != &other) {
            std::scoped_lock lock(mutex_, other.mutex_);
            dim_ = other.dim_;
            chunks_ = std::move(other.chunks_);
            index_by_id_ = std::move(other.index_by_id_);
        }
        return *this;
    }

    std::size_t dim() const { return dim_; }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return chunks_.size();
    }

    // Atomic batch insert: the whole batch is validated before any item is
    // applied, so a failing batch leaves the store untouched.
    std::size_t insert(std::vector<EmbeddedChunk> items) {
        std::unique_lock lock(mutex_);
        std::unordered_map<std::string, std::size_t> staged;
        staged.reserve(items.size());
        for (const EmbeddedChunk& item : items) {
            validate_item(item);
            if (index_by_id_.count(item.chunk.chunk_id) ||
                !staged.emplace(item.chunk.chunk_id, 0).second) {
                throw ValidationError("duplicate chunk_id: " + item.chunk.chunk_id);
            }
        }
        for (EmbeddedChunk& item : items) {
            index_by_id_.emplace(item.chunk.chunk_id, chunks_.size());
            chunks_.push_back(std::move(item));
        }
        return items.size();
    }

    // Exact scan: score every chunk passing the filter, sort by descending
    // cosine with ties broken by ascending chunk_id, return the first k.
    std::vector<ScoredChunk> filtered_top_k(const EmbeddingVector& query,
                                            const MetadataFilter& filter, std::size_t k) const {
        if (k == 0) throw ValidationError("filtered_top_k: k must be at least 1");
        if (query.dim() != dim_) {
            throw ValidationError("filtered_top_k: query dimension " + std::to_string(query.dim()) +
                                  " does not match store dimension " + std::to_string(dim_));
        }
        std::shared_lock lock(mutex_);
        std::vector<ScoredChunk> scored;
        for (const EmbeddedChunk& c : chunks_) {
            if (!filter.matches(c.metadata)) continue;
            scored.push_back({c, cosine_similarity(query, c.vector)});
        }
        std::sort(scored.begin(), scored.end(), [](const ScoredChunk& a, const ScoredChunk& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.chunk.chunk.chunk_id < b.chunk.chunk.chunk_id;
        });
        if (scored.size() > k) scored.resize(k);
        return scored;
    }

    std::optional<EmbeddedChunk> find_chunk(const std::string& chunk_id) const {
        std::shared_lock lock(mutex_);
        const auto it = index_by_id_.find(chunk_id);
        if (it == index_by_id_.end()) return std::nullopt;
        return chunks_[it->second];
    }

    void save(const std::filesystem::path& path) const {
        std::shared_lock lock(mutex_);
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write store file: " + path.string());
        out << nlohmann::json{{"format_version", kStoreFormatVersion}, {"dim", dim_}}.dump()
            << '\n';
        for (const EmbeddedChunk& c : chunks_) {
            nlohmann::json rec = {
                {"chunk_id", c.chunk.chunk_id},
                {"doc_id", c.chunk.doc_id},
                {"seq", c.chunk.seq},
                {"begin", c.chunk.begin},
                {"end", c.chunk.end},
                {"text", c.chunk.text},
                {"metadata",
                 {{"company", c.metadata.company},
                  {"sector", c.metadata.sector},
                  {"quarter", c.metadata.quarter},
                  {"doc_id", c.metadata.doc_id}}},
                {"vector", c.vector.values},
            };
            out << rec.dump() << '\n';
        }
        if (!out) throw IoError("write failed: " + path.string());
    }

    static VectorStore load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read store file: " + path.string());

        std::string line;
        if (!std::getline(in, line)) throw IoError("store file is empty: " + path.string());
        const nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
        if (header.is_discarded() || !header.is_object() || !header.contains("format_version") ||
            !header.contains("dim")) {
            throw IoError("malformed store header: " + path.string());
        }
        if (header["format_version"].get<int>() != kStoreFormatVersion) {
            throw IoError("unsupported store format_version " +
                          header["format_version"].dump() + ": " + path.string());
        }
        VectorStore store(header["dim"].get<std::size_t>());

        std::size_t line_no = 1;
        std::vector<EmbeddedChunk> batch;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            const nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
            if (rec.is_discarded() || !rec.is_object()) {
                throw IoError("store line " + std::to_string(line_no) + " is not a JSON object");
            }
            try {
                EmbeddedChunk c;
                c.chunk.chunk_id = rec.at("chunk_id").get<std::string>();
                c.chunk.doc_id = rec.at("doc_id").get<std::string>();
                c.chunk.seq = rec.at("seq").get<std::size_t>();
                c.chunk.begin = rec.at("begin").get<std::size_t>();
                c.chunk.end = rec.at("end").get<std::size_t>();
                c.chunk.text = rec.at("text").get<std::string>();
                const nlohmann::json& meta = rec.at("metadata");
                c.metadata.company = meta.at("company").get<std::string>();
                c.metadata.sector = meta.at("sector").get<std::string>();
                c.metadata.quarter = meta.at("quarter").get<std::string>();
                c.metadata.doc_id = meta.at("doc_id").get<std::string>();
                const nlohmann::json& vec = rec.at("vector");
                if (!vec.is_array()) throw IoError("vector is not an array");
                c.vector.values.reserve(vec.size());
                for (const nlohmann::json& x : vec) {
                    if (!x.is_number()) throw IoError("vector value is not a number");
                    c.vector.values.push_back(x.get<double>());
                }
                batch.push_back(std::move(c));
            } catch (const nlohmann::json::exception& e) {
                throw IoError("store line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        try {
            store.insert(std::move(batch));
        } catch (const ValidationError& e) {
            throw IoError("store file " + path.string() + " failed validation: " + e.what());
        }
        return store;
    }

private:
    void validate_item(const EmbeddedChunk& item) const {
        if (item.vector.dim() != dim_) {
            throw ValidationError("chunk " + item.chunk.chunk_id + ": vector dimension " +
                                  std::to_string(item.vector.dim()) +
                                  " does not match store dimension " + std::to_string(dim_));
        }
        if (item.metadata.company.empty() || item.metadata.doc_id.empty()) {
            throw ValidationError("chunk " + item.chunk.chunk_id +
                                  ": metadata company and doc_id must be non-empty");
        }
        double ss = 0.0;
        for (const double x : item.vector.values) {
            if (!std::isfinite(x)) {
                throw ValidationError("chunk " + item.chunk.chunk_id + ": non-finite vector value");
            }
            ss += x * x;
        }
        if (std::abs(std::sqrt(ss) - 1.0) > 1e-9) {
            throw ValidationError("chunk " + item.chunk.chunk_id + ": vector is not unit-norm");
        }
    }

    std::size_t dim_;
    std::vector<EmbeddedChunk> chunks_;
    std::unordered_map<std::string, std::size_t> index_by_id_;
    mutable std::shared_mutex mutex_;
};

}  // namespace finrag
