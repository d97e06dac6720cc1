#pragma once

// Loads transcript documents and their metadata from a JSONL manifest.

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "finrag/error.hpp"

namespace finrag {

// One transcript plus the metadata fields used for retrieval filtering.
struct Document {
    std::string doc_id;
    std::string company;  // primary filter key
    std::string sector;
    std::string quarter;  // e.g. "FY2024-Q1"
    std::string source_path;
    std::string text;  // full transcript, UTF-8
};

struct CorpusStats {
    std::size_t count = 0;
    std::optional<double> mean_text_length;  // absent when the corpus is empty
};

namespace detail {

// Strict UTF-8 check: rejects truncated sequences, overlongs, surrogates,
// and code points past U+10FFFF.
inline bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            ++i;
            continue;
        }
        int len = 0;
        unsigned cp = 0;
        unsigned cp_min = 0;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
            cp_min = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
            cp_min = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
            cp_min = 0x10000;
        } else {
            return false;
        }
        if (i + static_cast<std::size_t>(len) > n) return false;
        for (int k = 1; k < len; ++k) {
            const unsigned char cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (cp < cp_min || cp > 0x10FFFF) return false;
        if (cp >= 0xD800 && cp <= 0xDFFF) return false;
        i += static_cast<std::size_t>(len);
    }
    return true;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + path.string());
    return std::move(buf).str();
}

inline std::string require_string(const nlohmann::json& rec, const char* key,
                                  const std::filesystem::path& manifest, std::size_t line_no) {
    auto it = rec.find(key);
    if (it == rec.end() || !it->is_string()) {
        throw ValidationError("manifest " + manifest.string() + " line " + std::to_string(line_no) +
                              ": missing or non-string key \"" + key + "\"");
    }
    return it->get<std::string>();
}

}  // namespace detail

// Reads a JSONL manifest (keys: doc_id, company, sector, quarter, text_path)
// and loads one Document per entry, order preserved. Relative text paths
// resolve against the manifest's directory. Any invalid entry fails the whole
// load; there is no partial corpus.
inline std::vector<Document> load_corpus(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot read manifest: " + manifest_path.string());

    const std::filesystem::path base = manifest_path.has_parent_path()
                                           ? manifest_path.parent_path()
                                           : std::filesystem::path(".");

    std::vector<Document> docs;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            throw ValidationError("manifest " + manifest_path.string() + " line " +
                                  std::to_string(line_no) + ": not a JSON object");
        }

        Document doc;
        doc.doc_id = detail::require_string(rec, "doc_id", manifest_path, line_no);
        doc.company = detail::require_string(rec, "company", manifest_path, line_no);
        doc.sector = detail::require_string(rec, "sector", manifest_path, line_no);
        doc.quarter = detail::require_string(rec, "quarter", manifest_path, line_no);
        const std::string text_path = detail::require_string(rec, "text_path", manifest_path, line_no);

        if (doc.doc_id.empty()) {
            throw ValidationError("manifest line " + std::to_string(line_no) + ": empty doc_id");
        }
        if (doc.company.empty()) {
            throw ValidationError("document " + doc.doc_id + ": empty company");
        }
        if (!seen_ids.insert(doc.doc_id).second) {
            throw ValidationError("duplicate doc_id: " + doc.doc_id);
        }

        std::filesystem::path resolved(text_path);
        if (resolved.is_relative()) resolved = base / resolved;
        doc.source_path = resolved.string();
        doc.text = detail::read_file(resolved);
        if (doc.text.empty()) {
            throw ValidationError("document " + doc.doc_id + ": empty text (" + doc.source_path + ")");
        }
        if (!detail::valid_utf8(doc.text)) {
            throw ValidationError("document " + doc.doc_id + ": text is not valid UTF-8 (" +
                                  doc.source_path + ")");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

inline CorpusStats corpus_stats(const std::vector<Document>& docs) {
    CorpusStats stats;
    stats.count = docs.size();
    if (docs.empty()) return stats;
    double total = 0.0;
    for (const Document& d : docs) total += static_cast<double>(d.text.size());
    stats.mean_text_length = total / static_cast<double>(docs.size());
    return stats;
}

}  // namespace finrag
