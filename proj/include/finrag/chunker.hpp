#pragma once

// Recursive character splitter. Text is cut on a separator hierarchy
// ("\n\n" before "\n" before " " before per-character windows); separators
// stay attached to the piece they terminate, so at zero overlap the chunk
// texts concatenate back to the input byte-for-byte.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "finrag/corpus.hpp"
#include "finrag/error.hpp"

namespace finrag {

struct SplitterConfig {
    std::size_t chunk_size = 1024;   // characters
    std::size_t chunk_overlap = 0;   // characters carried over from the previous chunk
    std::vector<std::string> separators = default_separators();

    static std::vector<std::string> default_separators() { return {"\n\n", "\n", " ", ""}; }

    void validate() const {
        if (chunk_size == 0) throw ValidationError("chunk_size must be positive");
        if (chunk_overlap >= chunk_size) {
            throw ValidationError("chunk_overlap must be smaller than chunk_size");
        }
        if (separators.empty() || !separators.back().empty()) {
            throw ValidationError("separators must end with the empty string");
        }
    }
};

// Half-open character span [begin, end) plus the covered text.
struct TextPiece {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string text;
};

struct Chunk {
    std::string chunk_id;  // doc_id + ":" + seq
    std::string doc_id;
    std::size_t seq = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string text;
};

namespace detail {

using Span = std::pair<std::size_t, std::size_t>;

// Recursively cuts [begin, end) into spans no longer than `budget`.
// Tries separators[sep_index] first; pieces still too long fall through to
// the next separator, ultimately to the "" separator which cuts fixed
// character windows.
inline void split_spans(std::string_view text, std::size_t begin, std::size_t end,
                        const std::vector<std::string>& separators, std::size_t sep_index,
                        std::size_t budget, std::vector<Span>& out) {
    if (end - begin <= budget) {
        out.emplace_back(begin, end);
        return;
    }
    for (std::size_t i = sep_index; i < separators.size(); ++i) {
        const std::string& sep = separators[i];
        if (sep.empty()) {
            for (std::size_t p = begin; p < end; p += budget) {
                out.emplace_back(p, std::min(p + budget, end));
            }
            return;
        }

        // Boundaries sit just after each separator occurrence, so the
        // separator is retained with the preceding piece.
        std::vector<std::size_t> bounds;
        std::size_t pos = begin;
        while (true) {
            pos = text.find(sep, pos);
            if (pos == std::string_view::npos || pos + sep.size() > end) break;
            pos += sep.size();
            if (pos < end) bounds.push_back(pos);
        }
        if (bounds.empty()) continue;  // separator absent here; try the next one

        std::size_t prev = begin;
        auto emit = [&](std::size_t b, std::size_t e) {
            if (e - b <= budget) {
                out.emplace_back(b, e);
            } else {
                split_spans(text, b, e, separators, i + 1, budget, out);
            }
        };
        for (std::size_t bound : bounds) {
            emit(prev, bound);
            prev = bound;
        }
        emit(prev, end);
        return;
    }
    // Unreachable for a valid config ("" always applies), kept as a hard cut.
    for (std::size_t p = begin; p < end; p += budget) {
        out.emplace_back(p, std::min(p + budget, end));
    }
}

// Greedily merges adjacent spans while the merged length stays within budget.
inline std::vector<Span> merge_adjacent(const std::vector<Span>& spans, std::size_t budget) {
    std::vector<Span> merged;
    for (const Span& s : spans) {
        if (!merged.empty() && s.second - merged.back().first <= budget) {
            merged.back().second = s.second;
        } else {
            merged.push_back(s);
        }
    }
    return merged;
}

}  // namespace detail

// Splits `text` into pieces of at most cfg.chunk_size characters.
//
// The split budget is chunk_size - chunk_overlap, so a piece never exceeds
// chunk_size once its overlap prefix is attached. With chunk_overlap = 0 the
// pieces are disjoint and concatenate to the input exactly; with overlap k
// every piece after the first starts min(k, previous coverage length)
// characters before the end of its predecessor's coverage.
inline std::vector<TextPiece> split_text(std::string_view text, const SplitterConfig& cfg) {
    cfg.validate();
    if (text.empty()) return {};

    const std::size_t budget = cfg.chunk_size - cfg.chunk_overlap;
    std::vector<detail::Span> atoms;
    detail::split_spans(text, 0, text.size(), cfg.separators, 0, budget, atoms);
    const std::vector<detail::Span> coverage = detail::merge_adjacent(atoms, budget);

    std::vector<TextPiece> pieces;
    pieces.reserve(coverage.size());
    std::size_t prev_len = 0;
    for (std::size_t i = 0; i < coverage.size(); ++i) {
        const auto [cov_begin, cov_end] = coverage[i];
        std::size_t start = cov_begin;
        if (i > 0) start -= std::min(cfg.chunk_overlap, prev_len);
        pieces.push_back({start, cov_end, std::string(text.substr(start, cov_end - start))});
        prev_len = cov_end - cov_begin;
    }
    return pieces;
}

// Wraps split_text output in Chunk records; chunk_id = doc_id + ":" + seq.
inline std::vector<Chunk> chunk_document(const Document& doc, const SplitterConfig& cfg) {
    std::vector<TextPiece> pieces = split_text(doc.text, cfg);
    std::vector<Chunk> chunks;
    chunks.reserve(pieces.size());
    for (std::size_t seq = 0; seq < pieces.size(); ++seq) {
        TextPiece& p = pieces[seq];
        chunks.push_back({doc.doc_id + ":" + std::to_string(seq), doc.doc_id, seq, p.begin, p.end,
                          std::move(p.text)});
    }
    return chunks;
}

}  // namespace finrag
