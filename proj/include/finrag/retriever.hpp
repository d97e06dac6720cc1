#pragma once

// Maximal Marginal Relevance re-ranking over the metadata-filtered candidate
// pool. The first pick is the plain relevance argmax; every later pick
// maximizes lambda * rel(d) - (1 - lambda) * max over selected s of
// cos(d, s). Ties always break toward the smaller chunk_id.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "finrag/embed.hpp"
#include "finrag/error.hpp"
#include "finrag/store.hpp"

namespace finrag {

struct RetrieverConfig {
    std::size_t fetch_k = 20;   // candidate pool handed to MMR
    std::size_t select_n = 4;   // chunks placed into the prompt
    double lambda = 0.5;        // 1 = pure relevance, 0 = pure novelty

    void validate() const {
        if (fetch_k == 0) throw ValidationError("fetch_k must be positive");
        if (select_n == 0) throw ValidationError("select_n must be positive");
        if (select_n > fetch_k) throw ValidationError("select_n must not exceed fetch_k");
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must be in [0, 1]");
    }
};

// Greedy MMR selection of min(n, |candidates|) chunks, in pick order.
// Candidates carry their query relevance (cosine against the query vector).
inline std::vector<EmbeddedChunk> mmr_select(const EmbeddingVector& query,
                                             const std::vector<ScoredChunk>& candidates,
                                             double lambda, std::size_t n) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must be in [0, 1]");
    if (n == 0) throw ValidationError("mmr_select: n must be at least 1");
    for (const ScoredChunk& c : candidates) {
        if (c.chunk.vector.dim() != query.dim()) {
            throw ValidationError("mmr_select: candidate dimension mismatch");
        }
    }
    if (candidates.empty()) return {};

    const std::size_t count = candidates.size();
    std::vector<bool> used(count, false);
    // max cosine between each candidate and the selected set so far; the
    // first pick ignores it and is therefore the plain relevance argmax.
    std::vector<double> max_sim(count, -std::numeric_limits<double>::infinity());

    std::vector<EmbeddedChunk> selected;
    const std::size_t take = std::min(n, count);
    selected.reserve(take);

    for (std::size_t round = 0; round < take; ++round) {
        std::size_t best = count;
        double best_score = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            if (used[i]) continue;
            const double score = round == 0
                                     ? candidates[i].score
                                     : lambda * candidates[i].score - (1.0 - lambda) * max_sim[i];
            if (best == count || score > best_score ||
                (score == best_score &&
                 candidates[i].chunk.chunk.chunk_id < candidates[best].chunk.chunk.chunk_id)) {
                best = i;
                best_score = score;
            }
        }
        used[best] = true;
        selected.push_back(candidates[best].chunk);
        for (std::size_t i = 0; i < count; ++i) {
            if (used[i]) continue;
            const double sim = cosine_similarity(candidates[i].chunk.vector,
                                                 candidates[best].chunk.vector);
            if (sim > max_sim[i]) max_sim[i] = sim;
        }
    }
    return selected;
}

struct RetrievalResult {
    std::vector<EmbeddedChunk> chunks;  // in MMR pick order
    bool no_match = false;              // filter matched nothing; caller should refuse
};

// Full retrieval pipeline: embed the query, take the filtered top fetch_k by
// cosine, re-rank with MMR, keep select_n. An empty candidate set comes back
// as a distinct no-match signal instead of an answer.
inline RetrievalResult retrieve(const VectorStore& store, const std::string& query,
                                const MetadataFilter& filter, const RetrieverConfig& cfg,
                                const EmbeddingProviderSpec& embedder) {
    cfg.validate();
    const EmbeddingVector query_vec = embed_texts({query}, embedder).front();
    const std::vector<ScoredChunk> pool = store.filtered_top_k(query_vec, filter, cfg.fetch_k);
    if (pool.empty()) return {{}, true};
    return {mmr_select(query_vec, pool, cfg.lambda, cfg.select_n), false};
}

}  // namespace finrag
