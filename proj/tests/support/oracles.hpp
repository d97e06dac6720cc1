#pragma once

// Independent reference implementations used to cross-check the library.
// Deliberately naive: direct definitions, exhaustive enumeration, and
// from-scratch recomputation. Test-only; must never call into the code paths
// they verify.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <finrag/embed.hpp>
#include <finrag/store.hpp>

namespace finrag::testsupport {

// Jaro from the definition: collect matches inside the window, then count
// order mismatches between the two matched-character sequences.
inline double oracle_jaro(const std::string& s1, const std::string& s2) {
    if (s1.empty() && s2.empty()) return 1.0;
    if (s1.empty() || s2.empty()) return 0.0;
    const long len1 = static_cast<long>(s1.size());
    const long len2 = static_cast<long>(s2.size());
    const long window = std::max(0L, std::max(len1, len2) / 2 - 1);

    std::vector<bool> used2(s2.size(), false);
    std::vector<long> matched1;
    std::vector<long> matched2;
    for (long i = 0; i < len1; ++i) {
        const long lo = std::max(0L, i - window);
        const long hi = std::min(len2 - 1, i + window);
        for (long j = lo; j <= hi; ++j) {
            if (!used2[static_cast<std::size_t>(j)] && s1[static_cast<std::size_t>(i)] ==
                                                           s2[static_cast<std::size_t>(j)]) {
                used2[static_cast<std::size_t>(j)] = true;
                matched1.push_back(i);
                matched2.push_back(j);
                break;
            }
        }
    }
    const double m = static_cast<double>(matched1.size());
    if (matched1.empty()) return 0.0;

    std::vector<long> in_s2_order = matched2;
    std::sort(in_s2_order.begin(), in_s2_order.end());
    long mismatched = 0;
    for (std::size_t k = 0; k < matched1.size(); ++k) {
        if (s1[static_cast<std::size_t>(matched1[k])] !=
            s2[static_cast<std::size_t>(in_s2_order[k])]) {
            ++mismatched;
        }
    }
    const double t = static_cast<double>(mismatched) / 2.0;
    return (m / static_cast<double>(len1) + m / static_cast<double>(len2) + (m - t) / m) / 3.0;
}

inline bool is_subsequence(const std::string& needle, const std::string& haystack) {
    std::size_t i = 0;
    for (const char c : haystack) {
        if (i < needle.size() && needle[i] == c) ++i;
    }
    return i == needle.size();
}

// Exponential brute force: enumerate every subsequence of the shorter string
// and keep the longest one contained in the other. Only for short inputs.
inline std::size_t oracle_lcs_bruteforce(const std::string& a, const std::string& b) {
    const std::string& shorter = a.size() <= b.size() ? a : b;
    const std::string& longer = a.size() <= b.size() ? b : a;
    const std::size_t n = shorter.size();
    std::size_t best = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        std::string sub;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) sub.push_back(shorter[i]);
        }
        if (sub.size() > best && is_subsequence(sub, longer)) best = sub.size();
    }
    return best;
}

// Step-by-step greedy MMR, recomputing the redundancy max from scratch every
// round. Returns the selected chunk_ids in pick order.
inline std::vector<std::string> oracle_mmr(const std::vector<ScoredChunk>& candidates,
                                           double lambda, std::size_t n) {
    std::vector<std::size_t> selected;
    std::vector<bool> taken(candidates.size(), false);
    const std::size_t take = std::min(n, candidates.size());
    while (selected.size() < take) {
        std::size_t best = candidates.size();
        double best_score = 0.0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (taken[i]) continue;
            double score;
            if (selected.empty()) {
                score = candidates[i].score;
            } else {
                double redundancy = -2.0;
                for (const std::size_t s : selected) {
                    redundancy = std::max(redundancy,
                                          cosine_similarity(candidates[i].chunk.vector,
                                                            candidates[s].chunk.vector));
                }
                score = lambda * candidates[i].score - (1.0 - lambda) * redundancy;
            }
            if (best == candidates.size() || score > best_score ||
                (score == best_score &&
                 candidates[i].chunk.chunk.chunk_id < candidates[best].chunk.chunk.chunk_id)) {
                best = i;
                best_score = score;
            }
        }
        taken[best] = true;
        selected.push_back(best);
    }
    std::vector<std::string> ids;
    ids.reserve(selected.size());
    for (const std::size_t s : selected) ids.push_back(candidates[s].chunk.chunk.chunk_id);
    return ids;
}

// Plain top-n by relevance with the same tie-breaking as the store.
inline std::vector<std::string> oracle_top_n_by_relevance(
    const std::vector<ScoredChunk>& candidates, std::size_t n) {
    std::vector<const ScoredChunk*> sorted;
    sorted.reserve(candidates.size());
    for (const ScoredChunk& c : candidates) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(), [](const ScoredChunk* a, const ScoredChunk* b) {
        if (a->score != b->score) return a->score > b->score;
        return a->chunk.chunk.chunk_id < b->chunk.chunk.chunk_id;
    });
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < std::min(n, sorted.size()); ++i) {
        ids.push_back(sorted[i]->chunk.chunk.chunk_id);
    }
    return ids;
}

// Brute-force scoring and ordering oracle for filtered_top_k.
inline std::vector<std::pair<std::string, double>> oracle_filtered_top_k(
    const std::vector<EmbeddedChunk>& all, const EmbeddingVector& query,
    const MetadataFilter& filter, std::size_t k) {
    std::vector<std::pair<std::string, double>> scored;
    for (const EmbeddedChunk& c : all) {
        if (!filter.matches(c.metadata)) continue;
        scored.emplace_back(c.chunk.chunk_id, cosine_similarity(query, c.vector));
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

// Deterministic pseudo-random helpers for property tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }

    // Uniform-ish double in [-1, 1].
    double unit_interval_signed() {
        return static_cast<double>(engine_() >> 11) / static_cast<double>(1ULL << 53) * 2.0 - 1.0;
    }

    EmbeddingVector unit_vector(std::size_t dim) {
        EmbeddingVector v;
        v.values.resize(dim);
        while (true) {
            double ss = 0.0;
            for (double& x : v.values) {
                x = unit_interval_signed();
                ss += x * x;
            }
            if (ss > 1e-12) {
                const double norm = std::sqrt(ss);
                for (double& x : v.values) x /= norm;
                return v;
            }
        }
    }

    std::string string_over(const std::string& alphabet, std::size_t length) {
        std::string s;
        s.reserve(length);
        for (std::size_t i = 0; i < length; ++i) s.push_back(alphabet[below(alphabet.size())]);
        return s;
    }

private:
    std::mt19937_64 engine_;
};

inline EmbeddedChunk make_chunk(const std::string& chunk_id, const std::string& doc_id,
                                std::size_t seq, EmbeddingVector vector,
                                const std::string& company, const std::string& text = "x") {
    EmbeddedChunk c;
    c.chunk.chunk_id = chunk_id;
    c.chunk.doc_id = doc_id;
    c.chunk.seq = seq;
    c.chunk.begin = 0;
    c.chunk.end = text.size();
    c.chunk.text = text;
    c.vector = std::move(vector);
    c.metadata = {company, "Sector", "FY2024-Q1", doc_id};
    return c;
}

}  // namespace finrag::testsupport
