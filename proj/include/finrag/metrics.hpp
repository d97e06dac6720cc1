#pragma once

// Answer-quality metrics: Jaro similarity, longest-common-subsequence
// similarity at character and word granularity, greedy-matching BERT-style
// scoring over token embeddings, and a delegating interface for external
// sequence scorers. The string metrics operate on bytes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "finrag/detail/http.hpp"
#include "finrag/embed.hpp"
#include "finrag/error.hpp"

namespace finrag {

// Jaro similarity in [0, 1]. Characters match when equal and within the
// window floor(max_len / 2) - 1 (never below 0); t is half the count of
// matched characters that appear in a different order. Two empty strings
// score 1, no matches score 0.
inline double jaro(std::string_view s1, std::string_view s2) {
    if (s1.empty() && s2.empty()) return 1.0;
    if (s1.empty() || s2.empty()) return 0.0;

    const std::size_t len1 = s1.size();
    const std::size_t len2 = s2.size();
    const std::size_t half = std::max(len1, len2) / 2;
    const std::size_t window = half > 0 ? half - 1 : 0;

    std::vector<char> matched1(len1, 0);
    std::vector<char> matched2(len2, 0);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < len1; ++i) {
        const std::size_t lo = i > window ? i - window : 0;
        const std::size_t hi = std::min(len2, i + window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
            if (!matched2[j] && s1[i] == s2[j]) {
                matched1[i] = 1;
                matched2[j] = 1;
                ++matches;
                break;
            }
        }
    }
    if (matches == 0) return 0.0;

    std::size_t transposed_twice = 0;
    for (std::size_t i = 0, j = 0; i < len1; ++i) {
        if (!matched1[i]) continue;
        while (!matched2[j]) ++j;
        if (s1[i] != s2[j]) ++transposed_twice;
        ++j;
    }

    const double m = static_cast<double>(matches);
    const double t = static_cast<double>(transposed_twice) / 2.0;
    return (m / static_cast<double>(len1) + m / static_cast<double>(len2) + (m - t) / m) / 3.0;
}

// Classic O(|a|*|b|) two-row dynamic program.
template <typename T>
std::size_t lcs_length(std::span<const T> a, std::span<const T> b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            cur[j + 1] = a[i] == b[j] ? prev[j] + 1 : std::max(prev[j + 1], cur[j]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

inline std::size_t lcs_length(std::string_view a, std::string_view b) {
    return lcs_length(std::span<const char>(a.data(), a.size()),
                      std::span<const char>(b.data(), b.size()));
}

// Character LCS length normalized by the longer string; both empty → 1.
inline double lcs_similarity(std::string_view s1, std::string_view s2) {
    if (s1.empty() && s2.empty()) return 1.0;
    const std::size_t denom = std::max(s1.size(), s2.size());
    return static_cast<double>(lcs_length(s1, s2)) / static_cast<double>(denom);
}

// ASCII-lowercased whitespace tokens; punctuation stays inside tokens.
inline std::vector<std::string> lowercase_words(std::string_view s) {
    std::vector<std::string> words;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) words.push_back(std::move(word));
        word.clear();
    };
    for (const char ch : s) {
        const unsigned char c = static_cast<unsigned char>(ch);
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            flush();
        } else if (c >= 'A' && c <= 'Z') {
            word.push_back(static_cast<char>(c - 'A' + 'a'));
        } else {
            word.push_back(ch);
        }
    }
    flush();
    return words;
}

// LCS over whitespace tokens with case-insensitive exact word equality.
inline std::size_t lcs_word_count(std::string_view s1, std::string_view s2) {
    const std::vector<std::string> w1 = lowercase_words(s1);
    const std::vector<std::string> w2 = lowercase_words(s2);
    return lcs_length(std::span<const std::string>(w1), std::span<const std::string>(w2));
}

struct BertScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Greedy token matching over unit-normalized token embeddings: precision is
// the mean over candidate tokens of the best cosine against any reference
// token, recall the symmetric quantity, f1 their harmonic mean. Negative
// best-matches clamp to zero so all components stay in [0, 1]. No idf
// weighting, no baseline rescaling.
inline BertScore bertscore(const std::vector<EmbeddingVector>& candidate_tokens,
                           const std::vector<EmbeddingVector>& reference_tokens) {
    if (candidate_tokens.empty() || reference_tokens.empty()) {
        throw ValidationError("bertscore: token sequences must be non-empty");
    }
    const std::size_t dim = candidate_tokens.front().dim();
    for (const EmbeddingVector& v : candidate_tokens) {
        if (v.dim() != dim) throw ValidationError("bertscore: candidate dimension mismatch");
    }
    for (const EmbeddingVector& v : reference_tokens) {
        if (v.dim() != dim) throw ValidationError("bertscore: reference dimension mismatch");
    }

    auto best_match = [](const EmbeddingVector& v, const std::vector<EmbeddingVector>& others) {
        double best = 0.0;  // clamp at zero
        for (const EmbeddingVector& o : others) {
            best = std::max(best, cosine_similarity(v, o));
        }
        return best;
    };

    double precision = 0.0;
    for (const EmbeddingVector& c : candidate_tokens) precision += best_match(c, reference_tokens);
    precision /= static_cast<double>(candidate_tokens.size());

    double recall = 0.0;
    for (const EmbeddingVector& r : reference_tokens) recall += best_match(r, candidate_tokens);
    recall /= static_cast<double>(reference_tokens.size());

    const double sum = precision + recall;
    const double f1 = sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
    return {precision, recall, f1};
}

enum class SequenceScorerKind { fixed_stub, http_remote };

// External sequence-scoring provider (BART-style average token
// log-likelihood of the candidate given the reference). The fixed_stub kind
// returns a constant and exists for offline tests.
struct SequenceScorerSpec {
    SequenceScorerKind kind = SequenceScorerKind::fixed_stub;
    double fixed_value = 0.0;
    std::string endpoint;  // required for http_remote
    std::string model_name;
    std::chrono::milliseconds timeout{30000};

    void validate() const {
        if (kind == SequenceScorerKind::http_remote && endpoint.empty()) {
            throw ValidationError("http_remote sequence scorer requires an endpoint");
        }
    }
};

// Delegates scoring to the provider and validates the returned value; no
// model runs locally.
inline double bartscore(const std::string& candidate, const std::string& reference,
                        const SequenceScorerSpec& provider) {
    provider.validate();
    double value = 0.0;
    if (provider.kind == SequenceScorerKind::fixed_stub) {
        value = provider.fixed_value;
    } else {
        const nlohmann::json body = {
            {"model", provider.model_name},
            {"candidate", candidate},
            {"reference", reference},
        };
        const nlohmann::json resp = detail::post_json(provider.endpoint, body, provider.timeout);
        const auto it = resp.find("score");
        if (it == resp.end() || !it->is_number()) {
            throw ProtocolError("sequence scorer response missing numeric field \"score\"");
        }
        value = it->get<double>();
    }
    if (!std::isfinite(value)) throw ValidationError("sequence scorer returned a non-finite value");
    return value;
}

// Per-pair scores. Optional fields are absent (never zero) when the backing
// provider is unavailable or failed; notes carry the reason.
struct MetricReport {
    double jaro = 0.0;
    double lcs_similarity = 0.0;
    std::size_t lcs_word_count = 0;
    std::optional<double> bertscore_f1;
    std::optional<double> bartscore;
    std::vector<std::string> notes;
};

struct MetricProviders {
    std::optional<EmbeddingProviderSpec> token_embedder;  // enables bertscore
    std::optional<SequenceScorerSpec> sequence_scorer;    // enables bartscore
};

inline MetricReport score_pair(const std::string& generated, const std::string& ground_truth,
                               const MetricProviders& providers) {
    MetricReport report;
    report.jaro = jaro(generated, ground_truth);
    report.lcs_similarity = lcs_similarity(generated, ground_truth);
    report.lcs_word_count = lcs_word_count(generated, ground_truth);

    if (providers.token_embedder) {
        const std::vector<std::string> cand_tokens = lowercase_words(generated);
        const std::vector<std::string> ref_tokens = lowercase_words(ground_truth);
        if (cand_tokens.empty() || ref_tokens.empty()) {
            report.notes.push_back("bertscore absent: empty token sequence");
        } else {
            try {
                const BertScore score =
                    bertscore(embed_texts(cand_tokens, *providers.token_embedder),
                              embed_texts(ref_tokens, *providers.token_embedder));
                report.bertscore_f1 = score.f1;
            } catch (const Error& e) {
                report.notes.push_back(std::string("bertscore absent: ") + e.what());
            }
        }
    }
    if (providers.sequence_scorer) {
        try {
            report.bartscore = bartscore(generated, ground_truth, *providers.sequence_scorer);
        } catch (const Error& e) {
            report.notes.push_back(std::string("bartscore absent: ") + e.what());
        }
    }
    return report;
}

}  // namespace finrag
