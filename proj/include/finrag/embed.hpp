#pragma once

// Embedding vectors and providers. The deterministic local provider hashes
// tokens into sign buckets (feature hashing) and exists so the whole pipeline
// runs offline and reproducibly; the remote provider speaks a minimal JSON
// protocol. Every vector is L2-normalized on receipt, so cosine similarity is
// a plain dot product everywhere downstream.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "finrag/detail/http.hpp"
#include "finrag/error.hpp"

namespace finrag {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
};

enum class EmbeddingProviderKind { deterministic_local, http_remote };

struct EmbeddingProviderSpec {
    EmbeddingProviderKind kind = EmbeddingProviderKind::deterministic_local;
    std::size_t dim = 256;
    std::string endpoint;  // required for http_remote
    std::string model_name;
    std::chrono::milliseconds timeout{10000};
    std::size_t max_batch = 64;

    void validate() const {
        if (dim == 0) throw ValidationError("embedding dim must be positive");
        if (max_batch == 0) throw ValidationError("max_batch must be positive");
        const bool remote = kind == EmbeddingProviderKind::http_remote;
        if (remote && endpoint.empty()) {
            throw ValidationError("http_remote embedding provider requires an endpoint");
        }
        if (!remote && !endpoint.empty()) {
            throw ValidationError("endpoint only applies to http_remote embedding providers");
        }
    }
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace detail

// Dot product of equal-dimension vectors, clamped into [-1, 1]. Exact for the
// unit vectors this library produces.
inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw ValidationError("cosine_similarity: dimension mismatch (" + std::to_string(a.dim()) +
                              " vs " + std::to_string(b.dim()) + ")");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) dot += a.values[i] * b.values[i];
    if (dot > 1.0) return 1.0;
    if (dot < -1.0) return -1.0;
    return dot;
}

inline EmbeddingVector l2_normalized(EmbeddingVector v) {
    double ss = 0.0;
    for (const double x : v.values) {
        if (!std::isfinite(x)) throw ValidationError("embedding vector has a non-finite value");
        ss += x * x;
    }
    const double norm = std::sqrt(ss);
    if (norm == 0.0) throw ValidationError("zero vector cannot be normalized");
    for (double& x : v.values) x /= norm;
    return v;
}

// Deterministic local embedding: ASCII-lowercase, split on anything outside
// [a-z0-9], FNV-1a-hash each token into one of `dim` buckets with a sign bit
// taken from the hash, sum, L2-normalize. A text with no tokens (or a sum
// that cancels to zero) maps to the basis vector e0. Integer hashing only;
// identical output on every platform.
inline EmbeddingVector local_embedding(std::string_view text, std::size_t dim) {
    if (dim == 0) throw ValidationError("embedding dim must be positive");
    std::vector<double> acc(dim, 0.0);

    std::string token;
    auto flush = [&] {
        if (token.empty()) return;
        const std::uint64_t h = detail::fnv1a64(token);
        acc[h % dim] += (h >> 63) ? -1.0 : 1.0;
        token.clear();
    };
    for (const char ch : text) {
        const unsigned char c = static_cast<unsigned char>(ch);
        if (c >= 'A' && c <= 'Z') {
            token.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            token.push_back(static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();

    double ss = 0.0;
    for (const double x : acc) ss += x * x;
    if (ss == 0.0) {
        acc[0] = 1.0;
        return {std::move(acc)};
    }
    return l2_normalized({std::move(acc)});
}

namespace detail {

inline std::vector<EmbeddingVector> embed_remote(const std::vector<std::string>& texts,
                                                 const EmbeddingProviderSpec& provider) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (std::size_t offset = 0; offset < texts.size(); offset += provider.max_batch) {
        const std::size_t count = std::min(provider.max_batch, texts.size() - offset);
        nlohmann::json body = {
            {"model", provider.model_name},
            {"texts", std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(offset),
                                               texts.begin() + static_cast<std::ptrdiff_t>(offset + count))},
        };
        const nlohmann::json resp = post_json(provider.endpoint, body, provider.timeout);

        const auto it = resp.find("embeddings");
        if (it == resp.end() || !it->is_array() || it->size() != count) {
            throw ProtocolError("embedding response missing \"embeddings\" array of batch size");
        }
        for (const nlohmann::json& row : *it) {
            if (!row.is_array() || row.size() != provider.dim) {
                throw ProtocolError("embedding dimension mismatch: expected " +
                                    std::to_string(provider.dim) + ", got " +
                                    std::to_string(row.size()));
            }
            EmbeddingVector v;
            v.values.reserve(provider.dim);
            for (const nlohmann::json& x : row) {
                if (!x.is_number()) throw ProtocolError("embedding value is not a number");
                v.values.push_back(x.get<double>());
            }
            double ss = 0.0;
            for (const double x : v.values) ss += x * x;
            if (!(ss > 0.0) || !std::isfinite(ss)) {
                throw ProtocolError("provider returned a zero or non-finite embedding");
            }
            out.push_back(l2_normalized(std::move(v)));
        }
    }
    return out;
}

}  // namespace detail

// One unit vector per input text, same order, all of dimension provider.dim.
inline std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts,
                                                const EmbeddingProviderSpec& provider) {
    provider.validate();
    for (const std::string& t : texts) {
        if (t.empty()) throw ValidationError("embed_texts: empty input text");
    }
    if (provider.kind == EmbeddingProviderKind::http_remote) {
        return detail::embed_remote(texts, provider);
    }
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) out.push_back(local_embedding(t, provider.dim));
    return out;
}

}  // namespace finrag
