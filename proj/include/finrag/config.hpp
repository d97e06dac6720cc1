#pragma once

// Global engine configuration, loadable from a single JSON file. Defaults
// carry the standard run parameters: chunk_size 1024, chunk_overlap 0,
// fetch_k 20, select_n 4, max_output_tokens 1024.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "finrag/chunker.hpp"
#include "finrag/embed.hpp"
#include "finrag/error.hpp"
#include "finrag/metrics.hpp"
#include "finrag/qa.hpp"
#include "finrag/retriever.hpp"

namespace finrag {

namespace detail {

inline std::string embedding_kind_name(EmbeddingProviderKind k) {
    return k == EmbeddingProviderKind::http_remote ? "http_remote" : "deterministic_local";
}

inline EmbeddingProviderKind parse_embedding_kind(const std::string& s) {
    if (s == "deterministic_local") return EmbeddingProviderKind::deterministic_local;
    if (s == "http_remote") return EmbeddingProviderKind::http_remote;
    throw ValidationError("unknown embedding provider kind: " + s);
}

inline std::string completion_kind_name(CompletionProviderKind k) {
    return k == CompletionProviderKind::http_remote ? "http_remote" : "echo_context";
}

inline CompletionProviderKind parse_completion_kind(const std::string& s) {
    if (s == "echo_context") return CompletionProviderKind::echo_context;
    if (s == "http_remote") return CompletionProviderKind::http_remote;
    throw ValidationError("unknown completion provider kind: " + s);
}

inline std::string scorer_kind_name(SequenceScorerKind k) {
    return k == SequenceScorerKind::http_remote ? "http_remote" : "fixed_stub";
}

inline SequenceScorerKind parse_scorer_kind(const std::string& s) {
    if (s == "fixed_stub") return SequenceScorerKind::fixed_stub;
    if (s == "http_remote") return SequenceScorerKind::http_remote;
    throw ValidationError("unknown sequence scorer kind: " + s);
}

template <typename T>
void read_if_present(const nlohmann::json& j, const char* key, T& out) {
    const auto it = j.find(key);
    if (it != j.end()) out = it->get<T>();
}

}  // namespace detail

struct EngineConfig {
    std::size_t chunk_size = 1024;
    std::size_t chunk_overlap = 0;
    std::vector<std::string> separators = SplitterConfig::default_separators();
    std::size_t fetch_k = 20;
    std::size_t select_n = 4;
    double lambda = 0.5;
    std::size_t max_output_tokens = 1024;
    std::size_t parallelism = 4;  // bound on concurrent provider calls
    EmbeddingProviderSpec embedding_provider;
    CompletionProviderSpec completion_provider;
    std::optional<SequenceScorerSpec> sequence_scorer;

    SplitterConfig splitter() const { return {chunk_size, chunk_overlap, separators}; }

    RetrieverConfig retriever() const { return {fetch_k, select_n, lambda}; }

    CompletionProviderSpec completion() const {
        CompletionProviderSpec spec = completion_provider;
        spec.max_output_tokens = max_output_tokens;
        return spec;
    }

    // The token embedder reuses the embedding provider, applied per token.
    MetricProviders metric_providers() const {
        MetricProviders providers;
        providers.token_embedder = embedding_provider;
        providers.sequence_scorer = sequence_scorer;
        return providers;
    }

    void validate() const {
        splitter().validate();
        retriever().validate();
        embedding_provider.validate();
        completion().validate();
        if (sequence_scorer) sequence_scorer->validate();
        if (parallelism == 0) throw ValidationError("parallelism must be positive");
    }

    nlohmann::json to_json() const {
        nlohmann::json j = {
            {"chunk_size", chunk_size},
            {"chunk_overlap", chunk_overlap},
            {"separators", separators},
            {"fetch_k", fetch_k},
            {"select_n", select_n},
            {"lambda", lambda},
            {"max_output_tokens", max_output_tokens},
            {"parallelism", parallelism},
            {"embedding_provider",
             {{"kind", detail::embedding_kind_name(embedding_provider.kind)},
              {"dim", embedding_provider.dim},
              {"endpoint", embedding_provider.endpoint},
              {"model_name", embedding_provider.model_name},
              {"timeout_ms", embedding_provider.timeout.count()},
              {"max_batch", embedding_provider.max_batch}}},
            {"completion_provider",
             {{"kind", detail::completion_kind_name(completion_provider.kind)},
              {"endpoint", completion_provider.endpoint},
              {"model_name", completion_provider.model_name},
              {"timeout_ms", completion_provider.timeout.count()}}},
        };
        if (sequence_scorer) {
            j["sequence_scorer"] = {{"kind", detail::scorer_kind_name(sequence_scorer->kind)},
                                    {"fixed_value", sequence_scorer->fixed_value},
                                    {"endpoint", sequence_scorer->endpoint},
                                    {"model_name", sequence_scorer->model_name},
                                    {"timeout_ms", sequence_scorer->timeout.count()}};
        }
        return j;
    }

    static EngineConfig from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw ValidationError("config must be a JSON object");
        EngineConfig cfg;
        detail::read_if_present(j, "chunk_size", cfg.chunk_size);
        detail::read_if_present(j, "chunk_overlap", cfg.chunk_overlap);
        detail::read_if_present(j, "separators", cfg.separators);
        detail::read_if_present(j, "fetch_k", cfg.fetch_k);
        detail::read_if_present(j, "select_n", cfg.select_n);
        detail::read_if_present(j, "lambda", cfg.lambda);
        detail::read_if_present(j, "max_output_tokens", cfg.max_output_tokens);
        detail::read_if_present(j, "parallelism", cfg.parallelism);
        if (const auto it = j.find("embedding_provider"); it != j.end()) {
            std::string kind = detail::embedding_kind_name(cfg.embedding_provider.kind);
            detail::read_if_present(*it, "kind", kind);
            cfg.embedding_provider.kind = detail::parse_embedding_kind(kind);
            detail::read_if_present(*it, "dim", cfg.embedding_provider.dim);
            detail::read_if_present(*it, "endpoint", cfg.embedding_provider.endpoint);
            detail::read_if_present(*it, "model_name", cfg.embedding_provider.model_name);
            std::int64_t timeout_ms = cfg.embedding_provider.timeout.count();
            detail::read_if_present(*it, "timeout_ms", timeout_ms);
            cfg.embedding_provider.timeout = std::chrono::milliseconds(timeout_ms);
            detail::read_if_present(*it, "max_batch", cfg.embedding_provider.max_batch);
        }
        if (const auto it = j.find("completion_provider"); it != j.end()) {
            std::string kind = detail::completion_kind_name(cfg.completion_provider.kind);
            detail::read_if_present(*it, "kind", kind);
            cfg.completion_provider.kind = detail::parse_completion_kind(kind);
            detail::read_if_present(*it, "endpoint", cfg.completion_provider.endpoint);
            detail::read_if_present(*it, "model_name", cfg.completion_provider.model_name);
            std::int64_t timeout_ms = cfg.completion_provider.timeout.count();
            detail::read_if_present(*it, "timeout_ms", timeout_ms);
            cfg.completion_provider.timeout = std::chrono::milliseconds(timeout_ms);
        }
        if (const auto it = j.find("sequence_scorer"); it != j.end() && !it->is_null()) {
            SequenceScorerSpec scorer;
            std::string kind = detail::scorer_kind_name(scorer.kind);
            detail::read_if_present(*it, "kind", kind);
            scorer.kind = detail::parse_scorer_kind(kind);
            detail::read_if_present(*it, "fixed_value", scorer.fixed_value);
            detail::read_if_present(*it, "endpoint", scorer.endpoint);
            detail::read_if_present(*it, "model_name", scorer.model_name);
            std::int64_t timeout_ms = scorer.timeout.count();
            detail::read_if_present(*it, "timeout_ms", timeout_ms);
            scorer.timeout = std::chrono::milliseconds(timeout_ms);
            cfg.sequence_scorer = std::move(scorer);
        }
        cfg.validate();
        return cfg;
    }

    static EngineConfig load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read config file: " + path.string());
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) throw ValidationError("config file is not valid JSON: " + path.string());
        return from_json(j);
    }

    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoError("cannot write config file: " + path.string());
        out << to_json().dump(2) << '\n';
        if (!out) throw IoError("write failed: " + path.string());
    }
};

}  // namespace finrag
