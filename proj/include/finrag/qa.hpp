#pragma once

// Prompt assembly and answer generation. The echo_context provider returns
// the retrieved context verbatim, which makes end-to-end behavior fully
// deterministic and testable offline; http_remote talks to a hosted
// completion service.

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "finrag/detail/http.hpp"
#include "finrag/error.hpp"
#include "finrag/retriever.hpp"
#include "finrag/store.hpp"

namespace finrag {

// Returned instead of a generated answer when retrieval matches nothing.
inline constexpr const char* kRefusalText =
    "No relevant documents found for the requested company.";

// Bump when the prompt template below changes; recorded so evaluation runs
// stay comparable.
inline constexpr int kPromptTemplateVersion = 1;

enum class CompletionProviderKind { echo_context, http_remote };

struct CompletionProviderSpec {
    CompletionProviderKind kind = CompletionProviderKind::echo_context;
    std::string endpoint;  // required for http_remote
    std::string model_name;
    std::size_t max_output_tokens = 1024;
    std::chrono::milliseconds timeout{30000};

    void validate() const {
        if (max_output_tokens == 0) throw ValidationError("max_output_tokens must be positive");
        const bool remote = kind == CompletionProviderKind::http_remote;
        if (remote && endpoint.empty()) {
            throw ValidationError("http_remote completion provider requires an endpoint");
        }
        if (!remote && !endpoint.empty()) {
            throw ValidationError("endpoint only applies to http_remote completion providers");
        }
    }
};

struct Answer {
    std::string question;
    std::string company;
    std::string text;
    std::vector<std::string> retrieved_chunk_ids;  // provenance, in MMR order
    bool no_context = false;  // true iff retrieval was empty and text is the refusal
};

// Deterministic prompt: fixed instruction header, one "[doc_id:seq] <text>"
// line per chunk in retrieval order, then the question. Chunk text is never
// reordered or truncated.
inline std::string build_prompt(const std::string& question,
                                const std::vector<EmbeddedChunk>& chunks) {
    std::string prompt =
        "Answer the question using only the context passages below. "
        "If the context does not contain the answer, say that it is not covered.\n\n";
    for (const EmbeddedChunk& c : chunks) {
        prompt += "[" + c.chunk.doc_id + ":" + std::to_string(c.chunk.seq) + "] " + c.chunk.text +
                  "\n";
    }
    prompt += "\nQuestion: " + question + "\nAnswer:";
    return prompt;
}

struct CompletionRequest {
    std::string prompt;
    std::vector<std::string> context_texts;  // consumed only by echo_context
};

inline std::string complete(const CompletionRequest& request,
                            const CompletionProviderSpec& provider) {
    provider.validate();
    if (provider.kind == CompletionProviderKind::echo_context) {
        std::string text;
        for (const std::string& t : request.context_texts) text += t;
        return text;
    }
    const nlohmann::json body = {
        {"model", provider.model_name},
        {"prompt", request.prompt},
        {"max_output_tokens", provider.max_output_tokens},
    };
    const nlohmann::json resp = detail::post_json(provider.endpoint, body, provider.timeout);
    const auto it = resp.find("text");
    if (it == resp.end() || !it->is_string()) {
        throw ProtocolError("completion response missing string field \"text\"");
    }
    return it->get<std::string>();
}

// Binds a store snapshot to the retrieval and provider configuration.
// answer() is const and safe to call concurrently.
class QaEngine {
public:
    QaEngine(const VectorStore& store, RetrieverConfig retriever_cfg,
             EmbeddingProviderSpec embedder, CompletionProviderSpec completion)
        : store_(&store),
          retriever_cfg_(retriever_cfg),
          embedder_(std::move(embedder)),
          completion_(std::move(completion)) {
        retriever_cfg_.validate();
        embedder_.validate();
        completion_.validate();
    }

    const VectorStore& store() const { return *store_; }

    // Standard path: filter on the question's company.
    Answer answer(const std::string& question, const std::string& company) const {
        return answer(question, company, MetadataFilter::for_company(company));
    }

    // Explicit-filter path; the evaluation harness passes an empty filter
    // here for the no-metadata ablation. Retrieval that matches nothing
    // yields a refusal without any provider call.
    Answer answer(const std::string& question, const std::string& company,
                  const MetadataFilter& filter) const {
        const RetrievalResult retrieved = retrieve(*store_, question, filter, retriever_cfg_,
                                                   embedder_);
        Answer ans;
        ans.question = question;
        ans.company = company;
        if (retrieved.no_match) {
            ans.text = kRefusalText;
            ans.no_context = true;
            return ans;
        }
        CompletionRequest request;
        request.context_texts.reserve(retrieved.chunks.size());
        for (const EmbeddedChunk& c : retrieved.chunks) {
            ans.retrieved_chunk_ids.push_back(c.chunk.chunk_id);
            request.context_texts.push_back(c.chunk.text);
        }
        request.prompt = build_prompt(question, retrieved.chunks);
        ans.text = complete(request, completion_);
        return ans;
    }

private:
    const VectorStore* store_;
    RetrieverConfig retriever_cfg_;
    EmbeddingProviderSpec embedder_;
    CompletionProviderSpec completion_;
};

}  // namespace finrag
