#pragma once

// Evaluation driver: builds stores from manifests, runs a QA set with or
// without metadata filtering, aggregates the per-pair metrics, and renders
// comparison tables.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "finrag/config.hpp"
#include "finrag/corpus.hpp"
#include "finrag/error.hpp"
#include "finrag/metrics.hpp"
#include "finrag/qa.hpp"
#include "finrag/store.hpp"

namespace finrag {

struct QAPair {
    std::string question;
    std::string company;
    std::string ground_truth;
};

// JSONL, one {question, company, ground_truth} record per line.
inline std::vector<QAPair> load_qa_set(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read QA set: " + path.string());
    std::vector<QAPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object()) {
            throw ValidationError("QA set line " + std::to_string(line_no) +
                                  ": not a JSON object");
        }
        QAPair pair;
        try {
            pair.question = rec.at("question").get<std::string>();
            pair.company = rec.at("company").get<std::string>();
            pair.ground_truth = rec.at("ground_truth").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("QA set line " + std::to_string(line_no) + ": " + e.what());
        }
        if (pair.question.empty() || pair.company.empty() || pair.ground_truth.empty()) {
            throw ValidationError("QA set line " + std::to_string(line_no) +
                                  ": question, company, and ground_truth must be non-empty");
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

enum class EvalMode { with_metadata, without_metadata };

inline const char* eval_mode_label(EvalMode mode) {
    return mode == EvalMode::with_metadata ? "with_metadata" : "without_metadata";
}

// Arithmetic means over the per-pair reports; provider-backed metrics
// average only their present values, with the contributing count kept.
struct MetricMeans {
    double jaro = 0.0;
    double lcs_similarity = 0.0;
    double lcs_word_count = 0.0;
    std::optional<double> bertscore_f1;
    std::size_t bertscore_n = 0;
    std::optional<double> bartscore;
    std::size_t bartscore_n = 0;
};

struct EvalReport {
    std::string run_label;
    std::vector<MetricReport> per_pair;
    MetricMeans means;
    std::size_t n_pairs = 0;
    // Fraction of answers whose retrieved chunks all belong to the queried
    // company; the run-level view of the hallucination claim.
    double retrieval_precision = 0.0;
};

inline MetricMeans compute_means(const std::vector<MetricReport>& per_pair) {
    MetricMeans means;
    if (per_pair.empty()) return means;
    double bert_sum = 0.0;
    double bart_sum = 0.0;
    for (const MetricReport& r : per_pair) {
        means.jaro += r.jaro;
        means.lcs_similarity += r.lcs_similarity;
        means.lcs_word_count += static_cast<double>(r.lcs_word_count);
        if (r.bertscore_f1) {
            bert_sum += *r.bertscore_f1;
            ++means.bertscore_n;
        }
        if (r.bartscore) {
            bart_sum += *r.bartscore;
            ++means.bartscore_n;
        }
    }
    const double n = static_cast<double>(per_pair.size());
    means.jaro /= n;
    means.lcs_similarity /= n;
    means.lcs_word_count /= n;
    if (means.bertscore_n > 0) {
        means.bertscore_f1 = bert_sum / static_cast<double>(means.bertscore_n);
    }
    if (means.bartscore_n > 0) {
        means.bartscore = bart_sum / static_cast<double>(means.bartscore_n);
    }
    return means;
}

// Evaluates every pair: with_metadata filters on the pair's company,
// without_metadata queries the pooled store with an empty filter. Pairs run
// with bounded parallelism; results keep input order. A failing answer
// aborts the run, naming the pair index.
inline EvalReport run_eval(const QaEngine& engine, const std::vector<QAPair>& qa_set,
                           const EngineConfig& cfg, EvalMode mode) {
    const MetricProviders providers = cfg.metric_providers();
    std::vector<MetricReport> per_pair(qa_set.size());
    std::vector<char> precise(qa_set.size(), 0);

    auto evaluate_one = [&](std::size_t i) {
        const QAPair& pair = qa_set[i];
        const Answer ans = mode == EvalMode::with_metadata
                               ? engine.answer(pair.question, pair.company)
                               : engine.answer(pair.question, pair.company,
                                               MetadataFilter::match_all());
        bool all_same_company = true;
        for (const std::string& chunk_id : ans.retrieved_chunk_ids) {
            const auto chunk = engine.store().find_chunk(chunk_id);
            if (!chunk || chunk->metadata.company != pair.company) {
                all_same_company = false;
                break;
            }
        }
        precise[i] = all_same_company ? 1 : 0;
        per_pair[i] = score_pair(ans.text, pair.ground_truth, providers);
    };

    const std::size_t block = cfg.parallelism > 0 ? cfg.parallelism : 1;
    for (std::size_t start = 0; start < qa_set.size(); start += block) {
        const std::size_t stop = std::min(start + block, qa_set.size());
        std::vector<std::future<void>> futures;
        futures.reserve(stop - start);
        for (std::size_t i = start; i < stop; ++i) {
            futures.push_back(std::async(std::launch::async, evaluate_one, i));
        }
        for (std::size_t i = start; i < stop; ++i) {
            try {
                futures[i - start].get();
            } catch (const std::exception& e) {
                throw Error("run_eval aborted at pair " + std::to_string(i) + ": " + e.what());
            }
        }
    }

    EvalReport report;
    report.run_label = eval_mode_label(mode);
    report.per_pair = std::move(per_pair);
    report.means = compute_means(report.per_pair);
    report.n_pairs = qa_set.size();
    std::size_t precise_count = 0;
    for (const char p : precise) precise_count += static_cast<std::size_t>(p);
    report.retrieval_precision = qa_set.empty()
                                     ? 1.0
                                     : static_cast<double>(precise_count) /
                                           static_cast<double>(qa_set.size());
    return report;
}

// Full ingestion pipeline: manifest -> documents -> chunks -> embeddings ->
// store. One insert batch per document.
inline VectorStore build_store(const std::filesystem::path& manifest_path,
                               const EngineConfig& cfg) {
    cfg.validate();
    const std::vector<Document> docs = load_corpus(manifest_path);
    const SplitterConfig splitter_cfg = cfg.splitter();
    VectorStore store(cfg.embedding_provider.dim);
    for (const Document& doc : docs) {
        std::vector<Chunk> chunks = chunk_document(doc, splitter_cfg);
        if (chunks.empty()) continue;
        std::vector<std::string> texts;
        texts.reserve(chunks.size());
        for (const Chunk& c : chunks) texts.push_back(c.text);
        std::vector<EmbeddingVector> vectors = embed_texts(texts, cfg.embedding_provider);
        std::vector<EmbeddedChunk> batch;
        batch.reserve(chunks.size());
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            batch.push_back({std::move(chunks[i]), std::move(vectors[i]),
                             {doc.company, doc.sector, doc.quarter, doc.doc_id}});
        }
        store.insert(std::move(batch));
    }
    return store;
}

namespace detail {

// Shortest round-trip decimal form; keeps CSV output bit-stable.
inline std::string format_double(double v) {
    char buf[40];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

inline std::string fixed4(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << v;
    return out.str();
}

inline std::string fixed4_optional(const std::optional<double>& v) {
    return v ? fixed4(*v) : std::string("-");
}

}  // namespace detail

inline constexpr const char* kReportCsvHeader =
    "run_label,bertscore_f1,bartscore,jaro_similarity,lcs_similarity,lcs_word_count,"
    "retrieval_precision,n_pairs,bertscore_n,bartscore_n";

// One CSV row per run; column order follows the standard comparison table
// with retrieval_precision and the contribution counts appended.
inline std::string report_table_csv(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw ValidationError("report_table_csv: need at least one report");
    std::string out = std::string(kReportCsvHeader) + "\n";
    for (const EvalReport& r : reports) {
        out += r.run_label + "," + detail::format_optional(r.means.bertscore_f1) + "," +
               detail::format_optional(r.means.bartscore) + "," +
               detail::format_double(r.means.jaro) + "," +
               detail::format_double(r.means.lcs_similarity) + "," +
               detail::format_double(r.means.lcs_word_count) + "," +
               detail::format_double(r.retrieval_precision) + "," + std::to_string(r.n_pairs) +
               "," + std::to_string(r.means.bertscore_n) + "," +
               std::to_string(r.means.bartscore_n) + "\n";
    }
    return out;
}

inline std::string report_table_text(const std::vector<EvalReport>& reports) {
    if (reports.empty()) throw ValidationError("report_table_text: need at least one report");
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"run_label", "BERTScore", "BARTScore", "Jaro", "LCS-sim", "LCS-words",
                    "retr-precision", "pairs"});
    for (const EvalReport& r : reports) {
        rows.push_back({r.run_label, detail::fixed4_optional(r.means.bertscore_f1),
                        detail::fixed4_optional(r.means.bartscore), detail::fixed4(r.means.jaro),
                        detail::fixed4(r.means.lcs_similarity),
                        detail::fixed4(r.means.lcs_word_count),
                        detail::fixed4(r.retrieval_precision), std::to_string(r.n_pairs)});
    }
    std::vector<std::size_t> widths(rows[0].size(), 0);
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += row[c];
            if (c + 1 < row.size()) out += std::string(widths[c] - row[c].size() + 2, ' ');
        }
        out += "\n";
    }
    return out;
}

inline constexpr int kReportFormatVersion = 1;

inline void save_report(const EvalReport& report, const std::filesystem::path& path) {
    nlohmann::json per_pair = nlohmann::json::array();
    for (const MetricReport& r : report.per_pair) {
        nlohmann::json rec = {
            {"jaro", r.jaro},
            {"lcs_similarity", r.lcs_similarity},
            {"lcs_word_count", r.lcs_word_count},
            {"bertscore_f1", r.bertscore_f1 ? nlohmann::json(*r.bertscore_f1) : nlohmann::json()},
            {"bartscore", r.bartscore ? nlohmann::json(*r.bartscore) : nlohmann::json()},
            {"notes", r.notes},
        };
        per_pair.push_back(std::move(rec));
    }
    const nlohmann::json j = {
        {"format_version", kReportFormatVersion},
        {"run_label", report.run_label},
        {"n_pairs", report.n_pairs},
        {"retrieval_precision", report.retrieval_precision},
        {"means",
         {{"jaro", report.means.jaro},
          {"lcs_similarity", report.means.lcs_similarity},
          {"lcs_word_count", report.means.lcs_word_count},
          {"bertscore_f1",
           report.means.bertscore_f1 ? nlohmann::json(*report.means.bertscore_f1)
                                     : nlohmann::json()},
          {"bertscore_n", report.means.bertscore_n},
          {"bartscore",
           report.means.bartscore ? nlohmann::json(*report.means.bartscore) : nlohmann::json()},
          {"bartscore_n", report.means.bartscore_n}}},
        {"per_pair", per_pair},
    };
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write report: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

inline EvalReport load_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read report: " + path.string());
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw IoError("malformed report: " + path.string());
    try {
        if (j.at("format_version").get<int>() != kReportFormatVersion) {
            throw IoError("unsupported report format_version: " + path.string());
        }
        EvalReport report;
        report.run_label = j.at("run_label").get<std::string>();
        report.n_pairs = j.at("n_pairs").get<std::size_t>();
        report.retrieval_precision = j.at("retrieval_precision").get<double>();
        const nlohmann::json& means = j.at("means");
        report.means.jaro = means.at("jaro").get<double>();
        report.means.lcs_similarity = means.at("lcs_similarity").get<double>();
        report.means.lcs_word_count = means.at("lcs_word_count").get<double>();
        if (!means.at("bertscore_f1").is_null()) {
            report.means.bertscore_f1 = means.at("bertscore_f1").get<double>();
        }
        report.means.bertscore_n = means.at("bertscore_n").get<std::size_t>();
        if (!means.at("bartscore").is_null()) {
            report.means.bartscore = means.at("bartscore").get<double>();
        }
        report.means.bartscore_n = means.at("bartscore_n").get<std::size_t>();
        for (const nlohmann::json& rec : j.at("per_pair")) {
            MetricReport r;
            r.jaro = rec.at("jaro").get<double>();
            r.lcs_similarity = rec.at("lcs_similarity").get<double>();
            r.lcs_word_count = rec.at("lcs_word_count").get<std::size_t>();
            if (!rec.at("bertscore_f1").is_null()) {
                r.bertscore_f1 = rec.at("bertscore_f1").get<double>();
            }
            if (!rec.at("bartscore").is_null()) r.bartscore = rec.at("bartscore").get<double>();
            r.notes = rec.at("notes").get<std::vector<std::string>>();
            report.per_pair.push_back(std::move(r));
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed report " + path.string() + ": " + e.what());
    }
}

}  // namespace finrag
