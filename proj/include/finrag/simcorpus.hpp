#pragma once

// Seeded synthetic transcript corpus. Every company gets a transcript with
// planted, globally unique fact sentences plus one answer sentence per
// generic question, so wrong-company retrieval is mechanically detectable by
// substring provenance. Generation is byte-deterministic for a given seed.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "finrag/error.hpp"

namespace finrag {

struct SyntheticSpec {
    std::size_t n_companies = 5;
    std::size_t facts_per_company = 4;
    std::uint64_t seed = 0;
    std::vector<std::string> generic_questions = default_generic_questions();

    // Generic questions that apply to every company at once; asking them
    // without a company filter is exactly the cross-document leakage case.
    static std::vector<std::string> default_generic_questions() {
        return {
            "What inquiries did analysts raise in this quarter?",
            "What pertinent details exist regarding industry trends for the quarter?",
            "Provide any insights into mergers and acquisitions (M&A) deliberated during the "
            "call.",
            "What essential and recurring subjects were discussed during the call?",
            "What is the holistic outlook for the business?",
        };
    }

    void validate() const {
        if (n_companies < 2) throw ValidationError("n_companies must be at least 2");
        if (facts_per_company == 0) throw ValidationError("facts_per_company must be positive");
    }
};

struct SyntheticCorpus {
    std::filesystem::path manifest_path;
    std::filesystem::path qa_path;
    std::size_t n_documents = 0;
    std::size_t n_qa_pairs = 0;
};

namespace detail {

// All randomness is drawn as raw engine output (modulo reduced); no standard
// distributions, so the byte stream is identical on every platform.
class SeededText {
public:
    explicit SeededText(std::uint64_t seed) : engine_(seed) {}

    std::size_t pick(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }

    std::string filler_sentence() {
        static const std::vector<std::string> subjects = {
            "The management team", "Our operating committee", "The board",
            "Regional leadership",  "The finance office",
        };
        static const std::vector<std::string> verbs = {
            "reviewed", "discussed", "highlighted", "reiterated", "summarized",
        };
        static const std::vector<std::string> objects = {
            "working capital discipline",  "branch expansion plans",
            "vendor consolidation",        "digital onboarding volumes",
            "seasonal demand patterns",    "logistics and freight costs",
            "capacity utilization levels", "regulatory developments",
        };
        return subjects[pick(subjects.size())] + " " + verbs[pick(verbs.size())] + " " +
               objects[pick(objects.size())] + " during the period.";
    }

    std::string filler_block(std::size_t min_sentences, std::size_t max_sentences) {
        const std::size_t count = min_sentences + pick(max_sentences - min_sentences + 1);
        std::string block;
        for (std::size_t i = 0; i < count; ++i) {
            if (i > 0) block += " ";
            block += filler_sentence();
        }
        return block;
    }

    // Strictly increasing integer payloads keep every planted value unique
    // across the whole corpus.
    std::string next_value() {
        value_ += 3 + pick(97);
        const std::size_t cents = pick(100);
        return std::to_string(value_) + "." + (cents < 10 ? "0" : "") + std::to_string(cents);
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t value_ = 1000;
};

inline std::string ticker_for(std::size_t index) {
    std::string t(3, 'A');
    t[0] = static_cast<char>('A' + (index / 676) % 26);
    t[1] = static_cast<char>('A' + (index / 26) % 26);
    t[2] = static_cast<char>('A' + index % 26);
    return t;
}

struct FactTemplate {
    std::string metric;
    std::string unit;
};

inline FactTemplate fact_template(std::size_t fact_index) {
    static const std::vector<FactTemplate> named = {
        {"total revenue", "crore"},       {"net profit", "crore"},
        {"operating margin", "percent"},  {"capital expenditure", "crore"},
        {"order book", "crore"},          {"export sales", "crore"},
        {"headcount", "employees"},       {"cash reserves", "crore"},
    };
    if (fact_index < named.size()) return named[fact_index];
    return {"segment " + std::to_string(fact_index + 1) + " revenue", "crore"};
}

// Topical answer sentences for the five default generic questions; anything
// beyond falls back to a numbered theme sentence.
inline std::string generic_answer(std::size_t question_index, const std::string& company,
                                  const std::string& value) {
    switch (question_index) {
        case 0:
            return "During the call, analysts raised inquiries covering demand trends, pricing "
                   "pressure, and the order pipeline, and " +
                   company + " management pointed to a pipeline of " + value + " crore.";
        case 1:
            return "On industry trends for the quarter, " + company +
                   " observed overall sector demand expanding by roughly " + value + " percent.";
        case 2:
            return "Regarding mergers and acquisitions, " + company +
                   " confirmed it deliberated a bolt-on opportunity valued near " + value +
                   " crore during the call.";
        case 3:
            return "Recurring subjects during the call included cost discipline, digital "
                   "initiatives, and a " +
                   value + " crore efficiency program at " + company + ".";
        case 4:
            return "The holistic outlook for the business at " + company +
                   " remains constructive, with management guiding toward " + value +
                   " crore of annual revenue.";
        default:
            return "On recurring analyst theme " + std::to_string(question_index + 1) + ", " +
                   company + " cited a reference figure of " + value + " crore.";
    }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace detail

// Writes out_dir/manifest.jsonl, out_dir/qa.jsonl, and out_dir/texts/*.txt.
// The QA set holds one pair per planted fact and one pair per
// (generic question, company) combination.
inline SyntheticCorpus generate(const SyntheticSpec& spec, const std::filesystem::path& out_dir) {
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "texts", ec);
    if (ec) throw IoError("cannot create output directory: " + (out_dir / "texts").string());

    static const std::vector<std::string> sectors = {
        "Banking",        "Information Technology", "Healthcare",  "Automobile",
        "Consumer Goods", "Energy",                 "Pharmaceuticals",
        "Telecommunication", "Materials",           "Construction",
    };
    const std::string quarter = "FY2024-Q1";

    detail::SeededText gen(spec.seed);
    std::ofstream manifest(out_dir / "manifest.jsonl", std::ios::binary | std::ios::trunc);
    std::ofstream qa(out_dir / "qa.jsonl", std::ios::binary | std::ios::trunc);
    if (!manifest || !qa) throw IoError("cannot write corpus files in " + out_dir.string());

    std::size_t n_pairs = 0;
    for (std::size_t ci = 0; ci < spec.n_companies; ++ci) {
        const std::string company = detail::ticker_for(ci);
        const std::string sector = sectors[ci % sectors.size()];
        const std::string doc_id = company + "-FY2024Q1";

        std::string text = company + " (" + sector + ") earnings call transcript, " + quarter +
                           ".\n\n";
        text += "Opening remarks.\n" + gen.filler_block(2, 4) + "\n\n";

        std::vector<nlohmann::json> qa_records;
        text += "Financial highlights.\n\n";
        for (std::size_t fi = 0; fi < spec.facts_per_company; ++fi) {
            const detail::FactTemplate tmpl = detail::fact_template(fi);
            const std::string value = gen.next_value();
            const std::string fact_sentence = "On the " + tmpl.metric + " front, " + company +
                                              " closed the quarter at " + value + " " + tmpl.unit +
                                              ".";
            text += fact_sentence + " " + gen.filler_block(1, 2) + "\n\n";
            qa_records.push_back({
                {"question",
                 "What did " + company + " report for " + tmpl.metric + " in the quarter?"},
                {"company", company},
                {"ground_truth", fact_sentence},
            });
        }

        text += "Analyst discussion.\n\n";
        for (std::size_t qi = 0; qi < spec.generic_questions.size(); ++qi) {
            const std::string answer_sentence =
                detail::generic_answer(qi, company, gen.next_value());
            text += answer_sentence + " " + gen.filler_block(1, 2) + "\n\n";
            qa_records.push_back({
                {"question", spec.generic_questions[qi]},
                {"company", company},
                {"ground_truth", answer_sentence},
            });
        }

        text += "Closing remarks.\n" + gen.filler_block(1, 3) + "\n";

        const std::string text_rel = "texts/" + doc_id + ".txt";
        detail::write_text_file(out_dir / text_rel, text);
        manifest << nlohmann::json{{"doc_id", doc_id},
                                   {"company", company},
                                   {"sector", sector},
                                   {"quarter", quarter},
                                   {"text_path", text_rel}}
                        .dump()
                 << '\n';
        for (const nlohmann::json& rec : qa_records) qa << rec.dump() << '\n';
        n_pairs += qa_records.size();
    }
    if (!manifest || !qa) throw IoError("write failed in " + out_dir.string());

    return {out_dir / "manifest.jsonl", out_dir / "qa.jsonl", spec.n_companies, n_pairs};
}

}  // namespace finrag
