#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/text.hpp"

namespace mqsum {

enum class OutputFormat { Json, Yaml };

inline const char* format_name(OutputFormat f) {
    return f == OutputFormat::Json ? "json" : "yaml";
}

inline OutputFormat format_from_name(std::string_view name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "yaml") return OutputFormat::Yaml;
    throw Error(Errc::invalid_argument,
                "unknown output format: " + std::string(name));
}

enum class MatchMethod { Exact, Normalized, Fuzzy, Positional, Unmatched };

inline const char* match_method_name(MatchMethod m) {
    switch (m) {
    case MatchMethod::Exact: return "exact";
    case MatchMethod::Normalized: return "normalized";
    case MatchMethod::Fuzzy: return "fuzzy";
    case MatchMethod::Positional: return "positional";
    case MatchMethod::Unmatched: return "unmatched";
    }
    return "unmatched";
}

enum class ParseGrade { Strict, Repaired, Salvaged, Failed };

inline const char* grade_name(ParseGrade g) {
    switch (g) {
    case ParseGrade::Strict: return "strict";
    case ParseGrade::Repaired: return "repaired";
    case ParseGrade::Salvaged: return "salvaged";
    case ParseGrade::Failed: return "failed";
    }
    return "failed";
}

struct Transcript {
    std::string id;
    std::string text;
    int64_t words = 0;

    static Transcript make(std::string id, std::string text) {
        Transcript t;
        t.words = word_count(text);
        t.id = std::move(id);
        t.text = std::move(text);
        return t;
    }
};

struct Query {
    int index = 1; // 1-based position within the job's query set
    std::string text;
};

struct MultiQueryJob {
    Transcript transcript;
    std::vector<Query> queries;
    std::optional<std::vector<std::string>> references;
    OutputFormat output_format = OutputFormat::Json;

    void validate() const {
        if (transcript.id.empty())
            throw Error(Errc::invalid_argument, "job transcript id is empty");
        if (queries.empty())
            throw Error(Errc::invalid_argument, "job has no queries");
        for (size_t i = 0; i < queries.size(); ++i) {
            if (queries[i].index != static_cast<int>(i) + 1)
                throw Error(Errc::invalid_argument,
                            "query indices must be contiguous from 1");
            if (normalize_ws(queries[i].text).empty())
                throw Error(Errc::invalid_argument, "query text is empty");
        }
        if (references && references->size() != queries.size())
            throw Error(Errc::invalid_argument,
                        "references must align one per query");
    }
};

struct QuerySummaryPair {
    int query_index = 0;
    std::string query_text;
    std::string summary; // empty when the response had nothing for this query
    MatchMethod match_method = MatchMethod::Unmatched;
};

} // namespace mqsum
