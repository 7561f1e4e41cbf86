#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "parse/scan.hpp"

namespace mqsum::parse {

struct CanonRecord {
    std::string query;
    std::string summary;
    bool renamed = false; // keys were not literally "query"/"summary"
};

// Canonical key form: lowercased, alphanumerics only.
std::string canon_key(std::string_view key);

// Maps query-like keys {query, question, q} and summary-like keys
// {summary, answer, response} onto the two canonical fields. A record with no
// query-like key but exactly one summary field and exactly one other string
// field takes that other field as the query. Records without a string-valued
// summary-like field are rejected.
std::optional<CanonRecord> normalize_keys(const RawRecord& record);

// Match-normalization for query text: lowercase, strip one leading
// enumeration prefix ("1.", "#2)", ...), ASCII punctuation to spaces,
// collapse whitespace.
std::string normalize_query_text(std::string_view text);

// Token-set Jaccard over normalized words.
double query_jaccard(std::string_view a, std::string_view b);

// Greedy tiered matching: Exact, Normalized, Fuzzy (Jaccard >= 0.6,
// best-first), then Positional only when nothing matched and counts agree.
// Every input query yields exactly one pair; each record is consumed at most
// once; a matched record whose summary is blank demotes to Unmatched so that
// an empty summary always means "no usable answer".
std::vector<QuerySummaryPair> align(const std::vector<CanonRecord>& records,
                                    const std::vector<Query>& queries);

} // namespace mqsum::parse
