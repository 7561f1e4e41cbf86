#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/types.hpp"
#include "parse/align.hpp"

namespace mqsum::parse {

struct ParseOutcome {
    ParseGrade grade = ParseGrade::Failed;
    std::vector<std::string> stages_applied; // attempted stages, ladder order
    bool truncation_detected = false;
    bool keys_normalized = false;
};

struct ParseReport {
    ParseOutcome outcome;
    std::vector<QuerySummaryPair> pairs; // exactly one per input query
    int raw_record_count = 0; // records found before normalization/alignment
};

// Total over arbitrary bytes. Stages run in a fixed order with first-success
// semantics:
//   json: strict, fenced_block, bracket_slice, record_scan, truncation_repair
//   yaml: strict, single_mapping_wrap, fenced_block, bracket_slice,
//         record_scan, truncation_repair
// Stages strict through bracket_slice demand fully conforming arrays (exactly
// the query/summary keys, string values) and grade Strict or Repaired; the
// scan stages apply key normalization and grade Salvaged. No stage yielding a
// usable record means Failed with every pair empty.
ParseReport parse(std::string_view raw, const std::vector<Query>& queries,
                  OutputFormat format);

// Canonical well-formed output; parse(serialize(p), queries(p), f) is Strict.
std::string serialize(const std::vector<QuerySummaryPair>& pairs,
                      OutputFormat format);

} // namespace mqsum::parse
