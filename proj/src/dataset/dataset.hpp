#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/types.hpp"

namespace mqsum::dataset {

struct SingleQueryRecord {
    std::string transcript_id;
    std::string transcript_text;
    std::string query_text;
    std::string reference_summary; // may be empty for unlabeled traffic
};

struct DatasetSplit {
    std::string name; // "train", "validation" or "test"; may be empty
    std::vector<MultiQueryJob> jobs;
};

// Reads line-delimited JSON records with fields transcript_id,
// transcript_text, query_text, reference_summary (the last one optional).
// Blank lines are skipped. Malformed lines raise Errc::schema carrying the
// 1-based line number and the offending field name.
std::vector<SingleQueryRecord> load_records(const std::string& path);

// Groups records by transcript_id in first-appearance order. Query order
// within a job is input order; duplicate (transcript, query) pairs are kept.
// References align with queries when present. Raises
// Errc::conflicting_transcript when one id carries two different texts or two
// ids share a transcript fingerprint, Errc::empty_record_field on blank
// required fields.
DatasetSplit convert(const std::vector<SingleQueryRecord>& records,
                     std::string split_name = "");

// Ungroups a split back into one record per query, preserving job and query
// order. expand(convert(r)) reproduces r exactly for conflict-free input.
std::vector<SingleQueryRecord> expand(const DatasetSplit& split);

// Line-delimited job files: one JSON object per line with fields
// transcript{id,text}, queries[], references[] (optional), output_format.
void save_jobs(const DatasetSplit& split, const std::string& path);
DatasetSplit load_jobs(const std::string& path);

// One job <-> one object, the same shape job files use per line. The HTTP
// job endpoint speaks this format too. line_no only decorates errors.
nlohmann::json job_to_json(const MultiQueryJob& job);
MultiQueryJob job_from_json(const nlohmann::json& obj, int line_no = 0);

} // namespace mqsum::dataset
