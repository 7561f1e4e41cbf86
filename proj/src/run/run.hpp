#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dataset/dataset.hpp"
#include "gateway/runner.hpp"
#include "metrics/evaluate.hpp"
#include "run/manifest.hpp"

namespace mqsum::run {

struct RunReport {
    int jobs = 0;
    int jobs_with_errors = 0; // at least one annotated backend failure
    int64_t queries = 0;
    int64_t backend_calls = 0;
    int64_t input_tokens = 0;
    int64_t output_tokens = 0;
    bool usage_estimated = false;
    int64_t grades[4] = {0, 0, 0, 0}; // indexed by ParseGrade
    int64_t fallback_invocations = 0;
    int64_t retried_queries = 0;
    std::optional<nlohmann::ordered_json> cost; // ledger summary when priced
    std::string results_path;
    std::string recordings_dir;
    std::string summary_path;
};

nlohmann::ordered_json report_json(const RunReport& report,
                                   const RunManifest& manifest);

// Renders, completes and parses every job in the manifest's dataset.
// Writes, under manifest.output_dir:
//   results.jsonl   one result record per job, in dataset order
//   recordings/     raw completion bodies keyed by request digest
//   summary.json    the report plus the manifest that produced it
// Jobs run on a small worker pool; record order never depends on timing.
// Backend failures are annotated on the affected job and the run carries on.
// Mock and replay runs write byte-identical files on every repeat.
RunReport execute_run(const RunManifest& manifest);

// One stored result record: the job's transcript id plus its outcome.
using StoredResult = std::pair<std::string, gateway::JobResult>;

std::vector<StoredResult> load_results(const std::string& path);

// Joins stored results with the dataset's references for scoring, aligning
// pairs by (transcript_id, query_index). Results for unknown transcripts
// throw Error(job_set_mismatch); missing references score against "".
std::vector<metrics::EvalJob> eval_jobs_from_results(
    const std::vector<StoredResult>& results,
    const dataset::DatasetSplit& split);

} // namespace mqsum::run
