#pragma once

#include <map>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "metrics/rouge.hpp"
#include "metrics/stats.hpp"

namespace mqsum::metrics {

struct FormatAccuracy {
    double strict = 0.0;  // fraction of responses parsed with no repair
    double lenient = 0.0; // fraction recovered by any stage (grade != Failed)
    int n = 0;
};

// Word-count statistics over a set of summaries. Empty summaries are counted,
// not averaged: with n_nonempty == 0 the mean is undefined and left at 0.
struct LengthStats {
    double mean_words = 0.0;
    int64_t total_words = 0;
    int n_nonempty = 0;
    int n_empty = 0;
    int min_words = 0;
    int max_words = 0;
};

// One scored response pair as fed to the evaluator; candidate is the
// recovered summary ("" when the query went unanswered).
struct EvalPair {
    int query_index = 0;
    std::string candidate;
    std::string reference;
};

struct EvalJob {
    std::string transcript_id;
    ParseGrade grade = ParseGrade::Failed;
    std::vector<EvalPair> pairs;
};

struct PairScore {
    std::string transcript_id;
    int query_index = 0;
    RougeScore rouge;
    int candidate_words = 0;
    bool empty = false; // empty candidate; scored as all-zero
    std::map<std::string, double> external;
};

struct RunSummary {
    std::vector<PairScore> pairs; // input order
    // Macro: mean of per-pair values, empty pairs included as zeros. This is
    // the headline aggregation. Micro aggregates raw overlap counts instead
    // and is reported alongside for anyone who wants it.
    RougeScore macro;
    RougeScore micro;
    LengthStats candidate_lengths;
    LengthStats reference_lengths;
    FormatAccuracy accuracy; // over responses, not pairs
    int empty_pairs = 0;
    std::map<std::string, double> external_macro;
};

struct EvalOptions {
    RougeOptions rouge;
};

// Throws Error(empty_input) on an empty list.
FormatAccuracy format_accuracy(const std::vector<ParseGrade>& grades);

LengthStats length_stats(const std::vector<std::string>& summaries);

RunSummary evaluate(const std::vector<EvalJob>& jobs,
                    const EvalOptions& opts = {});

// Plug-in point for metrics computed outside this process (neural scorers
// and the like): merges per-pair values by (transcript_id, query_index) and
// records their mean under `name`. Unknown pair keys throw
// Error(job_set_mismatch); pairs without a value simply lack the entry and
// are excluded from the mean.
struct ExternalScore {
    std::string transcript_id;
    int query_index = 0;
    double value = 0.0;
};

void merge_external_metric(RunSummary& run, const std::string& name,
                           const std::vector<ExternalScore>& scores);

struct MetricComparison {
    std::string metric;
    double multi_value = 0.0;
    double single_value = 0.0;
    TTestResult ttest; // paired over per-pair values, aligned by key
};

struct ComparisonReport {
    std::vector<MetricComparison> metrics;
    LengthStats multi_lengths, single_lengths;
    FormatAccuracy multi_accuracy, single_accuracy;
};

// Side-by-side comparison of two runs over the same job set (same
// (transcript_id, query_index) keys; anything else throws
// Error(job_set_mismatch)). Rouge F1 metrics always compared; an external
// metric is included only when both runs carry it on every pair.
ComparisonReport compare_runs(const RunSummary& multi,
                              const RunSummary& single, double alpha = 0.05);

} // namespace mqsum::metrics
