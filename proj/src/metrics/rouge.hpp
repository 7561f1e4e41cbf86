#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mqsum::metrics {

struct MetricTriple {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct RougeScore {
    MetricTriple r1; // unigram overlap
    MetricTriple r2; // bigram overlap
    MetricTriple rl; // longest common subsequence
};

// P = matches/cand_total, R = matches/ref_total (zero denominators give
// zero), F1 = harmonic mean or zero when either side is zero.
MetricTriple make_triple(int64_t matches, int64_t cand_total,
                         int64_t ref_total);

struct RougeOptions {
    // Off by default: the reference setup for these scores is unstated, and
    // stemming is the usual source of cross-implementation drift. The
    // built-in stemmer is a light suffix stripper, not a full Porter
    // stemmer; scores with it enabled may differ slightly from other tools.
    bool stemming = false;
};

// Lowercased whitespace words with surrounding ASCII punctuation stripped;
// words that are all punctuation vanish.
std::vector<std::string> tokenize_for_rouge(std::string_view text,
                                            const RougeOptions& opts = {});

// A token sequence preprocessed for repeated scoring: original order for the
// LCS plus sorted unigrams/bigrams for clipped multiset intersections.
struct PreparedText {
    std::vector<int32_t> ids;
    std::vector<int32_t> sorted_ids;
    std::vector<int64_t> sorted_bigrams;
    bool empty() const { return ids.empty(); }
};

PreparedText prepare_ids(std::span<const int32_t> ids);

// Reusable LCS rows so bulk scoring makes no per-pair allocations.
struct RougeWorkspace {
    std::vector<int32_t> row_prev, row_cur;
};

// Raw overlap counts behind one score; summing these across pairs gives the
// micro-averaged variant.
struct RougeCounts {
    int64_t r1_match = 0, r1_cand = 0, r1_ref = 0;
    int64_t r2_match = 0, r2_cand = 0, r2_ref = 0;
    int64_t lcs = 0, lcs_cand = 0, lcs_ref = 0;
};

// Core scorer over interned token ids. Pure; safe to call concurrently with
// distinct workspaces.
RougeScore score_prepared(const PreparedText& candidate,
                          const PreparedText& reference, RougeWorkspace& ws,
                          RougeCounts* counts = nullptr);

RougeScore score_ids(std::span<const int32_t> candidate,
                     std::span<const int32_t> reference);

// String front end: tokenize both texts, intern into a throwaway vocabulary,
// score. Empty or all-punctuation texts score zero everywhere.
RougeScore rouge(std::string_view candidate, std::string_view reference,
                 const RougeOptions& opts = {});

} // namespace mqsum::metrics
