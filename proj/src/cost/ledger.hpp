#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "cost/pricing.hpp"
#include "prompt/builder.hpp"
#include "prompt/template.hpp"

namespace mqsum::cost {

struct LedgerEntry {
    std::string model;
    int64_t input_tokens = 0;
    int64_t output_tokens = 0;
    Money input_cost;
    Money output_cost;
};

struct LedgerTotals {
    int64_t calls = 0;
    int64_t input_tokens = 0;
    int64_t output_tokens = 0;
    Money input_cost;
    Money output_cost;
    Money total_cost;
};

// What the same work would have cost had every query been its own call with
// its own copy of the context. Input tokens come from rendering each query
// alone; output tokens reuse the summaries the batched run actually produced
// because no counterfactual output exists to measure.
struct BaselineCost {
    int64_t calls = 0;
    int64_t input_tokens = 0;
    int64_t output_tokens = 0;
    Money input_cost;
    Money output_cost;
};

BaselineCost single_query_equivalent(const MultiQueryJob& job,
                                     const prompt::PromptTemplate& tmpl,
                                     const prompt::DecodingParams& params,
                                     const std::vector<QuerySummaryPair>& pairs,
                                     const std::string& model,
                                     const PricingTable& table);

// Thread-safe append-only record of actual spend, with an optional running
// single-query baseline for the savings ratio.
class CostLedger {
public:
    explicit CostLedger(PricingTable table) : table_(std::move(table)) {}

    LedgerEntry add(const std::string& model, int64_t input_tokens,
                    int64_t output_tokens);
    void add_baseline(const BaselineCost& b);

    LedgerTotals totals() const;
    std::optional<BaselineCost> baseline() const;

    // baseline input cost over actual input cost; empty until both positive
    std::optional<double> savings_ratio() const;

    std::vector<LedgerEntry> entries() const;

    // One JSON object per line, matching the dataset record convention.
    std::string entries_jsonl() const;
    // Aggregate JSON object: totals, baseline when present, savings_ratio.
    std::string summary_json() const;

    const PricingTable& pricing() const { return table_; }

private:
    PricingTable table_;
    mutable std::mutex mu_;
    std::vector<LedgerEntry> entries_;
    LedgerTotals totals_;
    bool have_baseline_ = false;
    BaselineCost baseline_;
};

} // namespace mqsum::cost
