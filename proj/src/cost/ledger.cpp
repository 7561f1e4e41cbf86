#include "cost/ledger.hpp"

#include <nlohmann/json.hpp>

namespace mqsum::cost {

using nlohmann::ordered_json;

BaselineCost single_query_equivalent(const MultiQueryJob& job,
                                     const prompt::PromptTemplate& tmpl,
                                     const prompt::DecodingParams& params,
                                     const std::vector<QuerySummaryPair>& pairs,
                                     const std::string& model,
                                     const PricingTable& table) {
    job.validate();
    BaselineCost b;
    for (const Query& q : job.queries) {
        prompt::RenderedPrompt one =
            prompt::render_single(job.transcript, q.text, tmpl, params);
        b.input_tokens += one.estimated_input_tokens;
        ++b.calls;
    }
    for (const QuerySummaryPair& p : pairs)
        b.output_tokens += prompt::estimate_tokens(p.summary);
    CallCost c = cost_of(b.input_tokens, b.output_tokens, model, table);
    b.input_cost = c.input;
    b.output_cost = c.output;
    return b;
}

LedgerEntry CostLedger::add(const std::string& model, int64_t input_tokens,
                            int64_t output_tokens) {
    CallCost c = cost_of(input_tokens, output_tokens, model, table_);
    LedgerEntry e{model, input_tokens, output_tokens, c.input, c.output};
    std::lock_guard lock(mu_);
    entries_.push_back(e);
    ++totals_.calls;
    totals_.input_tokens += input_tokens;
    totals_.output_tokens += output_tokens;
    totals_.input_cost += e.input_cost;
    totals_.output_cost += e.output_cost;
    totals_.total_cost += e.input_cost + e.output_cost;
    return e;
}

void CostLedger::add_baseline(const BaselineCost& b) {
    std::lock_guard lock(mu_);
    have_baseline_ = true;
    baseline_.calls += b.calls;
    baseline_.input_tokens += b.input_tokens;
    baseline_.output_tokens += b.output_tokens;
    baseline_.input_cost += b.input_cost;
    baseline_.output_cost += b.output_cost;
}

LedgerTotals CostLedger::totals() const {
    std::lock_guard lock(mu_);
    return totals_;
}

std::optional<BaselineCost> CostLedger::baseline() const {
    std::lock_guard lock(mu_);
    if (!have_baseline_) return std::nullopt;
    return baseline_;
}

std::optional<double> CostLedger::savings_ratio() const {
    std::lock_guard lock(mu_);
    if (!have_baseline_ || baseline_.input_cost.micro <= 0 ||
        totals_.input_cost.micro <= 0)
        return std::nullopt;
    return static_cast<double>(baseline_.input_cost.micro) /
           static_cast<double>(totals_.input_cost.micro);
}

std::vector<LedgerEntry> CostLedger::entries() const {
    std::lock_guard lock(mu_);
    return entries_;
}

std::string CostLedger::entries_jsonl() const {
    std::string out;
    for (const LedgerEntry& e : entries()) {
        ordered_json j;
        j["model"] = e.model;
        j["input_tokens"] = e.input_tokens;
        j["output_tokens"] = e.output_tokens;
        j["input_cost_usd"] = e.input_cost.str();
        j["output_cost_usd"] = e.output_cost.str();
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string CostLedger::summary_json() const {
    std::lock_guard lock(mu_);
    ordered_json j;
    j["calls"] = totals_.calls;
    j["input_tokens"] = totals_.input_tokens;
    j["output_tokens"] = totals_.output_tokens;
    j["input_cost_usd"] = totals_.input_cost.str();
    j["output_cost_usd"] = totals_.output_cost.str();
    j["total_cost_usd"] = totals_.total_cost.str();
    if (have_baseline_) {
        ordered_json b;
        b["calls"] = baseline_.calls;
        b["input_tokens"] = baseline_.input_tokens;
        b["output_tokens"] = baseline_.output_tokens;
        b["input_cost_usd"] = baseline_.input_cost.str();
        b["output_cost_usd"] = baseline_.output_cost.str();
        j["single_query_equivalent"] = b;
        if (baseline_.input_cost.micro > 0 && totals_.input_cost.micro > 0)
            j["savings_ratio"] =
                static_cast<double>(baseline_.input_cost.micro) /
                static_cast<double>(totals_.input_cost.micro);
    }
    return j.dump(2);
}

} // namespace mqsum::cost
