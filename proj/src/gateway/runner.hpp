#pragma once

#include <functional>
#include <string>
#include <vector>

#include "backend/backend.hpp"
#include "core/types.hpp"
#include "parse/parser.hpp"
#include "prompt/builder.hpp"
#include "prompt/template.hpp"

namespace mqsum::gateway {

enum class FallbackPolicy { Empty, RetrySingle };

inline const char* fallback_name(FallbackPolicy f) {
    return f == FallbackPolicy::Empty ? "empty" : "retry_single";
}

FallbackPolicy fallback_from_name(std::string_view name);

struct CoalescePolicy {
    int window_ms = 250;            // batching window for single submissions
    int max_queries_per_prompt = 10; // larger jobs are chunked
    FallbackPolicy fallback = FallbackPolicy::RetrySingle;
    int max_single_retries_per_job = -1; // -1 means "as many as queries"

    void validate() const;
};

struct ChunkError {
    int chunk_index = 0;
    Errc code = Errc::ok;
    std::string message;
};

struct JobResult {
    // Delivered pairs, one per job query in job order. Retried queries keep
    // match_method Unmatched (the batch parse did not match them) but carry
    // the retry's summary; retried_query_indices names them.
    std::vector<QuerySummaryPair> pairs;
    // Parse-level view merged across chunks: worst grade, OR'd flags,
    // summed raw counts, stage lists concatenated in chunk order.
    parse::ParseReport report;
    int backend_calls = 0;
    backend::Usage usage_total;
    int fallback_invocations = 0;
    std::vector<int> retried_query_indices;
    std::vector<ChunkError> errors; // per-sub-job backend failures
};

// Called after every completed backend call; wire the cost ledger here.
using ResponseHook = std::function<void(const backend::BackendRequest&,
                                        const backend::BackendResponse&)>;

// Render, complete, parse, align; chunk when the job exceeds the per-prompt
// cap; apply the fallback policy to unmatched pairs. Backend failures are
// annotated per chunk and never discard the rest of the job.
JobResult run_job(const MultiQueryJob& job, const prompt::PromptTemplate& tmpl,
                  const prompt::DecodingParams& params,
                  const CoalescePolicy& policy, backend::Backend& be,
                  const std::string& model, const ResponseHook& hook = {});

} // namespace mqsum::gateway
