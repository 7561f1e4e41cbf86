#include "gateway/runner.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace mqsum::gateway {

FallbackPolicy fallback_from_name(std::string_view name) {
    if (name == "empty") return FallbackPolicy::Empty;
    if (name == "retry_single") return FallbackPolicy::RetrySingle;
    throw Error(Errc::invalid_argument,
                "unknown fallback policy: " + std::string(name));
}

void CoalescePolicy::validate() const {
    if (window_ms < 0)
        throw Error(Errc::invalid_argument, "window_ms must be >= 0");
    if (max_queries_per_prompt < 1)
        throw Error(Errc::invalid_argument,
                    "max_queries_per_prompt must be >= 1");
}

namespace {

int grade_rank(ParseGrade g) {
    switch (g) {
    case ParseGrade::Strict: return 0;
    case ParseGrade::Repaired: return 1;
    case ParseGrade::Salvaged: return 2;
    case ParseGrade::Failed: return 3;
    }
    return 3;
}

void merge_outcome(parse::ParseReport& into, const parse::ParseOutcome& from) {
    if (grade_rank(from.grade) > grade_rank(into.outcome.grade))
        into.outcome.grade = from.grade;
    into.outcome.truncation_detected |= from.truncation_detected;
    into.outcome.keys_normalized |= from.keys_normalized;
    for (const std::string& s : from.stages_applied)
        into.outcome.stages_applied.push_back(s);
}

void add_usage(backend::Usage& into, const backend::Usage& from) {
    into.input_tokens += from.input_tokens;
    into.output_tokens += from.output_tokens;
    into.estimated |= from.estimated;
}

} // namespace

JobResult run_job(const MultiQueryJob& job, const prompt::PromptTemplate& tmpl,
                  const prompt::DecodingParams& params,
                  const CoalescePolicy& policy, backend::Backend& be,
                  const std::string& model, const ResponseHook& hook) {
    job.validate();
    policy.validate();

    JobResult result;
    result.report.outcome.grade = ParseGrade::Strict; // worst-of starts best
    result.pairs.reserve(job.queries.size());
    for (const Query& q : job.queries)
        result.pairs.push_back({q.index, q.text, "", MatchMethod::Unmatched});
    result.report.pairs = result.pairs;

    auto complete = [&](const MultiQueryJob& sub) {
        backend::BackendRequest req;
        req.prompt = prompt::render(sub, tmpl, params);
        req.params = params;
        req.model_name = model;
        ++result.backend_calls;
        backend::BackendResponse resp = be.complete(req);
        add_usage(result.usage_total, resp.usage);
        if (hook) hook(req, resp);
        return resp;
    };

    const size_t cap = static_cast<size_t>(policy.max_queries_per_prompt);
    size_t n = job.queries.size();
    int chunk_index = 0;
    for (size_t start = 0; start < n; start += cap, ++chunk_index) {
        size_t count = std::min(cap, n - start);
        MultiQueryJob sub;
        sub.transcript = job.transcript;
        sub.output_format = job.output_format;
        for (size_t k = 0; k < count; ++k)
            sub.queries.push_back(
                {static_cast<int>(k) + 1, job.queries[start + k].text});

        parse::ParseReport chunk_report;
        try {
            backend::BackendResponse resp = complete(sub);
            chunk_report =
                parse::parse(resp.text, sub.queries, job.output_format);
        } catch (const Error& e) {
            result.errors.push_back({chunk_index, e.code(), e.what()});
            merge_outcome(result.report,
                          {ParseGrade::Failed, {}, false, false});
            continue; // the chunk's pairs stay empty, the job carries on
        }

        merge_outcome(result.report, chunk_report.outcome);
        result.report.raw_record_count += chunk_report.raw_record_count;
        for (size_t k = 0; k < count; ++k) {
            QuerySummaryPair pair = chunk_report.pairs[k];
            pair.query_index = job.queries[start + k].index;
            result.report.pairs[start + k] = pair;
            result.pairs[start + k] = pair;
        }
    }

    if (policy.fallback == FallbackPolicy::RetrySingle) {
        int budget = policy.max_single_retries_per_job >= 0
                         ? policy.max_single_retries_per_job
                         : static_cast<int>(n);
        for (size_t i = 0; i < n && budget > 0; ++i) {
            if (result.pairs[i].match_method != MatchMethod::Unmatched)
                continue;
            --budget;
            ++result.fallback_invocations;
            result.retried_query_indices.push_back(result.pairs[i].query_index);
            MultiQueryJob one;
            one.transcript = job.transcript;
            one.output_format = job.output_format;
            one.queries = {{1, job.queries[i].text}};
            try {
                backend::BackendResponse resp = complete(one);
                parse::ParseReport rep =
                    parse::parse(resp.text, one.queries, job.output_format);
                const QuerySummaryPair& got = rep.pairs[0];
                if (got.match_method != MatchMethod::Unmatched &&
                    !got.summary.empty())
                    result.pairs[i].summary = got.summary;
            } catch (const Error& e) {
                result.errors.push_back({-1, e.code(),
                                         "retry for query " +
                                             std::to_string(
                                                 result.pairs[i].query_index) +
                                             ": " + e.what()});
            }
        }
    }

    return result;
}

} // namespace mqsum::gateway
