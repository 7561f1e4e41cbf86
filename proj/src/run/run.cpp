#include "run/run.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "backend/live.hpp"
#include "backend/mock.hpp"
#include "backend/replay.hpp"
#include "core/error.hpp"
#include "core/io.hpp"
#include "cost/ledger.hpp"
#include "gateway/records.hpp"

namespace mqsum::run {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

ordered_json report_json(const RunReport& report,
                         const RunManifest& manifest) {
    ordered_json j;
    j["jobs"] = report.jobs;
    j["jobs_with_errors"] = report.jobs_with_errors;
    j["queries"] = report.queries;
    j["backend_calls"] = report.backend_calls;
    j["usage"] = {{"input_tokens", report.input_tokens},
                  {"output_tokens", report.output_tokens},
                  {"estimated", report.usage_estimated}};
    ordered_json grades;
    for (ParseGrade g : {ParseGrade::Strict, ParseGrade::Repaired,
                         ParseGrade::Salvaged, ParseGrade::Failed})
        grades[grade_name(g)] = report.grades[static_cast<int>(g)];
    j["parse_grades"] = std::move(grades);
    j["fallback_invocations"] = report.fallback_invocations;
    j["retried_queries"] = report.retried_queries;
    if (report.cost) j["cost"] = *report.cost;
    j["results"] = report.results_path;
    j["recordings"] = report.recordings_dir;
    j["manifest"] = manifest_to_json(manifest);
    return j;
}

namespace {

// replay_src must outlive the returned backend; it stays empty otherwise.
std::unique_ptr<backend::Backend> make_backend(
    const RunManifest& m, std::optional<backend::ReplayStore>& replay_src) {
    switch (m.backend) {
    case BackendKind::Mock: {
        backend::FailureModeProfile profile = m.mock_profile;
        profile.seed = m.seed;
        return std::make_unique<backend::MockBackend>(profile);
    }
    case BackendKind::Replay:
        replay_src.emplace(m.replay_dir);
        return std::make_unique<backend::ReplayBackend>(*replay_src);
    case BackendKind::Live: {
        backend::LiveConfig cfg;
        if (!m.base_url.empty()) cfg.base_url = m.base_url;
        return std::make_unique<backend::LiveBackend>(cfg);
    }
    }
    throw Error(Errc::invalid_argument, "unknown backend kind");
}

gateway::JobResult failure_result(const MultiQueryJob& job, const Error& e) {
    gateway::JobResult r;
    for (const Query& q : job.queries)
        r.pairs.push_back({q.index, q.text, "", MatchMethod::Unmatched});
    r.report.pairs = r.pairs;
    r.report.outcome.grade = ParseGrade::Failed;
    r.errors.push_back({-1, e.code(), e.what()});
    return r;
}

} // namespace

RunReport execute_run(const RunManifest& manifest) {
    manifest.validate();
    dataset::DatasetSplit split = dataset::load_jobs(manifest.dataset_path);
    const prompt::PromptTemplate tmpl =
        prompt::resolve_template(manifest.template_name);

    fs::create_directories(manifest.output_dir);
    const std::string recordings_dir = manifest.output_dir + "/recordings";

    std::optional<backend::ReplayStore> replay_src;
    std::unique_ptr<backend::Backend> inner =
        make_backend(manifest, replay_src);
    backend::ReplayStore recordings(recordings_dir);
    backend::RecordingBackend be(*inner, recordings);

    std::optional<cost::CostLedger> ledger;
    if (!manifest.pricing_path.empty())
        ledger.emplace(cost::load_pricing(manifest.pricing_path));

    gateway::CoalescePolicy policy = manifest.policy;
    if (manifest.mode == RunMode::Single) policy.max_queries_per_prompt = 1;

    // Only sums cross the hook, so worker timing can't leak into the output.
    gateway::ResponseHook hook;
    if (ledger)
        hook = [&](const backend::BackendRequest&,
                   const backend::BackendResponse& resp) {
            ledger->add(manifest.model, resp.usage.input_tokens,
                        resp.usage.output_tokens);
        };

    const size_t n = split.jobs.size();
    std::vector<gateway::JobResult> results(n);
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next.fetch_add(1)) < n;) {
            const MultiQueryJob& job = split.jobs[i];
            try {
                results[i] = gateway::run_job(job, tmpl, manifest.params,
                                              policy, be, manifest.model,
                                              hook);
            } catch (const Error& e) {
                results[i] = failure_result(job, e);
            }
        }
    };
    size_t workers = std::min<size_t>(4, std::max<size_t>(n, 1));
    std::vector<std::thread> pool;
    for (size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    RunReport report;
    report.jobs = static_cast<int>(n);
    std::ostringstream lines;
    for (size_t i = 0; i < n; ++i) {
        const gateway::JobResult& r = results[i];
        ordered_json rec;
        rec["transcript_id"] = split.jobs[i].transcript.id;
        ordered_json body = gateway::job_result_json(r);
        for (auto& [key, value] : body.items()) rec[key] = std::move(value);
        lines << rec.dump() << '\n';

        report.queries += static_cast<int64_t>(r.pairs.size());
        report.backend_calls += r.backend_calls;
        report.input_tokens += r.usage_total.input_tokens;
        report.output_tokens += r.usage_total.output_tokens;
        report.usage_estimated |= r.usage_total.estimated;
        ++report.grades[static_cast<int>(r.report.outcome.grade)];
        report.fallback_invocations += r.fallback_invocations;
        report.retried_queries +=
            static_cast<int64_t>(r.retried_query_indices.size());
        if (!r.errors.empty()) ++report.jobs_with_errors;

        if (ledger)
            ledger->add_baseline(cost::single_query_equivalent(
                split.jobs[i], tmpl, manifest.params, r.pairs, manifest.model,
                ledger->pricing()));
    }

    report.results_path = manifest.output_dir + "/results.jsonl";
    report.recordings_dir = recordings_dir;
    report.summary_path = manifest.output_dir + "/summary.json";
    if (ledger) report.cost = json::parse(ledger->summary_json());

    atomic_write(report.results_path, lines.str());
    atomic_write(report.summary_path,
                 report_json(report, manifest).dump(2) + "\n");
    return report;
}

std::vector<StoredResult> load_results(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path);
    std::vector<StoredResult> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() ||
            !obj.contains("transcript_id") || !obj["transcript_id"].is_string())
            throw Error(Errc::schema,
                        "line " + std::to_string(line_no) +
                            ": not a result record",
                        line_no, "transcript_id");
        out.emplace_back(obj["transcript_id"].get<std::string>(),
                         gateway::job_result_from_json(obj));
    }
    return out;
}

std::vector<metrics::EvalJob> eval_jobs_from_results(
    const std::vector<StoredResult>& results,
    const dataset::DatasetSplit& split) {
    std::map<std::string, const MultiQueryJob*> by_id;
    for (const MultiQueryJob& job : split.jobs)
        by_id.emplace(job.transcript.id, &job);

    std::vector<metrics::EvalJob> out;
    out.reserve(results.size());
    for (const auto& [id, result] : results) {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw Error(Errc::job_set_mismatch,
                        "result for unknown transcript " + id);
        const MultiQueryJob& job = *it->second;
        metrics::EvalJob ej;
        ej.transcript_id = id;
        ej.grade = result.report.outcome.grade;
        for (const QuerySummaryPair& pair : result.pairs) {
            std::string reference;
            size_t slot = static_cast<size_t>(pair.query_index) - 1;
            if (job.references && slot < job.references->size())
                reference = (*job.references)[slot];
            ej.pairs.push_back({pair.query_index, pair.summary, reference});
        }
        out.push_back(std::move(ej));
    }
    return out;
}

} // namespace mqsum::run
