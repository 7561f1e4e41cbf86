#pragma once

#include <condition_variable>
#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "core/fingerprint.hpp"
#include "cost/ledger.hpp"
#include "gateway/runner.hpp"

namespace mqsum::gateway {

struct MetricsSnapshot {
    int64_t requests_in = 0;    // single submissions + batch-job queries
    int64_t jobs_run = 0;
    int64_t backend_calls = 0;
    std::optional<double> coalesce_ratio; // requests_in / backend_calls
    int64_t grades[4] = {0, 0, 0, 0};     // indexed by ParseGrade
    int64_t fallback_invocations = 0;
    int64_t input_tokens = 0;
    int64_t output_tokens = 0;
    std::optional<cost::Money> estimated_cost; // present with a ledger
};

// Merges concurrent same-context requests into one multi-query backend call.
// Requests join an open batch keyed by the context fingerprint; a batch
// fires when its window elapses or it reaches the per-prompt cap. Batches
// for different contexts run in parallel; callers block until their batch
// resolves or the deadline passes.
class Gateway {
public:
    struct Config {
        CoalescePolicy policy;
        std::string model = "mock-llm";
        prompt::PromptTemplate tmpl;
        prompt::DecodingParams params;
        int deadline_ms = 60'000;
        std::shared_ptr<cost::CostLedger> ledger; // optional per-call billing
    };

    Gateway(Config config, backend::Backend& be);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    // Blocks until the batch containing this request resolves. Duplicate
    // query texts within a batch share one slot and fan out on delivery.
    QuerySummaryPair submit_single(const std::string& context_text,
                                   const std::string& query_text);

    // Library mode: run one prepared job through the same pipeline and
    // counters, bypassing the batching window. The second form overrides
    // the configured policy for this job only.
    JobResult run(const MultiQueryJob& job);
    JobResult run(const MultiQueryJob& job, const CoalescePolicy& policy);

    MetricsSnapshot metrics_snapshot() const;

    const CoalescePolicy& policy() const { return config_.policy; }

    // Fires all open batches now and waits for in-flight work to finish.
    void flush();

private:
    struct Batch {
        std::string context;
        std::string fp_hex;
        std::vector<std::string> queries; // one slot per distinct text
        std::map<std::string, int> slot_of;
        std::chrono::steady_clock::time_point deadline;
        std::promise<std::shared_ptr<JobResult>> promise;
        std::shared_future<std::shared_ptr<JobResult>> future;
        uint64_t id = 0;
    };

    void worker_loop();
    void fire_locked(std::unique_lock<std::mutex>& lock,
                     std::shared_ptr<Batch> batch);
    void execute(std::shared_ptr<Batch> batch);
    JobResult run_with_counters(const MultiQueryJob& job,
                                const CoalescePolicy& policy);
    void reap_finished_locked();

    Config config_;
    backend::Backend& backend_;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    bool stopping_ = false;
    uint64_t next_batch_id_ = 1;
    std::map<std::string, std::shared_ptr<Batch>> open_; // by fingerprint hex
    std::vector<std::thread> running_;
    std::thread worker_;

    mutable std::mutex metrics_mu_;
    MetricsSnapshot counters_;
};

} // namespace mqsum::gateway
