#include "gateway/gateway.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace mqsum::gateway {

using Clock = std::chrono::steady_clock;

Gateway::Gateway(Config config, backend::Backend& be)
    : config_(std::move(config)), backend_(be) {
    config_.policy.validate();
    config_.tmpl.validate();
    config_.params.validate();
    if (config_.deadline_ms <= 0)
        throw Error(Errc::invalid_argument, "deadline_ms must be positive");
    worker_ = std::thread([this] { worker_loop(); });
}

Gateway::~Gateway() {
    flush();
    {
        std::unique_lock lock(mu_);
        stopping_ = true;
        // a submission that slipped in after flush must not hang its caller
        for (auto& [fp, batch] : open_) {
            try {
                throw Error(Errc::timeout, "gateway shut down");
            } catch (...) {
                batch->promise.set_exception(std::current_exception());
            }
        }
        open_.clear();
        cv_.notify_all();
    }
    worker_.join();
    std::unique_lock lock(mu_);
    for (std::thread& t : running_)
        if (t.joinable()) t.join();
    running_.clear();
}

void Gateway::worker_loop() {
    std::unique_lock lock(mu_);
    while (!stopping_) {
        if (open_.empty()) {
            cv_.wait(lock, [this] { return stopping_ || !open_.empty(); });
            continue;
        }
        auto soonest = std::min_element(
            open_.begin(), open_.end(), [](const auto& a, const auto& b) {
                return a.second->deadline < b.second->deadline;
            });
        auto when = soonest->second->deadline;
        if (Clock::now() >= when) {
            fire_locked(lock, soonest->second);
            continue;
        }
        cv_.wait_until(lock, when);
    }
}

void Gateway::reap_finished_locked() {
    // bounded growth: join anything already done before adding more
    if (running_.size() < 64) return;
    for (std::thread& t : running_)
        if (t.joinable()) t.join();
    running_.clear();
}

void Gateway::fire_locked(std::unique_lock<std::mutex>& lock,
                          std::shared_ptr<Batch> batch) {
    open_.erase(batch->fp_hex);
    reap_finished_locked();
    running_.emplace_back([this, batch] { execute(batch); });
    (void)lock;
}

void Gateway::execute(std::shared_ptr<Batch> batch) {
    try {
        MultiQueryJob job;
        job.transcript =
            Transcript::make("ctx-" + batch->fp_hex.substr(0, 12),
                             batch->context);
        job.output_format = config_.tmpl.output_format;
        for (size_t i = 0; i < batch->queries.size(); ++i)
            job.queries.push_back(
                {static_cast<int>(i) + 1, batch->queries[i]});
        auto result = std::make_shared<JobResult>(
            run_with_counters(job, config_.policy));
        batch->promise.set_value(std::move(result));
    } catch (...) {
        batch->promise.set_exception(std::current_exception());
    }
}

JobResult Gateway::run_with_counters(const MultiQueryJob& job,
                                     const CoalescePolicy& policy) {
    ResponseHook hook = [this](const backend::BackendRequest& req,
                               const backend::BackendResponse& resp) {
        if (config_.ledger)
            config_.ledger->add(req.model_name, resp.usage.input_tokens,
                                resp.usage.output_tokens);
        std::lock_guard g(metrics_mu_);
        ++counters_.backend_calls;
        counters_.input_tokens += resp.usage.input_tokens;
        counters_.output_tokens += resp.usage.output_tokens;
    };
    JobResult result = run_job(job, config_.tmpl, config_.params, policy,
                               backend_, config_.model, hook);
    std::lock_guard g(metrics_mu_);
    ++counters_.jobs_run;
    ++counters_.grades[static_cast<int>(result.report.outcome.grade)];
    counters_.fallback_invocations += result.fallback_invocations;
    return result;
}

JobResult Gateway::run(const MultiQueryJob& job) {
    return run(job, config_.policy);
}

JobResult Gateway::run(const MultiQueryJob& job,
                       const CoalescePolicy& policy) {
    {
        std::lock_guard g(metrics_mu_);
        counters_.requests_in += static_cast<int64_t>(job.queries.size());
    }
    return run_with_counters(job, policy);
}

QuerySummaryPair Gateway::submit_single(const std::string& context_text,
                                        const std::string& query_text) {
    if (normalize_ws(query_text).empty())
        throw Error(Errc::invalid_argument, "query text is empty");
    {
        std::lock_guard g(metrics_mu_);
        ++counters_.requests_in;
    }

    std::string fp_hex = fingerprint(context_text).hex();
    std::shared_ptr<Batch> batch;
    int slot = 0;
    {
        std::unique_lock lock(mu_);
        if (stopping_)
            throw Error(Errc::invalid_argument, "gateway is shutting down");
        auto it = open_.find(fp_hex);
        if (it == open_.end()) {
            batch = std::make_shared<Batch>();
            batch->context = context_text;
            batch->fp_hex = fp_hex;
            batch->deadline = Clock::now() + std::chrono::milliseconds(
                                                 config_.policy.window_ms);
            batch->future = batch->promise.get_future().share();
            batch->id = next_batch_id_++;
            open_.emplace(fp_hex, batch);
            cv_.notify_all(); // the worker re-plans its wakeup
        } else {
            batch = it->second;
        }

        auto slot_it = batch->slot_of.find(query_text);
        if (slot_it != batch->slot_of.end()) {
            slot = slot_it->second; // duplicate query: share the slot
        } else {
            slot = static_cast<int>(batch->queries.size());
            batch->queries.push_back(query_text);
            batch->slot_of.emplace(query_text, slot);
        }

        if (static_cast<int>(batch->queries.size()) >=
                config_.policy.max_queries_per_prompt ||
            config_.policy.window_ms == 0)
            fire_locked(lock, batch);
    }

    auto future = batch->future;
    if (future.wait_for(std::chrono::milliseconds(config_.deadline_ms)) !=
        std::future_status::ready)
        throw Error(Errc::timeout, "request did not resolve within " +
                                       std::to_string(config_.deadline_ms) +
                                       " ms");
    std::shared_ptr<JobResult> result = future.get(); // rethrows batch errors
    return result->pairs.at(static_cast<size_t>(slot));
}

MetricsSnapshot Gateway::metrics_snapshot() const {
    std::lock_guard g(metrics_mu_);
    MetricsSnapshot out = counters_;
    if (out.backend_calls > 0)
        out.coalesce_ratio = static_cast<double>(out.requests_in) /
                             static_cast<double>(out.backend_calls);
    if (config_.ledger)
        out.estimated_cost = config_.ledger->totals().total_cost;
    return out;
}

void Gateway::flush() {
    std::vector<std::thread> to_join;
    {
        std::unique_lock lock(mu_);
        while (!open_.empty())
            fire_locked(lock, open_.begin()->second);
        to_join.swap(running_);
    }
    for (std::thread& t : to_join)
        if (t.joinable()) t.join();
}

} // namespace mqsum::gateway
