#include "backend/live.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "backend/wire.hpp"
#include "core/error.hpp"

namespace mqsum::backend {

namespace {

bool looks_like_context_overflow(const std::string& body) {
    return body.find("context_length") != std::string::npos ||
           body.find("context length") != std::string::npos;
}

} // namespace

LiveBackend::LiveBackend(LiveConfig config)
    : config_(std::move(config)),
      slots_(std::max(1, std::min(config_.max_concurrency, 1024))) {
    if (config_.max_concurrency < 1 || config_.max_concurrency > 1024)
        throw Error(Errc::invalid_argument,
                    "max_concurrency must be in [1, 1024]");
    if (config_.max_attempts < 1)
        throw Error(Errc::invalid_argument, "max_attempts must be >= 1");
    if (const char* key = std::getenv(config_.api_key_env.c_str()))
        api_key_ = key;
}

BackendResponse LiveBackend::complete(const BackendRequest& request) {
    slots_.acquire();
    struct Release {
        std::counting_semaphore<1024>* s;
        ~Release() { s->release(); }
    } release{&slots_};

    std::string body = build_request_body(request);
    httplib::Headers headers;
    if (!api_key_.empty())
        headers.emplace("Authorization", "Bearer " + api_key_);

    std::string last_error;
    int backoff_ms = config_.backoff_initial_ms;
    auto t0 = std::chrono::steady_clock::now();

    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (attempt > 1) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }

        httplib::Client client(config_.base_url);
        client.set_connection_timeout(config_.timeout_sec);
        client.set_read_timeout(config_.timeout_sec);
        client.set_write_timeout(config_.timeout_sec);

        auto res = client.Post(config_.path, headers, body, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue; // transport trouble is the transient case
        }
        if (res->status == 401 || res->status == 403)
            throw Error(Errc::auth, "endpoint rejected credentials (HTTP " +
                                        std::to_string(res->status) + ")");
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            if (looks_like_context_overflow(res->body))
                throw Error(Errc::context_length,
                            "endpoint rejected prompt size: " + res->body);
            throw Error(Errc::transport, "HTTP " +
                                             std::to_string(res->status) +
                                             ": " + res->body);
        }

        ParsedCompletion parsed = parse_completion_body(res->body);
        BackendResponse out;
        out.text = std::move(parsed.text);
        out.usage = parsed.usage;
        if (out.usage.estimated) {
            out.usage.input_tokens =
                prompt::estimate_tokens(request.prompt.text);
            out.usage.output_tokens = prompt::estimate_tokens(out.text);
        }
        out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        out.source = Source::Live;
        out.raw_body = res->body;
        return out;
    }
    throw Error(Errc::transport,
                "gave up after " + std::to_string(config_.max_attempts) +
                    " attempts: " + last_error);
}

} // namespace mqsum::backend
