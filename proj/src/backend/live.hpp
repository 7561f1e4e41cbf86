#pragma once

#include <semaphore>
#include <string>

#include "backend/backend.hpp"

namespace mqsum::backend {

// Chat-completion endpoint client. Works against anything speaking the
// OpenAI-compatible schema; point base_url at a proxy for other providers.
struct LiveConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    // name of the environment variable holding the bearer token; an empty or
    // unset variable sends no Authorization header (keyless local endpoints)
    std::string api_key_env = "MQSUM_API_KEY";
    int max_concurrency = 4;
    int timeout_sec = 120;
    int max_attempts = 3;        // total tries for transient failures
    int backoff_initial_ms = 500; // doubles after each failed attempt
};

class LiveBackend : public Backend {
public:
    explicit LiveBackend(LiveConfig config);

    // Sends the rendered prompt as the sole user message. Retries transport
    // errors, 429 and 5xx with exponential backoff; 401/403 raise
    // Errc::auth, context-window rejections raise Errc::context_length,
    // anything else exhausting the attempts raises Errc::transport.
    BackendResponse complete(const BackendRequest& request) override;

private:
    LiveConfig config_;
    std::string api_key_;
    std::counting_semaphore<1024> slots_; // in-flight request bound
};

} // namespace mqsum::backend
