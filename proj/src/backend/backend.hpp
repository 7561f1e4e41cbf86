#pragma once

#include <cstdint>
#include <string>

#include "prompt/builder.hpp"

namespace mqsum::backend {

struct BackendRequest {
    prompt::RenderedPrompt prompt;
    prompt::DecodingParams params;
    std::string model_name;
};

enum class Source { Live, Replay, Mock };

inline const char* source_name(Source s) {
    switch (s) {
    case Source::Live: return "live";
    case Source::Replay: return "replay";
    case Source::Mock: return "mock";
    }
    return "mock";
}

struct Usage {
    int64_t input_tokens = 0;
    int64_t output_tokens = 0;
    bool estimated = false; // true when filled by the token estimator
};

struct BackendResponse {
    std::string text; // the raw completion
    Usage usage;
    int64_t latency_ms = 0;
    Source source = Source::Mock;
    // Verbatim chat-completion body: received on the wire for live calls,
    // synthesized for mock ones. This is what the replay store persists.
    std::string raw_body;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual BackendResponse complete(const BackendRequest& request) = 0;
};

// Replay-store key: hash of everything that determines a completion
// (prompt text, model, decoding parameters). Hex-encoded.
std::string request_digest(const BackendRequest& request);

} // namespace mqsum::backend
