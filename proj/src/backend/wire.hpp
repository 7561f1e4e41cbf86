#pragma once

#include <string>

#include "backend/backend.hpp"

namespace mqsum::backend {

// Chat-completion wire helpers. One schema both directions: a single user
// message carrying the rendered prompt, and the standard choices/usage reply.

// {"model":..., "messages":[{"role":"user","content":...}],
//  "temperature":..., "max_tokens":...}
std::string build_request_body(const BackendRequest& request);

struct ParsedCompletion {
    std::string text;
    Usage usage;       // estimated=false only when the body carried usage
    std::string model; // may be empty
};

// Pulls choices[0].message.content and usage out of a completion body.
// Throws Errc::schema when the body is not a completion at all.
ParsedCompletion parse_completion_body(const std::string& body);

// Synthesizes the body a live endpoint would have sent for this completion.
// Used by the mock backend and by recording, so replay files always hold the
// same shape regardless of source.
std::string make_completion_body(const std::string& model,
                                 const std::string& text, const Usage& usage);

} // namespace mqsum::backend
