#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "backend/backend.hpp"
#include "core/types.hpp"

namespace mqsum::backend {

// Probability mix over response shapes, mirroring the malformation taxonomy
// the fixture corpus covers. Weights must sum to 1.
struct FailureModeProfile {
    double wellformed = 1.0;
    double numbered_no_array = 0.0;
    double hallucination = 0.0;
    double truncated = 0.0;
    double stray_brackets = 0.0;
    double wrong_keys = 0.0;
    double yaml_instead_of_json = 0.0;
    uint64_t seed = 0;

    void validate() const; // weights in [0,1], summing to 1 within 1e-9
};

// Pulls the numbered query lines back out of a rendered prompt: the lines
// between the default query markers, or failing that the first maximal run
// of "1. ...", "2. ..." lines. This is how the mock knows what to answer.
std::vector<Query> extract_prompt_queries(const std::string& prompt_text);

// Deterministic offline stand-in for a chat-completion endpoint. The
// response is a pure function of (profile, request): mode choice and
// summary text are derived by hashing the seed with the request digest, so
// identical requests collide to identical bytes no matter the call order.
// Single-query prompts get summaries roughly twice as long as batched ones,
// matching how models pad answers when given the context one query at a
// time.
class MockBackend : public Backend {
public:
    explicit MockBackend(FailureModeProfile profile);

    BackendResponse complete(const BackendRequest& request) override;

    int64_t calls() const { return calls_.load(); }

    // The mode complete() would pick for this request; exposed for tests.
    std::string mode_for(const BackendRequest& request) const;

private:
    FailureModeProfile profile_;
    std::atomic<int64_t> calls_{0};
};

} // namespace mqsum::backend
