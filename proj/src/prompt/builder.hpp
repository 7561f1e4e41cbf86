#pragma once

#include <cstdint>
#include <string>

#include "core/fingerprint.hpp"
#include "core/types.hpp"
#include "prompt/template.hpp"

namespace mqsum::prompt {

struct DecodingParams {
    int64_t max_input_tokens = 20000;
    int64_t max_output_tokens = 2000;
    double temperature = 1.0;

    void validate() const;
};

struct RenderedPrompt {
    std::string text;
    int64_t estimated_input_tokens = 0;
    bool truncated = false;
    ContextFingerprint job_fingerprint; // fingerprint of the transcript text
};

// 100 tokens per 75 words, rounded up.
int64_t estimate_tokens(std::string_view text);
int64_t estimate_tokens_for_words(int64_t words);

// Renders instruction, numbered query block and transcript block. When the
// estimate exceeds the input budget, transcript words are dropped from the
// end (never instruction or queries) and truncated is set. Raises
// Errc::queries_dont_fit when instruction plus queries alone blow the budget.
RenderedPrompt render(const MultiQueryJob& job, const PromptTemplate& tmpl,
                      const DecodingParams& params);

// Same layout with a one-element query list, for retry and baseline prompts.
RenderedPrompt render_single(const Transcript& transcript,
                             const std::string& query_text,
                             const PromptTemplate& tmpl,
                             const DecodingParams& params);

// Transcript lines that start with a marker string get a backslash prefix so
// block boundaries in the rendered prompt stay unambiguous.
std::string escape_markers(const std::string& transcript_text,
                           const PromptTemplate& tmpl);

} // namespace mqsum::prompt
