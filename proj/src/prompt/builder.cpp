#include "prompt/builder.hpp"

#include <cctype>
#include <sstream>

#include "core/error.hpp"

namespace mqsum::prompt {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

// Keeps the first `keep_words` words including the whitespace between them,
// cutting right after the last kept word.
std::string_view first_words(std::string_view text, int64_t keep_words) {
    if (keep_words <= 0) return text.substr(0, 0);
    int64_t seen = 0;
    bool in_word = false;
    for (size_t i = 0; i < text.size(); ++i) {
        bool ws = is_space(text[i]);
        if (!ws && !in_word) ++seen;
        if (ws && in_word && seen == keep_words) return text.substr(0, i);
        in_word = !ws;
    }
    return text;
}

std::string assemble(const PromptTemplate& tmpl,
                     const std::vector<Query>& queries,
                     std::string_view transcript_text) {
    std::ostringstream out;
    out << tmpl.instruction << "\n\n" << tmpl.queries_begin << "\n";
    for (const auto& q : queries) out << q.index << ". " << q.text << "\n";
    out << tmpl.queries_end << "\n\n" << tmpl.transcript_begin << "\n";
    out << transcript_text << "\n" << tmpl.transcript_end;
    return out.str();
}

} // namespace

void DecodingParams::validate() const {
    if (max_input_tokens <= 0 || max_output_tokens <= 0 || temperature <= 0)
        throw Error(Errc::invalid_argument,
                    "decoding parameters must be positive");
}

int64_t estimate_tokens_for_words(int64_t words) {
    // ceil(words * 100 / 75) == ceil(words * 4 / 3)
    return (4 * words + 2) / 3;
}

int64_t estimate_tokens(std::string_view text) {
    return estimate_tokens_for_words(word_count(text));
}

std::string escape_markers(const std::string& transcript_text,
                           const PromptTemplate& tmpl) {
    const std::string* markers[] = {&tmpl.queries_begin, &tmpl.queries_end,
                                    &tmpl.transcript_begin,
                                    &tmpl.transcript_end};
    std::string out;
    out.reserve(transcript_text.size());
    size_t pos = 0;
    while (pos <= transcript_text.size()) {
        size_t eol = transcript_text.find('\n', pos);
        size_t len = (eol == std::string::npos ? transcript_text.size() : eol) - pos;
        std::string_view line(transcript_text.data() + pos, len);
        std::string_view body = line;
        while (!body.empty() && body.front() == '\\') body.remove_prefix(1);
        for (const std::string* m : markers) {
            if (body.substr(0, m->size()) == *m) {
                out.push_back('\\');
                break;
            }
        }
        out.append(line);
        if (eol == std::string::npos) break;
        out.push_back('\n');
        pos = eol + 1;
    }
    return out;
}

RenderedPrompt render(const MultiQueryJob& job, const PromptTemplate& tmpl,
                      const DecodingParams& params) {
    job.validate();
    tmpl.validate();
    params.validate();

    std::string transcript = escape_markers(job.transcript.text, tmpl);

    // estimate_tokens(w words) <= max  <=>  w <= 3*max/4
    int64_t budget_words = 3 * params.max_input_tokens / 4;
    int64_t fixed_words = word_count(assemble(tmpl, job.queries, ""));
    if (fixed_words > budget_words)
        throw Error(Errc::queries_dont_fit,
                    "instruction and queries need " +
                        std::to_string(fixed_words) + " words, budget is " +
                        std::to_string(budget_words));

    RenderedPrompt out;
    int64_t transcript_words = word_count(transcript);
    if (fixed_words + transcript_words > budget_words) {
        out.truncated = true;
        transcript = std::string(
            first_words(transcript, budget_words - fixed_words));
    }
    out.text = assemble(tmpl, job.queries, transcript);
    out.estimated_input_tokens = estimate_tokens(out.text);
    out.job_fingerprint = fingerprint(job.transcript.text);
    return out;
}

RenderedPrompt render_single(const Transcript& transcript,
                             const std::string& query_text,
                             const PromptTemplate& tmpl,
                             const DecodingParams& params) {
    MultiQueryJob job;
    job.transcript = transcript;
    job.queries = {{1, query_text}};
    job.output_format = tmpl.output_format;
    return render(job, tmpl, params);
}

} // namespace mqsum::prompt
