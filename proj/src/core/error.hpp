#pragma once

#include <stdexcept>
#include <string>

namespace mqsum {

enum class Errc {
    ok = 0,
    io,
    schema,
    conflicting_transcript,
    empty_record_field,
    queries_dont_fit,
    transport,
    auth,
    context_length,
    missing_recording,
    unknown_model,
    length_mismatch,
    too_few_samples,
    empty_input,
    job_set_mismatch,
    timeout,
    invalid_argument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    // Schema-style errors carry the 1-based input line and the offending field.
    Error(Errc code, std::string message, int line, std::string field)
        : std::runtime_error(std::move(message)), code_(code), line_(line),
          field_(std::move(field)) {}

    Errc code() const { return code_; }
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    Errc code_;
    int line_ = 0;
    std::string field_;
};

} // namespace mqsum
