#include "core/error.hpp"

namespace mqsum {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::ok: return "ok";
    case Errc::io: return "io";
    case Errc::schema: return "schema";
    case Errc::conflicting_transcript: return "conflicting_transcript";
    case Errc::empty_record_field: return "empty_record_field";
    case Errc::queries_dont_fit: return "queries_dont_fit";
    case Errc::transport: return "transport";
    case Errc::auth: return "auth";
    case Errc::context_length: return "context_length";
    case Errc::missing_recording: return "missing_recording";
    case Errc::unknown_model: return "unknown_model";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::too_few_samples: return "too_few_samples";
    case Errc::empty_input: return "empty_input";
    case Errc::job_set_mismatch: return "job_set_mismatch";
    case Errc::timeout: return "timeout";
    case Errc::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

} // namespace mqsum
