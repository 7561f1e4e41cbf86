#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mqsum::parse {

struct RawField {
    std::string key;
    std::string value;
    bool is_string = false; // quoted scalar (or bare scalar in yaml mode)
};

struct RawRecord {
    std::vector<RawField> fields;
};

struct ScanResult {
    std::vector<RawRecord> records;
    bool trailing_unterminated = false; // a record was still open at EOF
};

// Walks arbitrary text and extracts every balanced {...} span that starts at
// top level, then parses each span tolerantly into key/value fields. String
// awareness uses JSON quoting, with one extra rule: a raw newline terminates
// an open string, since raw newlines are invalid inside JSON strings anyway.
// Without it a single missing quote would hide every later record.
ScanResult scan_brace_records(std::string_view text,
                              bool bare_values_are_strings);

// Tolerant parse of one {...} span: quoted or bare-to-colon keys (stray
// surrounding quotes stripped), quoted string values, balanced nested
// structures, or bare literals. Returns nothing when no field can be read.
std::optional<RawRecord> parse_record_span(std::string_view span,
                                           bool bare_values_are_strings);

struct Slice {
    size_t begin = std::string_view::npos;
    size_t end = std::string_view::npos; // one past the matching ']'
    bool found() const { return begin != std::string_view::npos; }
};

// First '[' through its balanced ']', with the same string awareness.
Slice find_bracket_slice(std::string_view text);

// Deepest bracket/brace nesting outside strings, capped. Guards the strict
// parsers (recursive descent) against pathological fuzz inputs.
int max_nesting_depth(std::string_view text, int cap);

} // namespace mqsum::parse
