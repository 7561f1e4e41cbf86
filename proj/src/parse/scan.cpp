#include "parse/scan.hpp"

#include <cctype>

namespace mqsum::parse {

namespace {

bool is_ws(char c) { return std::isspace(static_cast<unsigned char>(c)); }

// Cursor over a span with JSON-style string tracking.
struct Cursor {
    std::string_view text;
    size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void skip_ws() {
        while (!done() && is_ws(peek())) ++pos;
    }

    // Consumes a quoted string starting at the opening quote. Stops at the
    // closing quote, at a raw newline (invalid inside JSON strings) or EOF.
    std::string read_quoted() {
        std::string out;
        ++pos; // opening quote
        while (!done()) {
            char c = text[pos];
            if (c == '"') {
                ++pos;
                return out;
            }
            if (c == '\n') return out; // unterminated: close at newline
            if (c == '\\' && pos + 1 < text.size()) {
                char esc = text[pos + 1];
                if (esc == '\n') return out;
                switch (esc) {
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                case 'b': out.push_back('\b'); break;
                case 'f': out.push_back('\f'); break;
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case '/': out.push_back('/'); break;
                case 'u':
                    // Keep \u sequences verbatim; exact code points are not
                    // needed for matching or scoring.
                    out.push_back('\\');
                    out.push_back('u');
                    break;
                default: out.push_back(esc); break;
                }
                pos += 2;
                continue;
            }
            out.push_back(c);
            ++pos;
        }
        return out;
    }

    // Consumes a balanced {...} or [...] structure, returning its raw text.
    // Returns false when EOF arrives before balance.
    bool read_structure(std::string& raw) {
        size_t start = pos;
        int depth = 0;
        bool in_string = false;
        while (!done()) {
            char c = text[pos];
            if (in_string) {
                if (c == '\\' && pos + 1 < text.size() &&
                    text[pos + 1] != '\n') {
                    pos += 2;
                    continue;
                }
                if (c == '"' || c == '\n') in_string = false;
                ++pos;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{' || c == '[') {
                ++depth;
            } else if (c == '}' || c == ']') {
                --depth;
                if (depth == 0) {
                    ++pos;
                    raw.assign(text.substr(start, pos - start));
                    return true;
                }
            }
            ++pos;
        }
        return false;
    }
};

std::string strip_key_junk(std::string key) {
    size_t b = 0, e = key.size();
    auto junk = [](char c) {
        return is_ws(c) || c == '"' || c == '\'';
    };
    while (b < e && junk(key[b])) ++b;
    while (e > b && junk(key[e - 1])) --e;
    return key.substr(b, e - b);
}

std::string strip_value_quotes(std::string value) {
    size_t b = value.find_first_not_of(" \t\r");
    size_t e = value.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    value = value.substr(b, e - b + 1);
    if (value.size() >= 2) {
        char q = value.front();
        if ((q == '"' || q == '\'') && value.back() == q)
            return value.substr(1, value.size() - 2);
    }
    return value;
}

} // namespace

std::optional<RawRecord> parse_record_span(std::string_view span,
                                           bool bare_values_are_strings) {
    if (span.size() < 2 || span.front() != '{') return std::nullopt;
    Cursor cur{span.substr(1, span.size() - 2)};
    RawRecord record;

    while (true) {
        cur.skip_ws();
        while (!cur.done() && (cur.peek() == ',' || cur.peek() == ';')) {
            ++cur.pos;
            cur.skip_ws();
        }
        if (cur.done()) break;

        // Key: quoted, or bare text up to the next colon.
        std::string key;
        if (cur.peek() == '"') {
            key = cur.read_quoted();
        } else {
            size_t colon = cur.text.find(':', cur.pos);
            if (colon == std::string::npos) break;
            // A key never spans a structural character; if one intervenes
            // the record is malformed beyond this point.
            std::string_view raw = cur.text.substr(cur.pos, colon - cur.pos);
            if (raw.find_first_of("{}[]\n") != std::string_view::npos) break;
            key = std::string(raw);
            cur.pos = colon;
        }
        key = strip_key_junk(std::move(key));
        cur.skip_ws();
        if (cur.done() || cur.peek() != ':') break;
        ++cur.pos;
        cur.skip_ws();
        if (cur.done()) break;

        RawField field;
        field.key = std::move(key);
        char c = cur.peek();
        if (c == '"') {
            field.value = cur.read_quoted();
            field.is_string = true;
        } else if (c == '{' || c == '[') {
            std::string raw;
            if (!cur.read_structure(raw)) break;
            field.value = std::move(raw);
            field.is_string = false;
        } else {
            size_t end = cur.text.find_first_of(",}\n", cur.pos);
            if (end == std::string::npos) end = cur.text.size();
            field.value =
                strip_value_quotes(std::string(cur.text.substr(cur.pos, end - cur.pos)));
            field.is_string = bare_values_are_strings;
            cur.pos = end;
        }
        if (!field.key.empty()) record.fields.push_back(std::move(field));
    }

    if (record.fields.empty()) return std::nullopt;
    return record;
}

ScanResult scan_brace_records(std::string_view text,
                              bool bare_values_are_strings) {
    ScanResult result;
    size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != '{') {
            ++pos;
            continue;
        }
        // Find the balanced closing brace for this candidate.
        size_t start = pos;
        int depth = 0;
        bool in_string = false;
        size_t end = std::string_view::npos;
        for (size_t i = start; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (c == '\\' && i + 1 < text.size() && text[i + 1] != '\n') {
                    ++i;
                    continue;
                }
                if (c == '"' || c == '\n') in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{' || c == '[') {
                ++depth;
            } else if (c == '}' || c == ']') {
                --depth;
                if (depth <= 0) {
                    end = i + 1;
                    break;
                }
            }
        }
        if (end == std::string_view::npos) {
            result.trailing_unterminated = true;
            break;
        }
        if (auto record = parse_record_span(text.substr(start, end - start),
                                            bare_values_are_strings))
            result.records.push_back(std::move(*record));
        pos = end;
    }
    return result;
}

Slice find_bracket_slice(std::string_view text) {
    Slice slice;
    size_t start = text.find('[');
    if (start == std::string_view::npos) return slice;
    int depth = 0;
    bool in_string = false;
    for (size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\' && i + 1 < text.size() && text[i + 1] != '\n') {
                ++i;
                continue;
            }
            if (c == '"' || c == '\n') in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[' || c == '{') {
            ++depth;
        } else if (c == ']' || c == '}') {
            --depth;
            if (depth == 0) {
                slice.begin = start;
                slice.end = i + 1;
                return slice;
            }
        }
    }
    return slice;
}

int max_nesting_depth(std::string_view text, int cap) {
    int depth = 0, deepest = 0;
    bool in_string = false;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\' && i + 1 < text.size() && text[i + 1] != '\n') {
                ++i;
                continue;
            }
            if (c == '"' || c == '\n') in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{' || c == '[') {
            if (++depth > deepest) {
                deepest = depth;
                if (deepest > cap) return deepest;
            }
        } else if (c == '}' || c == ']') {
            --depth;
        }
    }
    return deepest;
}

} // namespace mqsum::parse
