#include "core/text.hpp"

#include <cctype>

namespace mqsum {

namespace {

inline bool is_ws(unsigned char c) { return std::isspace(c) != 0; }

// Second-byte range for a given lead byte, per the Unicode well-formedness
// table. Returns false for lead bytes that never start a sequence.
bool utf8_seq(const unsigned char* p, size_t avail, size_t& len) {
    unsigned char b0 = p[0];
    if (b0 < 0x80) { len = 1; return true; }
    if (b0 < 0xC2) return false;
    unsigned char lo = 0x80, hi = 0xBF;
    if (b0 <= 0xDF) {
        len = 2;
    } else if (b0 <= 0xEF) {
        len = 3;
        if (b0 == 0xE0) lo = 0xA0;
        if (b0 == 0xED) hi = 0x9F;
    } else if (b0 <= 0xF4) {
        len = 4;
        if (b0 == 0xF0) lo = 0x90;
        if (b0 == 0xF4) hi = 0x8F;
    } else {
        return false;
    }
    if (avail < len) return false;
    if (p[1] < lo || p[1] > hi) return false;
    for (size_t i = 2; i < len; ++i)
        if (p[i] < 0x80 || p[i] > 0xBF) return false;
    return true;
}

} // namespace

int64_t word_count(std::string_view text) {
    int64_t n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool ws = is_ws(c);
        if (!ws && !in_word) ++n;
        in_word = !ws;
    }
    return n;
}

std::string normalize_ws(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (is_ws(c)) {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

std::string sanitize_utf8(std::string_view text) {
    static const char replacement[] = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(text.size());
    const auto* p = reinterpret_cast<const unsigned char*>(text.data());
    size_t i = 0, n = text.size();
    while (i < n) {
        size_t len = 0;
        if (utf8_seq(p + i, n - i, len)) {
            out.append(text.substr(i, len));
            i += len;
        } else {
            out.append(replacement, 3);
            ++i;
        }
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view text) {
    std::vector<std::string_view> parts;
    size_t i = 0, n = text.size();
    while (i < n) {
        while (i < n && is_ws(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < n && !is_ws(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) parts.push_back(text.substr(start, i - start));
    }
    return parts;
}

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace mqsum
