#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>

namespace mqsum {

// SHA-256 digest over sanitized, whitespace-normalized text. The coalescing
// gateway merges requests purely by this value, hence a cryptographic hash.
struct ContextFingerprint {
    std::array<unsigned char, 32> digest{};

    std::string hex() const;
    auto operator<=>(const ContextFingerprint&) const = default;
};

ContextFingerprint fingerprint(std::string_view text);

// Raw SHA-256 of arbitrary bytes (no normalization), hex-encoded. Used for
// request digests in the replay store.
std::string sha256_hex(std::string_view bytes);

} // namespace mqsum
