#include "core/fingerprint.hpp"

#include <openssl/evp.h>

#include <stdexcept>

#include "core/text.hpp"

namespace mqsum {

namespace {

std::array<unsigned char, 32> sha256(std::string_view bytes) {
    std::array<unsigned char, 32> out{};
    unsigned int out_len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
    bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
              EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
              EVP_DigestFinal_ex(ctx, out.data(), &out_len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok || out_len != out.size())
        throw std::runtime_error("SHA-256 digest failed");
    return out;
}

std::string hex_encode(const std::array<unsigned char, 32>& d) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (unsigned char b : d) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

} // namespace

std::string ContextFingerprint::hex() const { return hex_encode(digest); }

ContextFingerprint fingerprint(std::string_view text) {
    ContextFingerprint fp;
    fp.digest = sha256(normalize_ws(sanitize_utf8(text)));
    return fp;
}

std::string sha256_hex(std::string_view bytes) {
    return hex_encode(sha256(bytes));
}

} // namespace mqsum
