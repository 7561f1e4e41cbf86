#include <cstdio>

#include "backend/backend.hpp"
#include "core/fingerprint.hpp"

namespace mqsum::backend {

std::string request_digest(const BackendRequest& request) {
    // Field separator 0x1f keeps "ab"+"c" and "a"+"bc" apart; temperature is
    // printed with enough digits to round-trip a double.
    char params[96];
    std::snprintf(params, sizeof params, "%.17g\x1f%lld\x1f%lld",
                  request.params.temperature,
                  static_cast<long long>(request.params.max_output_tokens),
                  static_cast<long long>(request.params.max_input_tokens));
    std::string material;
    material.reserve(request.prompt.text.size() + 160);
    material += request.model_name;
    material += '\x1f';
    material += params;
    material += '\x1f';
    material += request.prompt.text;
    return sha256_hex(material);
}

} // namespace mqsum::backend
