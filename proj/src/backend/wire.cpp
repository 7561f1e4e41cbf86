#include "backend/wire.hpp"

#include <nlohmann/json.hpp>

#include "core/error.hpp"

namespace mqsum::backend {

using nlohmann::json;
using nlohmann::ordered_json;

std::string build_request_body(const BackendRequest& request) {
    ordered_json body;
    body["model"] = request.model_name;
    body["messages"] = ordered_json::array(
        {{{"role", "user"}, {"content", request.prompt.text}}});
    body["temperature"] = request.params.temperature;
    body["max_tokens"] = request.params.max_output_tokens;
    return body.dump();
}

ParsedCompletion parse_completion_body(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error(Errc::schema, "completion body is not a JSON object");
    ParsedCompletion out;
    if (j.contains("model") && j["model"].is_string())
        out.model = j["model"].get<std::string>();

    const json* msg = nullptr;
    if (j.contains("choices") && j["choices"].is_array() &&
        !j["choices"].empty() && j["choices"][0].is_object() &&
        j["choices"][0].contains("message") &&
        j["choices"][0]["message"].is_object())
        msg = &j["choices"][0]["message"];
    if (!msg || !msg->contains("content") || !(*msg)["content"].is_string())
        throw Error(Errc::schema,
                    "completion body has no choices[0].message.content");
    out.text = (*msg)["content"].get<std::string>();

    bool have_usage = false;
    if (j.contains("usage") && j["usage"].is_object()) {
        const json& u = j["usage"];
        if (u.contains("prompt_tokens") &&
            u["prompt_tokens"].is_number_integer() &&
            u.contains("completion_tokens") &&
            u["completion_tokens"].is_number_integer()) {
            out.usage.input_tokens = u["prompt_tokens"].get<int64_t>();
            out.usage.output_tokens = u["completion_tokens"].get<int64_t>();
            have_usage = out.usage.input_tokens >= 0 &&
                         out.usage.output_tokens >= 0;
        }
    }
    if (!have_usage) {
        out.usage = {};
        out.usage.estimated = true; // caller fills via the estimator
    }
    return out;
}

std::string make_completion_body(const std::string& model,
                                 const std::string& text, const Usage& usage) {
    ordered_json body;
    body["model"] = model;
    body["choices"] = ordered_json::array(
        {{{"index", 0},
          {"message", {{"role", "assistant"}, {"content", text}}},
          {"finish_reason", "stop"}}});
    body["usage"] = {{"prompt_tokens", usage.input_tokens},
                     {"completion_tokens", usage.output_tokens},
                     {"total_tokens", usage.input_tokens + usage.output_tokens}};
    return body.dump();
}

} // namespace mqsum::backend
