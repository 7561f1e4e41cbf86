#include "run/manifest.hpp"

#include <fstream>

#include "core/error.hpp"
#include "core/io.hpp"

namespace mqsum::run {

using nlohmann::json;
using nlohmann::ordered_json;

const char* backend_kind_name(BackendKind k) {
    switch (k) {
    case BackendKind::Mock: return "mock";
    case BackendKind::Replay: return "replay";
    case BackendKind::Live: return "live";
    }
    return "mock";
}

BackendKind backend_kind_from_name(std::string_view name) {
    if (name == "mock") return BackendKind::Mock;
    if (name == "replay") return BackendKind::Replay;
    if (name == "live") return BackendKind::Live;
    throw Error(Errc::invalid_argument,
                "unknown backend kind: " + std::string(name));
}

const char* run_mode_name(RunMode m) {
    return m == RunMode::Multi ? "multi" : "single";
}

RunMode run_mode_from_name(std::string_view name) {
    if (name == "multi") return RunMode::Multi;
    if (name == "single") return RunMode::Single;
    throw Error(Errc::invalid_argument,
                "unknown run mode: " + std::string(name));
}

void RunManifest::validate() const {
    if (dataset_path.empty())
        throw Error(Errc::invalid_argument, "manifest lacks a dataset path");
    if (output_dir.empty())
        throw Error(Errc::invalid_argument,
                    "manifest lacks an output directory");
    if (template_name.empty())
        throw Error(Errc::invalid_argument, "manifest lacks a template");
    if (model.empty())
        throw Error(Errc::invalid_argument, "manifest lacks a model name");
    if (backend == BackendKind::Replay && replay_dir.empty())
        throw Error(Errc::invalid_argument,
                    "replay backend needs a replay_dir");
    params.validate();
    policy.validate();
    if (backend == BackendKind::Mock) mock_profile.validate();
}

namespace {

ordered_json profile_json(const backend::FailureModeProfile& p) {
    ordered_json j;
    j["wellformed"] = p.wellformed;
    j["numbered_no_array"] = p.numbered_no_array;
    j["hallucination"] = p.hallucination;
    j["truncated"] = p.truncated;
    j["stray_brackets"] = p.stray_brackets;
    j["wrong_keys"] = p.wrong_keys;
    j["yaml_instead_of_json"] = p.yaml_instead_of_json;
    return j;
}

backend::FailureModeProfile profile_from_json(const json& obj) {
    if (!obj.is_object())
        throw Error(Errc::schema, "mock profile must be an object", 0,
                    "profile");
    backend::FailureModeProfile p;
    p.wellformed = obj.value("wellformed", 1.0);
    p.numbered_no_array = obj.value("numbered_no_array", 0.0);
    p.hallucination = obj.value("hallucination", 0.0);
    p.truncated = obj.value("truncated", 0.0);
    p.stray_brackets = obj.value("stray_brackets", 0.0);
    p.wrong_keys = obj.value("wrong_keys", 0.0);
    p.yaml_instead_of_json = obj.value("yaml_instead_of_json", 0.0);
    return p;
}

} // namespace

ordered_json manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["dataset"] = m.dataset_path;
    j["template"] = m.template_name;
    j["params"] = {{"max_input_tokens", m.params.max_input_tokens},
                   {"max_output_tokens", m.params.max_output_tokens},
                   {"temperature", m.params.temperature}};
    j["mode"] = run_mode_name(m.mode);
    ordered_json be;
    be["kind"] = backend_kind_name(m.backend);
    be["model"] = m.model;
    if (m.backend == BackendKind::Mock) be["profile"] = profile_json(m.mock_profile);
    if (m.backend == BackendKind::Replay) be["replay_dir"] = m.replay_dir;
    if (m.backend == BackendKind::Live && !m.base_url.empty())
        be["base_url"] = m.base_url;
    j["backend"] = std::move(be);
    j["policy"] = {{"window_ms", m.policy.window_ms},
                   {"max_queries_per_prompt", m.policy.max_queries_per_prompt},
                   {"fallback", gateway::fallback_name(m.policy.fallback)},
                   {"max_single_retries_per_job",
                    m.policy.max_single_retries_per_job}};
    j["output_dir"] = m.output_dir;
    if (!m.pricing_path.empty()) j["pricing"] = m.pricing_path;
    j["seed"] = m.seed;
    return j;
}

RunManifest manifest_from_json(const json& obj) {
    if (!obj.is_object())
        throw Error(Errc::schema, "manifest must be a JSON object");
    if (!obj.contains("dataset") || !obj["dataset"].is_string())
        throw Error(Errc::schema, "manifest lacks a dataset path", 0,
                    "dataset");
    if (!obj.contains("output_dir") || !obj["output_dir"].is_string())
        throw Error(Errc::schema, "manifest lacks an output directory", 0,
                    "output_dir");

    RunManifest m;
    m.dataset_path = obj["dataset"].get<std::string>();
    m.output_dir = obj["output_dir"].get<std::string>();
    m.template_name = obj.value("template", std::string("json-default"));
    if (obj.contains("params")) {
        const json& p = obj["params"];
        m.params.max_input_tokens =
            p.value("max_input_tokens", m.params.max_input_tokens);
        m.params.max_output_tokens =
            p.value("max_output_tokens", m.params.max_output_tokens);
        m.params.temperature = p.value("temperature", m.params.temperature);
    }
    if (obj.contains("mode"))
        m.mode = run_mode_from_name(obj["mode"].get<std::string>());
    if (obj.contains("backend")) {
        const json& be = obj["backend"];
        if (!be.is_object())
            throw Error(Errc::schema, "backend must be an object", 0,
                        "backend");
        if (be.contains("kind"))
            m.backend = backend_kind_from_name(be["kind"].get<std::string>());
        m.model = be.value("model", m.model);
        if (be.contains("profile"))
            m.mock_profile = profile_from_json(be["profile"]);
        m.replay_dir = be.value("replay_dir", std::string{});
        m.base_url = be.value("base_url", std::string{});
    }
    if (obj.contains("policy")) {
        const json& p = obj["policy"];
        m.policy.window_ms = p.value("window_ms", m.policy.window_ms);
        m.policy.max_queries_per_prompt =
            p.value("max_queries_per_prompt", m.policy.max_queries_per_prompt);
        if (p.contains("fallback"))
            m.policy.fallback =
                gateway::fallback_from_name(p["fallback"].get<std::string>());
        m.policy.max_single_retries_per_job = p.value(
            "max_single_retries_per_job", m.policy.max_single_retries_per_job);
    }
    m.pricing_path = obj.value("pricing", std::string{});
    m.seed = obj.value("seed", uint64_t{1});
    m.mock_profile.seed = m.seed;
    m.validate();
    return m;
}

RunManifest load_manifest(const std::string& path) {
    json obj = json::parse(read_file(path), nullptr, false);
    if (obj.is_discarded())
        throw Error(Errc::schema, "manifest " + path + " is not valid JSON");
    return manifest_from_json(obj);
}

} // namespace mqsum::run
