#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "backend/mock.hpp"
#include "gateway/runner.hpp"
#include "prompt/builder.hpp"

namespace mqsum::run {

enum class BackendKind { Mock, Replay, Live };

const char* backend_kind_name(BackendKind k);
BackendKind backend_kind_from_name(std::string_view name);

// Multi renders one prompt per job (chunked at the policy cap); Single
// renders every query alone, the per-call baseline arm.
enum class RunMode { Multi, Single };

const char* run_mode_name(RunMode m);
RunMode run_mode_from_name(std::string_view name);

// Everything a batch run depends on. For mock and replay backends the
// manifest is the complete reproducibility key: running it twice writes
// byte-identical results and recordings.
struct RunManifest {
    std::string dataset_path;                   // converted job file
    std::string template_name = "json-default"; // builtin name or file path
    prompt::DecodingParams params;
    RunMode mode = RunMode::Multi;

    BackendKind backend = BackendKind::Mock;
    backend::FailureModeProfile mock_profile; // mock only; seed comes below
    std::string replay_dir;                   // replay only
    std::string base_url;                     // live only; "" keeps default
    std::string model = "mock-llm";

    gateway::CoalescePolicy policy;
    std::string output_dir;
    std::string pricing_path; // "" skips cost accounting
    uint64_t seed = 1;        // sole entropy source for mock runs

    void validate() const;
};

nlohmann::ordered_json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& obj);
RunManifest load_manifest(const std::string& path);

} // namespace mqsum::run
