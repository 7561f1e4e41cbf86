#pragma once

#include <nlohmann/json.hpp>

#include "gateway/gateway.hpp"
#include "gateway/runner.hpp"

namespace mqsum::gateway {

// Canonical record forms shared by result files and the HTTP API.
nlohmann::ordered_json pair_json(const QuerySummaryPair& pair);
nlohmann::ordered_json job_result_json(const JobResult& result);
nlohmann::ordered_json metrics_json(const MetricsSnapshot& snapshot);

// Inverse of job_result_json, for evaluating stored result files.
JobResult job_result_from_json(const nlohmann::json& obj);

} // namespace mqsum::gateway
