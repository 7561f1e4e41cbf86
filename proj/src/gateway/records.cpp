#include "gateway/records.hpp"

#include "core/error.hpp"

namespace mqsum::gateway {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

MatchMethod match_from_name(const std::string& name) {
    for (MatchMethod m :
         {MatchMethod::Exact, MatchMethod::Normalized, MatchMethod::Fuzzy,
          MatchMethod::Positional, MatchMethod::Unmatched})
        if (name == match_method_name(m)) return m;
    throw Error(Errc::schema, "unknown match method: " + name);
}

ParseGrade grade_from_name(const std::string& name) {
    for (ParseGrade g : {ParseGrade::Strict, ParseGrade::Repaired,
                         ParseGrade::Salvaged, ParseGrade::Failed})
        if (name == grade_name(g)) return g;
    throw Error(Errc::schema, "unknown parse grade: " + name);
}

Errc errc_from_name(const std::string& name) {
    for (int c = 0; c <= static_cast<int>(Errc::invalid_argument); ++c)
        if (name == errc_name(static_cast<Errc>(c)))
            return static_cast<Errc>(c);
    return Errc::invalid_argument;
}

} // namespace

ordered_json pair_json(const QuerySummaryPair& pair) {
    ordered_json j;
    j["query_index"] = pair.query_index;
    j["query"] = pair.query_text;
    j["summary"] = pair.summary;
    j["match_method"] = match_method_name(pair.match_method);
    return j;
}

ordered_json job_result_json(const JobResult& result) {
    ordered_json j;
    auto& pairs = j["pairs"] = ordered_json::array();
    for (const auto& p : result.pairs) pairs.push_back(pair_json(p));

    ordered_json report;
    report["grade"] = grade_name(result.report.outcome.grade);
    report["truncation_detected"] = result.report.outcome.truncation_detected;
    report["keys_normalized"] = result.report.outcome.keys_normalized;
    report["stages_applied"] = result.report.outcome.stages_applied;
    report["raw_record_count"] = result.report.raw_record_count;
    auto& rpairs = report["pairs"] = ordered_json::array();
    for (const auto& p : result.report.pairs) rpairs.push_back(pair_json(p));
    j["report"] = std::move(report);

    j["backend_calls"] = result.backend_calls;
    j["usage"] = {{"input_tokens", result.usage_total.input_tokens},
                  {"output_tokens", result.usage_total.output_tokens},
                  {"estimated", result.usage_total.estimated}};
    j["fallback_invocations"] = result.fallback_invocations;
    j["retried_query_indices"] = result.retried_query_indices;
    auto& errors = j["errors"] = ordered_json::array();
    for (const auto& e : result.errors)
        errors.push_back({{"chunk_index", e.chunk_index},
                          {"code", errc_name(e.code)},
                          {"message", e.message}});
    return j;
}

ordered_json metrics_json(const MetricsSnapshot& s) {
    ordered_json j;
    j["requests_in"] = s.requests_in;
    j["jobs_run"] = s.jobs_run;
    j["backend_calls"] = s.backend_calls;
    if (s.coalesce_ratio)
        j["coalesce_ratio"] = *s.coalesce_ratio;
    ordered_json grades;
    grades[grade_name(ParseGrade::Strict)] =
        s.grades[static_cast<int>(ParseGrade::Strict)];
    grades[grade_name(ParseGrade::Repaired)] =
        s.grades[static_cast<int>(ParseGrade::Repaired)];
    grades[grade_name(ParseGrade::Salvaged)] =
        s.grades[static_cast<int>(ParseGrade::Salvaged)];
    grades[grade_name(ParseGrade::Failed)] =
        s.grades[static_cast<int>(ParseGrade::Failed)];
    j["parse_grades"] = std::move(grades);
    j["fallback_invocations"] = s.fallback_invocations;
    j["input_tokens"] = s.input_tokens;
    j["output_tokens"] = s.output_tokens;
    if (s.estimated_cost)
        j["estimated_cost_usd"] = s.estimated_cost->str();
    return j;
}

namespace {

QuerySummaryPair pair_from_json(const json& j) {
    if (!j.is_object() || !j.contains("query_index") ||
        !j["query_index"].is_number_integer() || !j.contains("query") ||
        !j["query"].is_string() || !j.contains("summary") ||
        !j["summary"].is_string() || !j.contains("match_method") ||
        !j["match_method"].is_string())
        throw Error(Errc::schema, "malformed pair record");
    QuerySummaryPair p;
    p.query_index = j["query_index"].get<int>();
    p.query_text = j["query"].get<std::string>();
    p.summary = j["summary"].get<std::string>();
    p.match_method = match_from_name(j["match_method"].get<std::string>());
    return p;
}

} // namespace

JobResult job_result_from_json(const json& obj) {
    if (!obj.is_object() || !obj.contains("pairs") ||
        !obj["pairs"].is_array() || !obj.contains("report") ||
        !obj["report"].is_object())
        throw Error(Errc::schema, "malformed job result record");
    JobResult r;
    for (const auto& p : obj["pairs"]) r.pairs.push_back(pair_from_json(p));

    const json& report = obj["report"];
    if (!report.contains("grade") || !report["grade"].is_string())
        throw Error(Errc::schema, "job result report lacks a grade");
    r.report.outcome.grade =
        grade_from_name(report["grade"].get<std::string>());
    r.report.outcome.truncation_detected =
        report.value("truncation_detected", false);
    r.report.outcome.keys_normalized = report.value("keys_normalized", false);
    if (report.contains("stages_applied"))
        for (const auto& s : report["stages_applied"])
            r.report.outcome.stages_applied.push_back(s.get<std::string>());
    r.report.raw_record_count = report.value("raw_record_count", 0);
    if (report.contains("pairs"))
        for (const auto& p : report["pairs"])
            r.report.pairs.push_back(pair_from_json(p));

    r.backend_calls = obj.value("backend_calls", 0);
    if (obj.contains("usage") && obj["usage"].is_object()) {
        r.usage_total.input_tokens =
            obj["usage"].value("input_tokens", int64_t{0});
        r.usage_total.output_tokens =
            obj["usage"].value("output_tokens", int64_t{0});
        r.usage_total.estimated = obj["usage"].value("estimated", false);
    }
    r.fallback_invocations = obj.value("fallback_invocations", 0);
    if (obj.contains("retried_query_indices"))
        for (const auto& i : obj["retried_query_indices"])
            r.retried_query_indices.push_back(i.get<int>());
    if (obj.contains("errors"))
        for (const auto& e : obj["errors"])
            r.errors.push_back({e.value("chunk_index", -1),
                                errc_from_name(e.value("code", std::string{})),
                                e.value("message", std::string{})});
    return r;
}

} // namespace mqsum::gateway
