#include "parse/parser.hpp"

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

namespace mqsum::parse {

std::string serialize(const std::vector<QuerySummaryPair>& pairs,
                      OutputFormat format) {
    if (format == OutputFormat::Json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& p : pairs) {
            nlohmann::ordered_json rec;
            rec["query"] = p.query_text;
            rec["summary"] = p.summary;
            arr.push_back(std::move(rec));
        }
        return arr.dump(2);
    }

    if (pairs.empty()) return "[]";
    YAML::Emitter out;
    out << YAML::BeginSeq;
    for (const auto& p : pairs) {
        out << YAML::BeginMap;
        out << YAML::Key << "query" << YAML::Value << YAML::DoubleQuoted
            << p.query_text;
        out << YAML::Key << "summary" << YAML::Value << YAML::DoubleQuoted
            << p.summary;
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    return std::string(out.c_str());
}

} // namespace mqsum::parse
