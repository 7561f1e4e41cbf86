#include "prompt/template.hpp"

#include <filesystem>
#include <fstream>

#include "core/error.hpp"

namespace mqsum::prompt {

namespace {

const char* json_instruction =
    "A list of queries followed by a transcript is given below. For each of "
    "the following queries, generate the query-focused summary of the given "
    "transcript in an Array of JSON objects. You must give your response "
    "only in the required Array of JSON objects format and your response for "
    "each JSON object should contain the corresponding values for the "
    "following keys: (i) query and (ii) summary.";

const char* yaml_instruction =
    "A list of queries followed by a transcript is given below. For each of "
    "the following queries, generate the query-focused summary of the given "
    "transcript in a YAML list of mappings. You must give your response only "
    "in the required YAML list of mappings format and your response for each "
    "mapping should contain the corresponding values for the following keys: "
    "(i) query and (ii) summary.";

std::string unescape(const std::string& value) {
    std::string out;
    out.reserve(value.size());
    for (size_t i = 0; i < value.size(); ++i) {
        if (value[i] == '\\' && i + 1 < value.size()) {
            char next = value[i + 1];
            if (next == 'n') {
                out.push_back('\n');
                ++i;
                continue;
            }
            if (next == '\\') {
                out.push_back('\\');
                ++i;
                continue;
            }
        }
        out.push_back(value[i]);
    }
    return out;
}

bool contains_word(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace

void PromptTemplate::validate() const {
    if (normalize_ws(instruction).empty())
        throw Error(Errc::invalid_argument, "template instruction is empty");
    if (!contains_word(instruction, "query") ||
        !contains_word(instruction, "summary"))
        throw Error(Errc::invalid_argument,
                    "instruction must name the query and summary keys");
    for (const std::string* marker :
         {&queries_begin, &queries_end, &transcript_begin, &transcript_end}) {
        if (normalize_ws(*marker).empty())
            throw Error(Errc::invalid_argument, "empty block marker");
        if (instruction.find(*marker) != std::string::npos)
            throw Error(Errc::invalid_argument,
                        "instruction contains block marker '" + *marker + "'");
    }
}

const PromptTemplate& builtin_template(const std::string& name) {
    static const PromptTemplate json_default = [] {
        PromptTemplate t;
        t.name = "json-default";
        t.instruction = json_instruction;
        t.output_format = OutputFormat::Json;
        return t;
    }();
    static const PromptTemplate yaml_default = [] {
        PromptTemplate t;
        t.name = "yaml-default";
        t.instruction = yaml_instruction;
        t.output_format = OutputFormat::Yaml;
        return t;
    }();
    if (name == "json-default") return json_default;
    if (name == "yaml-default") return yaml_default;
    throw Error(Errc::invalid_argument, "unknown template: " + name);
}

PromptTemplate load_template(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open template " + path);

    PromptTemplate t = builtin_template("json-default");
    t.name = path;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Errc::schema,
                        "template line " + std::to_string(line_no) +
                            ": expected key=value",
                        line_no, "");
        std::string key = line.substr(0, eq);
        std::string value = unescape(line.substr(eq + 1));
        if (key == "format")
            t.output_format = format_from_name(value);
        else if (key == "instruction")
            t.instruction = value;
        else if (key == "queries_begin")
            t.queries_begin = value;
        else if (key == "queries_end")
            t.queries_end = value;
        else if (key == "transcript_begin")
            t.transcript_begin = value;
        else if (key == "transcript_end")
            t.transcript_end = value;
        else
            throw Error(Errc::schema,
                        "template line " + std::to_string(line_no) +
                            ": unknown key '" + key + "'",
                        line_no, key);
    }
    t.validate();
    return t;
}

PromptTemplate resolve_template(const std::string& name_or_path) {
    if (name_or_path == "json-default" || name_or_path == "yaml-default")
        return builtin_template(name_or_path);
    if (std::filesystem::exists(name_or_path))
        return load_template(name_or_path);
    throw Error(Errc::invalid_argument,
                "template is neither built-in nor a file: " + name_or_path);
}

} // namespace mqsum::prompt
