#pragma once

#include <string>

#include "core/types.hpp"

namespace mqsum::prompt {

struct PromptTemplate {
    std::string name;
    std::string instruction;
    std::string queries_begin = "#Queries Begin";
    std::string queries_end = "#Queries End";
    std::string transcript_begin = "#Transcript Begin";
    std::string transcript_end = "#Transcript End";
    OutputFormat output_format = OutputFormat::Json;

    // Instruction must name both record keys and must not contain any marker
    // string, otherwise block boundaries would be ambiguous.
    void validate() const;
};

// Built-in templates: "json-default" and "yaml-default".
const PromptTemplate& builtin_template(const std::string& name);

// Plain key=value file, one pair per line. Keys: format, instruction,
// queries_begin, queries_end, transcript_begin, transcript_end. Values may
// use \n and \\ escapes. Lines starting with '#' are comments.
PromptTemplate load_template(const std::string& path);

// Resolves a template reference: a built-in name or a path to a config file.
PromptTemplate resolve_template(const std::string& name_or_path);

} // namespace mqsum::prompt
