#include "parse/parser.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "core/text.hpp"
#include "parse/scan.hpp"

namespace mqsum::parse {

namespace {

using nlohmann::json;

constexpr int max_depth = 512;

struct StageResult {
    bool success = false;
    std::vector<CanonRecord> records;
    int raw_count = 0;
    bool truncation = false;
    bool keys_normalized = false;
};

bool depth_ok(std::string_view text) {
    return max_nesting_depth(text, max_depth) <= max_depth;
}

// ---- json stages ----------------------------------------------------------

bool json_conforming_array(std::string_view text,
                           std::vector<CanonRecord>& out) {
    if (!depth_ok(text)) return false;
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) return false;
    for (const auto& el : doc) {
        if (!el.is_object() || el.size() != 2) return false;
        auto q = el.find("query");
        auto s = el.find("summary");
        if (q == el.end() || s == el.end() || !q->is_string() ||
            !s->is_string())
            return false;
        out.push_back({q->get<std::string>(), s->get<std::string>(), false});
    }
    return true;
}

StageResult stage_json_strict(const std::string& text) {
    StageResult r;
    r.success = json_conforming_array(text, r.records);
    r.raw_count = static_cast<int>(r.records.size());
    return r;
}

// Yields the contents of each ``` fence in order.
std::vector<std::string_view> fenced_blocks(std::string_view text) {
    std::vector<std::string_view> blocks;
    size_t pos = 0;
    while (true) {
        size_t open = text.find("```", pos);
        if (open == std::string_view::npos) break;
        size_t body = text.find('\n', open + 3);
        if (body == std::string_view::npos) break;
        ++body;
        size_t close = text.find("\n```", body);
        if (close == std::string_view::npos) break;
        blocks.push_back(text.substr(body, close - body));
        pos = close + 4;
    }
    return blocks;
}

StageResult stage_json_fenced(const std::string& text) {
    StageResult r;
    for (auto block : fenced_blocks(text)) {
        std::vector<CanonRecord> records;
        if (json_conforming_array(block, records)) {
            r.success = true;
            r.records = std::move(records);
            r.raw_count = static_cast<int>(r.records.size());
            return r;
        }
    }
    return r;
}

// The slice is only trusted when it does not drop structured content: braces
// before it or brackets/braces after it mean the response holds records the
// slice would silently lose.
bool slice_is_safe(std::string_view text, const Slice& slice) {
    std::string_view before = text.substr(0, slice.begin);
    std::string_view after = text.substr(slice.end);
    if (before.find('{') != std::string_view::npos) return false;
    if (after.find_first_of("[{") != std::string_view::npos) return false;
    return true;
}

StageResult stage_json_slice(const std::string& text) {
    StageResult r;
    Slice slice = find_bracket_slice(text);
    if (!slice.found() || !slice_is_safe(text, slice)) return r;
    std::string_view body =
        std::string_view(text).substr(slice.begin, slice.end - slice.begin);
    r.success = json_conforming_array(body, r.records);
    r.raw_count = static_cast<int>(r.records.size());
    return r;
}

StageResult scan_stage(const std::string& text, bool bare_values_are_strings,
                       bool require_some) {
    StageResult r;
    ScanResult scan = scan_brace_records(text, bare_values_are_strings);
    r.raw_count = static_cast<int>(scan.records.size());
    r.truncation = scan.trailing_unterminated;
    for (const auto& raw : scan.records) {
        if (auto canon = normalize_keys(raw)) {
            r.keys_normalized |= canon->renamed;
            r.records.push_back(std::move(*canon));
        }
    }
    r.success = !r.records.empty() || (!require_some && r.raw_count > 0);
    if (!r.success) {
        r.keys_normalized = false;
        r.records.clear();
    }
    return r;
}

StageResult stage_json_record_scan(const std::string& text) {
    return scan_stage(text, false, true);
}

// Drops everything after the last record that closed at array depth, closes
// the array, and re-parses. Recovers "[ {..}, {..}, {..." shapes the record
// scan could not mine (it normally can, so this fires rarely).
StageResult stage_json_truncation_repair(const std::string& text) {
    StageResult r;
    size_t start = text.find('[');
    if (start == std::string_view::npos) return r;
    size_t last_close = std::string_view::npos;
    int depth = 0;
    bool in_string = false;
    for (size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\' && i + 1 < text.size() && text[i + 1] != '\n') {
                ++i;
                continue;
            }
            if (c == '"' || c == '\n') in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[' || c == '{') {
            ++depth;
        } else if (c == ']' || c == '}') {
            --depth;
            if (c == '}' && depth == 1) last_close = i;
            if (depth == 0) return r; // balanced array: nothing to repair
        }
    }
    if (last_close == std::string_view::npos) return r;
    std::string repaired =
        text.substr(start, last_close + 1 - start) + "]";
    if (json_conforming_array(repaired, r.records)) {
        r.success = !r.records.empty();
        r.raw_count = static_cast<int>(r.records.size());
        r.truncation = true;
    }
    return r;
}

// ---- yaml stages ----------------------------------------------------------

bool yaml_load(std::string_view text, YAML::Node& node) {
    if (!depth_ok(text)) return false;
    try {
        node = YAML::Load(std::string(text));
        return true;
    } catch (...) {
        return false;
    }
}

bool yaml_conforming_map(const YAML::Node& el, CanonRecord& out) {
    if (!el.IsMap() || el.size() != 2) return false;
    YAML::Node q = el["query"];
    YAML::Node s = el["summary"];
    if (!q || !s || !q.IsScalar() || !s.IsScalar()) return false;
    out = {q.Scalar(), s.Scalar(), false};
    return true;
}

bool yaml_conforming_sequence(std::string_view text,
                              std::vector<CanonRecord>& out) {
    YAML::Node node;
    if (!yaml_load(text, node) || !node.IsSequence()) return false;
    for (const auto& el : node) {
        CanonRecord rec;
        if (!yaml_conforming_map(el, rec)) return false;
        out.push_back(std::move(rec));
    }
    return true;
}

StageResult stage_yaml_strict(const std::string& text) {
    StageResult r;
    r.success = yaml_conforming_sequence(text, r.records);
    r.raw_count = static_cast<int>(r.records.size());
    return r;
}

StageResult stage_yaml_single_mapping_wrap(const std::string& text) {
    StageResult r;
    YAML::Node node;
    CanonRecord rec;
    if (yaml_load(text, node) && yaml_conforming_map(node, rec)) {
        r.success = true;
        r.records.push_back(std::move(rec));
        r.raw_count = 1;
    }
    return r;
}

StageResult stage_yaml_fenced(const std::string& text) {
    StageResult r;
    for (auto block : fenced_blocks(text)) {
        std::vector<CanonRecord> records;
        if (yaml_conforming_sequence(block, records)) {
            r.success = true;
            r.records = std::move(records);
            r.raw_count = static_cast<int>(r.records.size());
            return r;
        }
        YAML::Node node;
        CanonRecord rec;
        if (yaml_load(block, node) && yaml_conforming_map(node, rec)) {
            r.success = true;
            r.records.push_back(std::move(rec));
            r.raw_count = 1;
            return r;
        }
    }
    return r;
}

StageResult stage_yaml_slice(const std::string& text) {
    StageResult r;
    Slice slice = find_bracket_slice(text);
    if (!slice.found() || !slice_is_safe(text, slice)) return r;
    std::string_view body =
        std::string_view(text).substr(slice.begin, slice.end - slice.begin);
    r.success = yaml_conforming_sequence(body, r.records);
    r.raw_count = static_cast<int>(r.records.size());
    return r;
}

// Line-oriented scan for block-style "- query: ..." records with prose and
// stray markup in between. Unquoted scalars count as strings, per yaml.
struct YamlLineScan {
    std::vector<RawRecord> records;
    bool truncation = false;
};

YamlLineScan yaml_line_scan(std::string_view text) {
    YamlLineScan out;
    RawRecord current;
    std::set<std::string> seen_canon;
    size_t field_indent = 0; // column of the key on the last field line

    auto flush = [&] {
        if (!current.fields.empty()) out.records.push_back(std::move(current));
        current = RawRecord{};
        seen_canon.clear();
    };

    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        size_t len = (eol == std::string_view::npos ? text.size() : eol) - pos;
        std::string_view line = text.substr(pos, len);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' ||
                                 line.back() == '\t'))
            line.remove_suffix(1);
        size_t indent = line.find_first_not_of(" \t");
        if (indent == std::string_view::npos) continue;
        std::string_view body = line.substr(indent);

        bool new_item = false;
        if (body == "-") {
            flush();
            continue;
        }
        if (body.substr(0, 2) == "- ") {
            new_item = true;
            indent += 2;
            body.remove_prefix(2);
        }
        if (!body.empty() && (body.front() == '{' || body.front() == '[' ||
                              body.front() == '#')) {
            flush();
            continue; // flow style or comment: not ours
        }

        size_t colon = body.find(':');
        bool keyed = false;
        std::string key, canon;
        if (colon != std::string_view::npos && colon > 0 && colon <= 64) {
            bool clean_sep = colon + 1 == body.size() || body[colon + 1] == ' ';
            key = std::string(body.substr(0, colon));
            // strip stray quotes and whitespace around the key
            while (!key.empty() && (key.front() == '"' || key.front() == '\'' ||
                                    key.front() == ' '))
                key.erase(key.begin());
            while (!key.empty() && (key.back() == '"' || key.back() == '\'' ||
                                    key.back() == ' '))
                key.pop_back();
            canon = canon_key(key);
            keyed = clean_sep && !canon.empty();
        }

        if (new_item || (keyed && seen_canon.count(canon))) flush();

        if (keyed) {
            std::string value(body.substr(colon + 1));
            size_t b = value.find_first_not_of(' ');
            value = b == std::string::npos ? "" : value.substr(b);
            if (value.size() >= 2 &&
                (value.front() == '"' || value.front() == '\'') &&
                value.back() == value.front())
                value = value.substr(1, value.size() - 2);
            seen_canon.insert(canon);
            field_indent = indent;
            current.fields.push_back({std::move(key), std::move(value), true});
        } else if (!current.fields.empty() && indent > field_indent) {
            // folded continuation: must sit deeper than its key, as in a
            // yaml block scalar; shallower prose ends the record instead
            current.fields.back().value += " ";
            current.fields.back().value += std::string(body);
        } else {
            flush();
        }
    }
    flush();

    // A trailing record with a query but no summary, after complete ones,
    // reads as a response cut off mid-record.
    if (out.records.size() >= 2) {
        const RawRecord& last = out.records.back();
        bool has_summary = false;
        for (const auto& f : last.fields) {
            std::string canon = canon_key(f.key);
            if (canon == "summary" || canon == "answer" || canon == "response")
                has_summary = true;
        }
        if (!has_summary && last.fields.size() <
                                out.records[out.records.size() - 2].fields.size()) {
            out.records.pop_back();
            out.truncation = true;
        }
    }
    return out;
}

StageResult stage_yaml_record_scan(const std::string& text) {
    StageResult r;
    YamlLineScan scan = yaml_line_scan(text);
    r.raw_count = static_cast<int>(scan.records.size());
    r.truncation = scan.truncation;
    for (const auto& raw : scan.records) {
        if (auto canon = normalize_keys(raw)) {
            r.keys_normalized |= canon->renamed;
            r.records.push_back(std::move(*canon));
        }
    }
    if (r.records.empty()) {
        // fall back to flow-style braces with yaml's unquoted strings
        StageResult flow = scan_stage(text, true, true);
        flow.truncation |= r.truncation;
        return flow;
    }
    r.success = true;
    return r;
}

StageResult stage_yaml_truncation_repair(const std::string& text) {
    StageResult r;
    size_t start = text.find('[');
    if (start == std::string_view::npos) return r;
    size_t last_close = std::string_view::npos;
    int depth = 0;
    bool in_string = false;
    for (size_t i = start; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '"' || c == '\n') in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '[' || c == '{') {
            ++depth;
        } else if (c == ']' || c == '}') {
            --depth;
            if (c == '}' && depth == 1) last_close = i;
            if (depth == 0) return r;
        }
    }
    if (last_close == std::string_view::npos) return r;
    std::string repaired = text.substr(start, last_close + 1 - start) + "]";
    if (yaml_conforming_sequence(repaired, r.records)) {
        r.success = !r.records.empty();
        r.raw_count = static_cast<int>(r.records.size());
        r.truncation = true;
    }
    return r;
}

// ---- orchestration --------------------------------------------------------

struct StageDef {
    const char* name;
    ParseGrade grade;
    StageResult (*run)(const std::string&);
};

const StageDef json_ladder[] = {
    {"strict", ParseGrade::Strict, stage_json_strict},
    {"fenced_block", ParseGrade::Repaired, stage_json_fenced},
    {"bracket_slice", ParseGrade::Repaired, stage_json_slice},
    {"record_scan", ParseGrade::Salvaged, stage_json_record_scan},
    {"truncation_repair", ParseGrade::Salvaged, stage_json_truncation_repair},
};

const StageDef yaml_ladder[] = {
    {"strict", ParseGrade::Strict, stage_yaml_strict},
    {"single_mapping_wrap", ParseGrade::Repaired,
     stage_yaml_single_mapping_wrap},
    {"fenced_block", ParseGrade::Repaired, stage_yaml_fenced},
    {"bracket_slice", ParseGrade::Repaired, stage_yaml_slice},
    {"record_scan", ParseGrade::Salvaged, stage_yaml_record_scan},
    {"truncation_repair", ParseGrade::Salvaged, stage_yaml_truncation_repair},
};

std::vector<CanonRecord> dedup_queries(std::vector<CanonRecord> records) {
    std::vector<CanonRecord> out;
    std::set<std::string> seen;
    for (auto& r : records)
        if (seen.insert(r.query).second) out.push_back(std::move(r));
    return out;
}

} // namespace

ParseReport parse(std::string_view raw, const std::vector<Query>& queries,
                  OutputFormat format) {
    std::string text = sanitize_utf8(raw);
    ParseReport report;

    const StageDef* ladder = format == OutputFormat::Json
                                 ? json_ladder
                                 : yaml_ladder;
    size_t ladder_size = format == OutputFormat::Json
                             ? std::size(json_ladder)
                             : std::size(yaml_ladder);

    bool any_truncation = false, any_keys = false;
    int best_raw = 0;
    for (size_t s = 0; s < ladder_size; ++s) {
        const StageDef& def = ladder[s];
        report.outcome.stages_applied.push_back(def.name);
        StageResult r = def.run(text);
        any_truncation |= r.truncation;
        any_keys |= r.keys_normalized;
        best_raw = std::max(best_raw, r.raw_count);
        if (r.success) {
            report.outcome.grade = def.grade;
            report.outcome.truncation_detected = r.truncation;
            report.outcome.keys_normalized = r.keys_normalized;
            report.raw_record_count = r.raw_count;
            report.pairs = align(dedup_queries(std::move(r.records)), queries);
            return report;
        }
    }

    report.outcome.grade = ParseGrade::Failed;
    report.outcome.truncation_detected = any_truncation;
    report.outcome.keys_normalized = any_keys;
    report.raw_record_count = best_raw;
    report.pairs = align({}, queries);
    return report;
}

} // namespace mqsum::parse
