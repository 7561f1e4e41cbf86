#include "backend/mock.hpp"

#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

#include "backend/wire.hpp"
#include "core/error.hpp"
#include "parse/parser.hpp"

namespace mqsum::backend {

namespace {

// seed mixing: FNV-1a over the material, then a splitmix64 finalizer
uint64_t mix(uint64_t h, std::string_view bytes) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

uint64_t finalize(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t next(uint64_t& state) {
    state = finalize(state);
    return state;
}

const char* const kVocab[32] = {
    "the",    "team",    "discussed", "plan",   "update", "review",
    "notes",  "action",  "draft",     "final",  "agreed", "open",
    "issue",  "next",    "steps",     "report", "status", "change",
    "design", "test",    "result",    "detail", "point",  "topic",
    "item",   "outline", "section",   "brief",  "focus",  "scope",
    "goal",   "decision"};

std::string filler_words(uint64_t& state, size_t n) {
    std::string out;
    for (size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += kVocab[next(state) % 32];
    }
    return out;
}

// Summaries echo their query so callers can tell answers apart, then pad
// with seeded filler. Single-query prompts pad roughly twice as much.
std::string synth_summary(uint64_t h, const std::string& query_text,
                          bool single_query) {
    uint64_t state = h;
    size_t n = single_query ? 52 + next(state) % 35 : 18 + next(state) % 15;
    std::string out = "Regarding ";
    out += query_text;
    out += ": ";
    out += filler_words(state, n);
    out += '.';
    return out;
}

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

struct NumberedLine {
    int index = 0;
    std::string text;
};

bool parse_numbered(std::string_view line, NumberedLine& out) {
    size_t p = 0;
    while (p < line.size() && std::isdigit(static_cast<unsigned char>(line[p])))
        ++p;
    if (p == 0 || p >= line.size() || line[p] != '.') return false;
    size_t rest = p + 1;
    if (rest < line.size() && line[rest] == ' ') ++rest;
    out.index = std::atoi(std::string(line.substr(0, p)).c_str());
    out.text = normalize_ws(line.substr(rest));
    return !out.text.empty();
}

std::vector<std::string_view> lines_of(const std::string& text) {
    std::vector<std::string_view> lines;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        size_t len = (eol == std::string::npos ? text.size() : eol) - pos;
        lines.emplace_back(text.data() + pos, len);
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return lines;
}

// json emitters for the malformed modes; shapes mirror the fixture corpus

std::string emit_numbered_no_array(const std::vector<QuerySummaryPair>& ps) {
    std::string out;
    for (size_t i = 0; i < ps.size(); ++i) {
        out += "#" + std::to_string(i + 1) + "\n{\n  \"query\": " +
               quoted(ps[i].query_text) +
               ",\n  \"summary\": " + quoted(ps[i].summary) + "\n}";
        out += i + 1 < ps.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

std::string emit_stray_brackets(const std::vector<QuerySummaryPair>& ps) {
    std::string out;
    for (const auto& p : ps) {
        out += "[\n  {\n    \"query\": " + quoted(p.query_text) +
               ",\n    \"summary\": " + quoted(p.summary) + "\n  }\n]\n\n";
    }
    out += "]\n";
    return out;
}

std::string emit_wrong_keys(const std::vector<QuerySummaryPair>& ps) {
    static const char* const kKeyPairs[][2] = {
        {"question", "answer"}, {"q", "response"}, {"Query", "Summary"}};
    std::string out = "[\n";
    for (size_t i = 0; i < ps.size(); ++i) {
        const auto* keys = kKeyPairs[i % 3];
        out += "  {\n    " + quoted(keys[0]) + ": " +
               quoted(ps[i].query_text) + ",\n    " + quoted(keys[1]) + ": " +
               quoted(ps[i].summary) + "\n  }";
        out += i + 1 < ps.size() ? ",\n" : "\n";
    }
    out += "]\n";
    return out;
}

std::string emit_truncated(const std::vector<QuerySummaryPair>& ps,
                           OutputFormat format) {
    std::string full = parse::serialize(ps, format);
    if (ps.size() == 1) {
        // keep the one record whole but lose the array close
        size_t close = full.rfind(']');
        if (close != std::string::npos) full.erase(close);
        return full;
    }
    size_t key = full.rfind("\"summary\"");
    if (key == std::string::npos) return full;
    size_t open = full.find('"', key + 9); // quote opening the value
    if (open == std::string::npos) return full;
    // stop a handful of bytes into the value, mid string
    return full.substr(0, std::min(full.size(), open + 9));
}

std::string emit_hallucination(uint64_t h,
                               const std::vector<QuerySummaryPair>& ps) {
    uint64_t state = h;
    std::string out = "The discussion mostly settled this point";
    if (!ps.empty()) {
        out += " about ";
        out += ps.front().query_text;
    }
    out += ", and in short ";
    out += filler_words(state, 24 + next(state) % 12);
    out += ".";
    return out;
}

} // namespace

void FailureModeProfile::validate() const {
    double weights[] = {wellformed,     numbered_no_array, hallucination,
                        truncated,      stray_brackets,    wrong_keys,
                        yaml_instead_of_json};
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || w > 1.0)
            throw Error(Errc::invalid_argument,
                        "failure mode weight outside [0,1]");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw Error(Errc::invalid_argument,
                    "failure mode weights must sum to 1");
}

std::vector<Query> extract_prompt_queries(const std::string& prompt_text) {
    auto lines = lines_of(prompt_text);

    // marker-delimited block first (what the default templates render)
    size_t begin = lines.size(), end = lines.size();
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i] == "#Queries Begin") begin = i;
        else if (lines[i] == "#Queries End" && begin < i) {
            end = i;
            break;
        }
    }
    std::vector<Query> out;
    if (begin < end && end < lines.size()) {
        for (size_t i = begin + 1; i < end; ++i) {
            NumberedLine n;
            if (parse_numbered(lines[i], n))
                out.push_back({static_cast<int>(out.size()) + 1, n.text});
        }
        if (!out.empty()) return out;
    }

    // otherwise the first run of consecutively numbered lines starting at 1
    for (size_t i = 0; i < lines.size(); ++i) {
        NumberedLine n;
        if (!parse_numbered(lines[i], n) || n.index != 1) continue;
        out.push_back({1, n.text});
        for (size_t j = i + 1; j < lines.size(); ++j) {
            NumberedLine m;
            if (!parse_numbered(lines[j], m) ||
                m.index != static_cast<int>(out.size()) + 1)
                break;
            out.push_back({m.index, m.text});
        }
        break;
    }
    return out;
}

MockBackend::MockBackend(FailureModeProfile profile)
    : profile_(profile) {
    profile_.validate();
}

std::string MockBackend::mode_for(const BackendRequest& request) const {
    uint64_t h = mix(profile_.seed ^ 0xa076'1d64'78bd'642full,
                     request_digest(request));
    double u = static_cast<double>(finalize(h) >> 11) * 0x1.0p-53;
    struct {
        const char* name;
        double weight;
    } modes[] = {{"wellformed", profile_.wellformed},
                 {"numbered_no_array", profile_.numbered_no_array},
                 {"hallucination", profile_.hallucination},
                 {"truncated", profile_.truncated},
                 {"stray_brackets", profile_.stray_brackets},
                 {"wrong_keys", profile_.wrong_keys},
                 {"yaml_instead_of_json", profile_.yaml_instead_of_json}};
    double cum = 0.0;
    for (const auto& m : modes) {
        cum += m.weight;
        if (u < cum) return m.name;
    }
    return "wellformed"; // float residue; u landed past the last weight
}

BackendResponse MockBackend::complete(const BackendRequest& request) {
    calls_.fetch_add(1);

    std::string digest = request_digest(request);
    uint64_t base = mix(profile_.seed, digest);
    std::vector<Query> queries = extract_prompt_queries(request.prompt.text);
    bool single = queries.size() <= 1;

    // the instruction names the wanted format; the mock only ever sees the
    // rendered text, so it sniffs like a model would read
    bool wants_yaml = request.prompt.text.find("YAML") != std::string::npos;
    OutputFormat format = wants_yaml ? OutputFormat::Yaml : OutputFormat::Json;
    OutputFormat other = wants_yaml ? OutputFormat::Json : OutputFormat::Yaml;

    std::vector<QuerySummaryPair> pairs;
    for (const Query& q : queries) {
        uint64_t h = mix(base ^ static_cast<uint64_t>(q.index), q.text);
        pairs.push_back({q.index, q.text, synth_summary(h, q.text, single),
                         MatchMethod::Exact});
    }

    std::string mode = mode_for(request);
    std::string text;
    if (mode == "numbered_no_array") text = emit_numbered_no_array(pairs);
    else if (mode == "hallucination") text = emit_hallucination(base, pairs);
    else if (mode == "truncated") text = emit_truncated(pairs, format);
    else if (mode == "stray_brackets") text = emit_stray_brackets(pairs);
    else if (mode == "wrong_keys") text = emit_wrong_keys(pairs);
    else if (mode == "yaml_instead_of_json")
        text = parse::serialize(pairs, other);
    else text = parse::serialize(pairs, format);

    BackendResponse resp;
    resp.text = std::move(text);
    resp.usage.input_tokens = prompt::estimate_tokens(request.prompt.text);
    resp.usage.output_tokens = prompt::estimate_tokens(resp.text);
    resp.usage.estimated = true;
    resp.latency_ms = 0;
    resp.source = Source::Mock;
    resp.raw_body =
        make_completion_body(request.model_name, resp.text, resp.usage);
    return resp;
}

} // namespace mqsum::backend
