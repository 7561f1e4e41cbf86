#include "parse/align.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace mqsum::parse {

namespace {

bool is_query_like(const std::string& canon) {
    return canon == "query" || canon == "question" || canon == "q";
}

bool is_summary_like(const std::string& canon) {
    return canon == "summary" || canon == "answer" || canon == "response";
}

std::string_view strip_enumeration(std::string_view text) {
    size_t i = 0;
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    size_t start = i;
    if (i < text.size() && text[i] == '#') ++i;
    size_t digits = i;
    while (i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i])))
        ++i;
    if (i == digits) return text.substr(start);
    if (i < text.size() && (text[i] == '.' || text[i] == ')' ||
                            text[i] == ':' || text[i] == '-'))
        ++i;
    else if (i < text.size() &&
             !std::isspace(static_cast<unsigned char>(text[i])))
        return text.substr(start); // "42nd" is a word, not an enumeration
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    return text.substr(i);
}

} // namespace

std::string canon_key(std::string_view key) {
    std::string out;
    for (char c : key) {
        unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u))
            out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out;
}

std::optional<CanonRecord> normalize_keys(const RawRecord& record) {
    int query_at = -1, summary_at = -1;
    int summary_fields = 0, other_string_fields = 0, other_at = -1;

    for (size_t i = 0; i < record.fields.size(); ++i) {
        const RawField& f = record.fields[i];
        if (!f.is_string) continue;
        std::string canon = canon_key(f.key);
        if (is_summary_like(canon)) {
            ++summary_fields;
            if (summary_at < 0) summary_at = static_cast<int>(i);
        } else if (is_query_like(canon)) {
            if (query_at < 0) query_at = static_cast<int>(i);
        } else {
            ++other_string_fields;
            if (other_at < 0) other_at = static_cast<int>(i);
        }
    }

    if (summary_at < 0) return std::nullopt;
    if (query_at < 0) {
        if (summary_fields != 1 || other_string_fields != 1)
            return std::nullopt;
        query_at = other_at;
    }

    CanonRecord out;
    out.query = record.fields[query_at].value;
    out.summary = record.fields[summary_at].value;
    out.renamed = record.fields[query_at].key != "query" ||
                  record.fields[summary_at].key != "summary";
    return out;
}

std::string normalize_query_text(std::string_view text) {
    std::string_view body = strip_enumeration(text);
    std::string spaced;
    spaced.reserve(body.size());
    for (char c : body) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x80 && !std::isalnum(u))
            spaced.push_back(' ');
        else
            spaced.push_back(static_cast<char>(std::tolower(u)));
    }
    return normalize_ws(spaced);
}

double query_jaccard(std::string_view a, std::string_view b) {
    auto tokens = [](std::string_view t) {
        std::set<std::string> out;
        std::string norm = normalize_query_text(t);
        for (auto part : split_ws(norm)) out.insert(std::string(part));
        return out;
    };
    std::set<std::string> ta = tokens(a), tb = tokens(b);
    if (ta.empty() || tb.empty()) return 0.0;
    size_t common = 0;
    for (const auto& t : ta) common += tb.count(t);
    return static_cast<double>(common) /
           static_cast<double>(ta.size() + tb.size() - common);
}

std::vector<QuerySummaryPair> align(const std::vector<CanonRecord>& records,
                                    const std::vector<Query>& queries) {
    std::vector<QuerySummaryPair> pairs;
    pairs.reserve(queries.size());
    for (const auto& q : queries)
        pairs.push_back({q.index, q.text, "", MatchMethod::Unmatched});

    std::vector<bool> consumed(records.size(), false);
    size_t matched = 0;

    auto take = [&](size_t qi, size_t rj, MatchMethod method) {
        pairs[qi].summary = records[rj].summary;
        pairs[qi].match_method = method;
        consumed[rj] = true;
        ++matched;
    };

    for (size_t qi = 0; qi < queries.size(); ++qi) {
        for (size_t rj = 0; rj < records.size(); ++rj) {
            if (consumed[rj]) continue;
            if (records[rj].query == queries[qi].text) {
                take(qi, rj, MatchMethod::Exact);
                break;
            }
        }
    }

    std::vector<std::string> norm_q(queries.size()), norm_r(records.size());
    for (size_t i = 0; i < queries.size(); ++i)
        norm_q[i] = normalize_query_text(queries[i].text);
    for (size_t j = 0; j < records.size(); ++j)
        norm_r[j] = normalize_query_text(records[j].query);

    for (size_t qi = 0; qi < queries.size(); ++qi) {
        if (pairs[qi].match_method != MatchMethod::Unmatched) continue;
        for (size_t rj = 0; rj < records.size(); ++rj) {
            if (consumed[rj]) continue;
            if (!norm_q[qi].empty() && norm_q[qi] == norm_r[rj]) {
                take(qi, rj, MatchMethod::Normalized);
                break;
            }
        }
    }

    struct Scored {
        double score;
        size_t qi, rj;
    };
    std::vector<Scored> scored;
    for (size_t qi = 0; qi < queries.size(); ++qi) {
        if (pairs[qi].match_method != MatchMethod::Unmatched) continue;
        for (size_t rj = 0; rj < records.size(); ++rj) {
            if (consumed[rj]) continue;
            double s = query_jaccard(queries[qi].text, records[rj].query);
            if (s >= 0.6) scored.push_back({s, qi, rj});
        }
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.qi != b.qi) return a.qi < b.qi;
        return a.rj < b.rj;
    });
    for (const auto& s : scored) {
        if (pairs[s.qi].match_method != MatchMethod::Unmatched) continue;
        if (consumed[s.rj]) continue;
        take(s.qi, s.rj, MatchMethod::Fuzzy);
    }

    if (matched == 0 && records.size() == queries.size()) {
        for (size_t i = 0; i < queries.size(); ++i)
            take(i, i, MatchMethod::Positional);
    }

    // The empty-response rule: a blank answer is no answer.
    for (auto& p : pairs) {
        if (p.match_method != MatchMethod::Unmatched &&
            normalize_ws(p.summary).empty()) {
            p.summary.clear();
            p.match_method = MatchMethod::Unmatched;
        }
    }
    return pairs;
}

} // namespace mqsum::parse
