#include "metrics/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "core/text.hpp"

namespace mqsum::metrics {

MetricTriple make_triple(int64_t matches, int64_t cand_total,
                         int64_t ref_total) {
    MetricTriple t;
    if (cand_total > 0)
        t.precision = static_cast<double>(matches) /
                      static_cast<double>(cand_total);
    if (ref_total > 0)
        t.recall = static_cast<double>(matches) /
                   static_cast<double>(ref_total);
    if (t.precision + t.recall > 0.0)
        t.f1 = 2.0 * t.precision * t.recall / (t.precision + t.recall);
    return t;
}

namespace {

// Count of elements common to two sorted multisets.
template <typename T>
int64_t sorted_overlap(const std::vector<T>& a, const std::vector<T>& b) {
    int64_t common = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return common;
}

// Crude suffix stripper, deliberately small. See RougeOptions::stemming.
std::string light_stem(std::string word) {
    auto ends = [&](std::string_view suffix) {
        return word.size() > suffix.size() + 2 &&
               word.compare(word.size() - suffix.size(), suffix.size(),
                            suffix) == 0;
    };
    if (ends("ing"))
        word.resize(word.size() - 3);
    else if (ends("ies"))
        word.resize(word.size() - 2); // studies -> studi, ties -> ti
    else if (ends("ed") || ends("es"))
        word.resize(word.size() - 2);
    else if (word.size() > 3 && word.back() == 's' &&
             word[word.size() - 2] != 's')
        word.pop_back();
    return word;
}

} // namespace

std::vector<std::string> tokenize_for_rouge(std::string_view text,
                                            const RougeOptions& opts) {
    std::vector<std::string> tokens;
    for (std::string_view raw : split_ws(text)) {
        size_t b = 0, e = raw.size();
        auto punct = [&](char c) {
            unsigned char u = static_cast<unsigned char>(c);
            return u < 0x80 && std::ispunct(u);
        };
        while (b < e && punct(raw[b])) ++b;
        while (e > b && punct(raw[e - 1])) --e;
        if (b == e) continue;
        std::string word = to_lower_ascii(raw.substr(b, e - b));
        if (opts.stemming) word = light_stem(std::move(word));
        tokens.push_back(std::move(word));
    }
    return tokens;
}

PreparedText prepare_ids(std::span<const int32_t> ids) {
    PreparedText p;
    p.ids.assign(ids.begin(), ids.end());
    p.sorted_ids = p.ids;
    std::sort(p.sorted_ids.begin(), p.sorted_ids.end());
    if (p.ids.size() >= 2) {
        p.sorted_bigrams.reserve(p.ids.size() - 1);
        for (size_t i = 0; i + 1 < p.ids.size(); ++i)
            p.sorted_bigrams.push_back(
                (static_cast<int64_t>(p.ids[i]) << 32) |
                static_cast<uint32_t>(p.ids[i + 1]));
        std::sort(p.sorted_bigrams.begin(), p.sorted_bigrams.end());
    }
    return p;
}

RougeScore score_prepared(const PreparedText& candidate,
                          const PreparedText& reference, RougeWorkspace& ws,
                          RougeCounts* counts) {
    RougeScore score;
    int64_t m1 = sorted_overlap(candidate.sorted_ids, reference.sorted_ids);
    int64_t m2 = sorted_overlap(candidate.sorted_bigrams,
                                reference.sorted_bigrams);
    score.r1 = make_triple(m1, candidate.sorted_ids.size(),
                      reference.sorted_ids.size());
    score.r2 = make_triple(m2, candidate.sorted_bigrams.size(),
                      reference.sorted_bigrams.size());

    const auto& a = candidate.ids;
    const auto& b = reference.ids;
    int64_t lcs = 0;
    if (!a.empty() && !b.empty()) {
        if (ws.row_prev.size() < b.size() + 1) {
            ws.row_prev.resize(b.size() + 1);
            ws.row_cur.resize(b.size() + 1);
        }
        std::fill(ws.row_prev.begin(), ws.row_prev.begin() + b.size() + 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            ws.row_cur[0] = 0;
            for (size_t j = 0; j < b.size(); ++j) {
                ws.row_cur[j + 1] =
                    a[i] == b[j]
                        ? ws.row_prev[j] + 1
                        : std::max(ws.row_prev[j + 1], ws.row_cur[j]);
            }
            std::swap(ws.row_prev, ws.row_cur);
        }
        lcs = ws.row_prev[b.size()];
    }
    score.rl = make_triple(lcs, a.size(), b.size());

    if (counts) {
        counts->r1_match = m1;
        counts->r1_cand = static_cast<int64_t>(candidate.sorted_ids.size());
        counts->r1_ref = static_cast<int64_t>(reference.sorted_ids.size());
        counts->r2_match = m2;
        counts->r2_cand =
            static_cast<int64_t>(candidate.sorted_bigrams.size());
        counts->r2_ref = static_cast<int64_t>(reference.sorted_bigrams.size());
        counts->lcs = lcs;
        counts->lcs_cand = static_cast<int64_t>(a.size());
        counts->lcs_ref = static_cast<int64_t>(b.size());
    }
    return score;
}

RougeScore score_ids(std::span<const int32_t> candidate,
                     std::span<const int32_t> reference) {
    RougeWorkspace ws;
    return score_prepared(prepare_ids(candidate), prepare_ids(reference), ws);
}

RougeScore rouge(std::string_view candidate, std::string_view reference,
                 const RougeOptions& opts) {
    std::unordered_map<std::string, int32_t> vocab;
    auto intern = [&](const std::vector<std::string>& words) {
        std::vector<int32_t> ids;
        ids.reserve(words.size());
        for (const auto& w : words) {
            auto [it, fresh] =
                vocab.emplace(w, static_cast<int32_t>(vocab.size()));
            (void)fresh;
            ids.push_back(it->second);
        }
        return ids;
    };
    std::vector<int32_t> cand = intern(tokenize_for_rouge(candidate, opts));
    std::vector<int32_t> ref = intern(tokenize_for_rouge(reference, opts));
    return score_ids(cand, ref);
}

} // namespace mqsum::metrics
