#include "metrics/evaluate.hpp"

#include <algorithm>
#include <unordered_map>

#include "core/error.hpp"
#include "core/text.hpp"

namespace mqsum::metrics {

namespace {

std::string pair_key(const std::string& transcript_id, int query_index) {
    return transcript_id + "\x1f" + std::to_string(query_index);
}

void accumulate(LengthStats& stats, std::string_view text) {
    int words = static_cast<int>(word_count(text));
    if (words == 0) {
        ++stats.n_empty;
        return;
    }
    stats.total_words += words;
    if (stats.n_nonempty == 0) {
        stats.min_words = words;
        stats.max_words = words;
    } else {
        stats.min_words = std::min(stats.min_words, words);
        stats.max_words = std::max(stats.max_words, words);
    }
    ++stats.n_nonempty;
}

void finish(LengthStats& stats) {
    if (stats.n_nonempty > 0)
        stats.mean_words = static_cast<double>(stats.total_words) /
                           static_cast<double>(stats.n_nonempty);
}

} // namespace

FormatAccuracy format_accuracy(const std::vector<ParseGrade>& grades) {
    if (grades.empty())
        throw Error(Errc::empty_input,
                    "format accuracy needs at least one response");
    FormatAccuracy acc;
    acc.n = static_cast<int>(grades.size());
    int strict = 0, recovered = 0;
    for (ParseGrade g : grades) {
        if (g == ParseGrade::Strict) ++strict;
        if (g != ParseGrade::Failed) ++recovered;
    }
    acc.strict = static_cast<double>(strict) / acc.n;
    acc.lenient = static_cast<double>(recovered) / acc.n;
    return acc;
}

LengthStats length_stats(const std::vector<std::string>& summaries) {
    LengthStats stats;
    for (const auto& s : summaries) accumulate(stats, s);
    finish(stats);
    return stats;
}

RunSummary evaluate(const std::vector<EvalJob>& jobs,
                    const EvalOptions& opts) {
    RunSummary run;

    std::vector<ParseGrade> grades;
    grades.reserve(jobs.size());
    for (const auto& job : jobs) grades.push_back(job.grade);
    run.accuracy = format_accuracy(grades);

    std::unordered_map<std::string, int32_t> vocab;
    auto intern = [&](std::string_view text) {
        std::vector<int32_t> ids;
        for (auto& w : tokenize_for_rouge(text, opts.rouge)) {
            auto [it, fresh] =
                vocab.emplace(std::move(w), static_cast<int32_t>(vocab.size()));
            (void)fresh;
            ids.push_back(it->second);
        }
        return ids;
    };

    RougeWorkspace ws;
    RougeCounts micro_total;
    double s_r1p = 0, s_r1r = 0, s_r1f = 0;
    double s_r2p = 0, s_r2r = 0, s_r2f = 0;
    double s_rlp = 0, s_rlr = 0, s_rlf = 0;

    for (const auto& job : jobs) {
        for (const auto& pair : job.pairs) {
            PairScore ps;
            ps.transcript_id = job.transcript_id;
            ps.query_index = pair.query_index;
            ps.candidate_words = static_cast<int>(word_count(pair.candidate));
            ps.empty = ps.candidate_words == 0;

            RougeCounts counts;
            std::vector<int32_t> cand = intern(pair.candidate);
            std::vector<int32_t> ref = intern(pair.reference);
            ps.rouge = score_prepared(prepare_ids(cand), prepare_ids(ref), ws,
                                      &counts);

            micro_total.r1_match += counts.r1_match;
            micro_total.r1_cand += counts.r1_cand;
            micro_total.r1_ref += counts.r1_ref;
            micro_total.r2_match += counts.r2_match;
            micro_total.r2_cand += counts.r2_cand;
            micro_total.r2_ref += counts.r2_ref;
            micro_total.lcs += counts.lcs;
            micro_total.lcs_cand += counts.lcs_cand;
            micro_total.lcs_ref += counts.lcs_ref;

            s_r1p += ps.rouge.r1.precision;
            s_r1r += ps.rouge.r1.recall;
            s_r1f += ps.rouge.r1.f1;
            s_r2p += ps.rouge.r2.precision;
            s_r2r += ps.rouge.r2.recall;
            s_r2f += ps.rouge.r2.f1;
            s_rlp += ps.rouge.rl.precision;
            s_rlr += ps.rouge.rl.recall;
            s_rlf += ps.rouge.rl.f1;

            if (ps.empty) ++run.empty_pairs;
            accumulate(run.candidate_lengths, pair.candidate);
            accumulate(run.reference_lengths, pair.reference);
            run.pairs.push_back(std::move(ps));
        }
    }

    finish(run.candidate_lengths);
    finish(run.reference_lengths);

    if (!run.pairs.empty()) {
        double n = static_cast<double>(run.pairs.size());
        run.macro.r1 = {s_r1p / n, s_r1r / n, s_r1f / n};
        run.macro.r2 = {s_r2p / n, s_r2r / n, s_r2f / n};
        run.macro.rl = {s_rlp / n, s_rlr / n, s_rlf / n};
        run.micro.r1 = make_triple(micro_total.r1_match, micro_total.r1_cand,
                                   micro_total.r1_ref);
        run.micro.r2 = make_triple(micro_total.r2_match, micro_total.r2_cand,
                                   micro_total.r2_ref);
        run.micro.rl = make_triple(micro_total.lcs, micro_total.lcs_cand,
                                   micro_total.lcs_ref);
    }
    return run;
}

void merge_external_metric(RunSummary& run, const std::string& name,
                           const std::vector<ExternalScore>& scores) {
    std::unordered_map<std::string, size_t> index;
    for (size_t i = 0; i < run.pairs.size(); ++i)
        index[pair_key(run.pairs[i].transcript_id,
                       run.pairs[i].query_index)] = i;

    double sum = 0.0;
    int n = 0;
    for (const auto& s : scores) {
        auto it = index.find(pair_key(s.transcript_id, s.query_index));
        if (it == index.end())
            throw Error(Errc::job_set_mismatch,
                        "external metric '" + name + "' scores pair " +
                            s.transcript_id + "#" +
                            std::to_string(s.query_index) +
                            " which is not in this run");
        run.pairs[it->second].external[name] = s.value;
        sum += s.value;
        ++n;
    }
    if (n > 0) run.external_macro[name] = sum / n;
}

ComparisonReport compare_runs(const RunSummary& multi,
                              const RunSummary& single, double alpha) {
    std::unordered_map<std::string, size_t> single_index;
    for (size_t i = 0; i < single.pairs.size(); ++i)
        single_index[pair_key(single.pairs[i].transcript_id,
                              single.pairs[i].query_index)] = i;
    if (single_index.size() != multi.pairs.size() ||
        single.pairs.size() != multi.pairs.size())
        throw Error(Errc::job_set_mismatch,
                    "runs cover different pair sets");

    // Per-pair values from the single run, reordered to the multi run's
    // pair order so the t-test pairs up correctly.
    std::vector<const PairScore*> aligned;
    aligned.reserve(multi.pairs.size());
    for (const auto& p : multi.pairs) {
        auto it = single_index.find(pair_key(p.transcript_id, p.query_index));
        if (it == single_index.end())
            throw Error(Errc::job_set_mismatch,
                        "runs cover different pair sets");
        aligned.push_back(&single.pairs[it->second]);
    }

    ComparisonReport report;
    report.multi_lengths = multi.candidate_lengths;
    report.single_lengths = single.candidate_lengths;
    report.multi_accuracy = multi.accuracy;
    report.single_accuracy = single.accuracy;

    auto add_metric = [&](const std::string& name, auto per_pair,
                          double multi_macro, double single_macro) {
        std::vector<double> a, b;
        a.reserve(multi.pairs.size());
        b.reserve(multi.pairs.size());
        for (size_t i = 0; i < multi.pairs.size(); ++i) {
            a.push_back(per_pair(multi.pairs[i]));
            b.push_back(per_pair(*aligned[i]));
        }
        MetricComparison cmp;
        cmp.metric = name;
        cmp.multi_value = multi_macro;
        cmp.single_value = single_macro;
        cmp.ttest = paired_ttest(a, b, alpha);
        report.metrics.push_back(std::move(cmp));
    };

    add_metric(
        "rouge1_f1", [](const PairScore& p) { return p.rouge.r1.f1; },
        multi.macro.r1.f1, single.macro.r1.f1);
    add_metric(
        "rouge2_f1", [](const PairScore& p) { return p.rouge.r2.f1; },
        multi.macro.r2.f1, single.macro.r2.f1);
    add_metric(
        "rougeL_f1", [](const PairScore& p) { return p.rouge.rl.f1; },
        multi.macro.rl.f1, single.macro.rl.f1);

    for (const auto& [name, multi_macro] : multi.external_macro) {
        auto it = single.external_macro.find(name);
        if (it == single.external_macro.end()) continue;
        bool full = true;
        for (const auto& p : multi.pairs)
            if (!p.external.count(name)) { full = false; break; }
        for (const auto* p : aligned)
            if (!p->external.count(name)) { full = false; break; }
        if (!full) continue;
        add_metric(
            name,
            [&name](const PairScore& p) { return p.external.at(name); },
            multi_macro, it->second);
    }
    return report;
}

} // namespace mqsum::metrics
