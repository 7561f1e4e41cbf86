#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "core/error.hpp"
#include "metrics/evaluate.hpp"
#include "metrics/rouge.hpp"
#include "metrics/stats.hpp"
#include "support/oracles.hpp"

using namespace mqsum;
using namespace mqsum::metrics;

namespace {

uint64_t rng_state = 0x2545f4914f6cdd1dull;
uint64_t next_rand() {
    rng_state ^= rng_state << 13;
    rng_state ^= rng_state >> 7;
    rng_state ^= rng_state << 17;
    return rng_state;
}

void check_against_oracle(const std::vector<int32_t>& cand,
                          const std::vector<int32_t>& ref) {
    RougeScore got = score_ids(cand, ref);
    oracles::Rouge want = oracles::rouge_ids(cand, ref);
    CHECK(got.r1.precision == doctest::Approx(want.r1.precision).epsilon(1e-12));
    CHECK(got.r1.recall == doctest::Approx(want.r1.recall).epsilon(1e-12));
    CHECK(got.r1.f1 == doctest::Approx(want.r1.f1).epsilon(1e-12));
    CHECK(got.r2.precision == doctest::Approx(want.r2.precision).epsilon(1e-12));
    CHECK(got.r2.recall == doctest::Approx(want.r2.recall).epsilon(1e-12));
    CHECK(got.r2.f1 == doctest::Approx(want.r2.f1).epsilon(1e-12));
    CHECK(got.rl.precision == doctest::Approx(want.rl.precision).epsilon(1e-12));
    CHECK(got.rl.recall == doctest::Approx(want.rl.recall).epsilon(1e-12));
    CHECK(got.rl.f1 == doctest::Approx(want.rl.f1).epsilon(1e-12));
}

EvalJob job_of(const std::string& id, ParseGrade grade,
               std::vector<EvalPair> pairs) {
    EvalJob job;
    job.transcript_id = id;
    job.grade = grade;
    job.pairs = std::move(pairs);
    return job;
}

} // namespace

TEST_CASE("rouge: pinned hand-computed cases") {
    RougeScore s = rouge("the cat sat", "the cat sat on the mat");
    CHECK(s.r1.precision == doctest::Approx(1.0));
    CHECK(s.r1.recall == doctest::Approx(0.5));
    CHECK(s.r1.f1 == doctest::Approx(2.0 / 3.0));

    s = rouge("a c b d", "a b c d");
    CHECK(s.rl.precision == doctest::Approx(0.75));
    CHECK(s.rl.recall == doctest::Approx(0.75));
    CHECK(s.rl.f1 == doctest::Approx(0.75));

    s = rouge("same text here", "same text here");
    CHECK(s.r1.f1 == doctest::Approx(1.0));
    CHECK(s.r2.f1 == doctest::Approx(1.0));
    CHECK(s.rl.f1 == doctest::Approx(1.0));

    s = rouge("", "anything at all");
    CHECK(s.r1.f1 == 0.0);
    CHECK(s.r2.f1 == 0.0);
    CHECK(s.rl.f1 == 0.0);
    CHECK(s.r1.precision == 0.0);
    CHECK(s.r1.recall == 0.0);

    // single-token texts have no bigrams anywhere
    s = rouge("word", "word");
    CHECK(s.r1.f1 == doctest::Approx(1.0));
    CHECK(s.r2.f1 == 0.0);
}

TEST_CASE("rouge: tokenizer strips surrounding punctuation and lowercases") {
    auto tokens = tokenize_for_rouge("  Hello, World!  (really) -- yes.");
    REQUIRE(tokens.size() == 4);
    CHECK(tokens[0] == "hello");
    CHECK(tokens[1] == "world");
    CHECK(tokens[2] == "really");
    CHECK(tokens[3] == "yes");

    // interior punctuation survives
    tokens = tokenize_for_rouge("on/off user-friendly");
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0] == "on/off");
    CHECK(tokens[1] == "user-friendly");

    RougeOptions stemmed;
    stemmed.stemming = true;
    tokens = tokenize_for_rouge("running jumped buttons", stemmed);
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[0] == "runn");
    CHECK(tokens[1] == "jump");
    CHECK(tokens[2] == "button");

    // stemming changes scores only when enabled
    CHECK(rouge("jumping", "jumped").r1.f1 == 0.0);
    CHECK(rouge("jumping", "jumped", stemmed).r1.f1 ==
          doctest::Approx(1.0));
}

TEST_CASE("rouge: exhaustive oracle agreement on short sequences") {
    // all pairs of sequences up to length 4 over 3 symbols; the acceptance
    // suite runs the full length-8 sweep
    std::vector<std::vector<int32_t>> seqs;
    seqs.push_back({});
    size_t begin = 0;
    for (int len = 1; len <= 4; ++len) {
        size_t end = seqs.size();
        for (size_t i = begin; i < end; ++i)
            for (int32_t sym = 0; sym < 3; ++sym) {
                auto next = seqs[i];
                next.push_back(sym);
                seqs.push_back(std::move(next));
            }
        begin = end;
    }
    REQUIRE(seqs.size() == 121); // 1 + 3 + 9 + 27 + 81

    for (const auto& cand : seqs)
        for (const auto& ref : seqs) check_against_oracle(cand, ref);
}

TEST_CASE("rouge: the two oracle variants agree with each other") {
    // the dense-histogram oracle powers the full acceptance sweep; tie it to
    // the map-based one here so they can't drift apart
    for (int round = 0; round < 500; ++round) {
        std::vector<int32_t> a(next_rand() % 10), b(next_rand() % 10);
        for (auto& id : a) id = static_cast<int32_t>(next_rand() % 3);
        for (auto& id : b) id = static_cast<int32_t>(next_rand() % 3);
        oracles::Rouge slow = oracles::rouge_ids(a, b);
        oracles::Rouge fast = oracles::rouge_ids_dense(a, b, 3);
        for (auto pick : {&oracles::Rouge::r1, &oracles::Rouge::r2,
                          &oracles::Rouge::rl}) {
            CHECK((slow.*pick).precision == (fast.*pick).precision);
            CHECK((slow.*pick).recall == (fast.*pick).recall);
            CHECK((slow.*pick).f1 == (fast.*pick).f1);
        }
    }
}

TEST_CASE("rouge: random longer sequences agree with the oracle") {
    for (int round = 0; round < 300; ++round) {
        auto gen = [&] {
            std::vector<int32_t> ids(next_rand() % 40);
            for (auto& id : ids) id = static_cast<int32_t>(next_rand() % 7);
            return ids;
        };
        check_against_oracle(gen(), gen());
    }
}

TEST_CASE("rouge: swapping sides swaps precision/recall, keeps f1") {
    for (int round = 0; round < 200; ++round) {
        std::vector<int32_t> a(next_rand() % 12), b(next_rand() % 12);
        for (auto& id : a) id = static_cast<int32_t>(next_rand() % 4);
        for (auto& id : b) id = static_cast<int32_t>(next_rand() % 4);
        RougeScore ab = score_ids(a, b), ba = score_ids(b, a);
        CHECK(ab.r1.precision == doctest::Approx(ba.r1.recall));
        CHECK(ab.r1.recall == doctest::Approx(ba.r1.precision));
        CHECK(ab.r1.f1 == doctest::Approx(ba.r1.f1));
        CHECK(ab.r2.f1 == doctest::Approx(ba.r2.f1));
        CHECK(ab.rl.f1 == doctest::Approx(ba.rl.f1));
    }
}

TEST_CASE("paired t-test: pinned example against the integration oracle") {
    std::vector<double> a = {1, 2, 3, 4, 5};
    std::vector<double> b = {0, 0, 0, 0, 0};
    TTestResult r = paired_ttest(a, b);
    CHECK(r.df == 4);
    CHECK(r.t == doctest::Approx(4.2426).epsilon(1e-3));
    CHECK(r.p == doctest::Approx(oracles::t_pvalue(r.t, r.df)).epsilon(1e-6));
    CHECK(r.p == doctest::Approx(0.0132).epsilon(0.08)); // coarse sanity pin
    CHECK(r.significant);
}

TEST_CASE("paired t-test: p matches the integration oracle across a grid") {
    for (int df : {1, 2, 4, 9, 29, 99}) {
        for (double t : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
            double d = static_cast<double>(df);
            double p_impl = regularized_incomplete_beta(d / 2.0, 0.5,
                                                        d / (d + t * t));
            double p_oracle = oracles::t_pvalue(t, df);
            INFO("df=", df, " t=", t);
            CHECK(p_impl == doctest::Approx(p_oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("paired t-test: degenerate and error cases") {
    std::vector<double> zeros = {0, 0, 0};
    std::vector<double> same = {1, 1, 1};
    TTestResult r = paired_ttest(same, same);
    CHECK(r.t == 0.0);
    CHECK(r.p == 1.0);
    CHECK_FALSE(r.significant);

    std::vector<double> shifted = {2, 2, 2};
    r = paired_ttest(shifted, same);
    CHECK(std::isinf(r.t));
    CHECK(r.t > 0);
    CHECK(r.p == 0.0);
    CHECK(r.significant);

    // antisymmetry
    std::vector<double> a = {1.0, 3.0, 2.5, 0.5};
    std::vector<double> b = {0.5, 3.5, 2.0, 0.0};
    TTestResult ab = paired_ttest(a, b), ba = paired_ttest(b, a);
    CHECK(ab.t == doctest::Approx(-ba.t));
    CHECK(ab.p == doctest::Approx(ba.p));

    std::vector<double> shorter = {1, 2};
    CHECK_THROWS_AS((void)paired_ttest(a, shorter), Error);
    std::vector<double> one = {1};
    CHECK_THROWS_AS((void)paired_ttest(one, one), Error);
    try {
        (void)paired_ttest(a, shorter);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::length_mismatch);
    }
}

TEST_CASE("format accuracy") {
    std::vector<ParseGrade> grades(6, ParseGrade::Strict);
    grades.insert(grades.end(), 2, ParseGrade::Salvaged);
    grades.insert(grades.end(), 2, ParseGrade::Failed);
    FormatAccuracy acc = format_accuracy(grades);
    CHECK(acc.strict == doctest::Approx(0.6));
    CHECK(acc.lenient == doctest::Approx(0.8));
    CHECK(acc.n == 10);

    acc = format_accuracy(std::vector<ParseGrade>(35, ParseGrade::Strict));
    CHECK(acc.strict == 1.0);
    CHECK(acc.lenient == 1.0);

    acc = format_accuracy(std::vector<ParseGrade>(35, ParseGrade::Failed));
    CHECK(acc.strict == 0.0);
    CHECK(acc.lenient == 0.0);

    // Repaired counts toward lenient only
    acc = format_accuracy({ParseGrade::Repaired, ParseGrade::Strict});
    CHECK(acc.strict == doctest::Approx(0.5));
    CHECK(acc.lenient == 1.0);
    CHECK(acc.strict <= acc.lenient);

    CHECK_THROWS_AS((void)format_accuracy({}), Error);
}

TEST_CASE("length stats") {
    LengthStats s = length_stats({"one two three four five six seven"
                                  " eight nine ten",
                                  "a b c d e f g h i j k l m n o p q r s t"});
    CHECK(s.mean_words == doctest::Approx(15.0));
    CHECK(s.n_nonempty == 2);
    CHECK(s.n_empty == 0);
    CHECK(s.min_words == 10);
    CHECK(s.max_words == 20);

    s = length_stats({"", "   ", ""});
    CHECK(s.n_nonempty == 0);
    CHECK(s.n_empty == 3);
    CHECK(s.mean_words == 0.0); // undefined; n_nonempty carries the signal

    s = length_stats({"two words", ""});
    CHECK(s.mean_words == doctest::Approx(2.0));
    CHECK(s.n_empty == 1);
}

TEST_CASE("evaluate: macro counts empty pairs as zeros") {
    std::vector<EvalJob> jobs = {
        job_of("t1", ParseGrade::Strict,
               {{1, "the cat sat", "the cat sat"},
                {2, "", "some reference text"}}),
        job_of("t2", ParseGrade::Failed, {{1, "", "more reference"}}),
    };
    RunSummary run = evaluate(jobs);
    REQUIRE(run.pairs.size() == 3);
    CHECK(run.empty_pairs == 2);
    CHECK(run.accuracy.n == 2);
    CHECK(run.accuracy.strict == doctest::Approx(0.5));
    CHECK(run.accuracy.lenient == doctest::Approx(0.5));
    // pair 1 scores 1.0 everywhere, the two empties 0.0
    CHECK(run.macro.r1.f1 == doctest::Approx(1.0 / 3.0));
    CHECK(run.macro.rl.f1 == doctest::Approx(1.0 / 3.0));
    CHECK(run.candidate_lengths.n_empty == 2);
    CHECK(run.candidate_lengths.mean_words == doctest::Approx(3.0));
    CHECK(run.reference_lengths.n_nonempty == 3);

    // single-pair run: micro equals the pair's own score
    RunSummary solo = evaluate({job_of(
        "t1", ParseGrade::Strict, {{1, "the cat sat", "the cat sat on it"}})});
    CHECK(solo.micro.r1.precision ==
          doctest::Approx(solo.pairs[0].rouge.r1.precision));
    CHECK(solo.micro.rl.f1 == doctest::Approx(solo.pairs[0].rouge.rl.f1));
}

TEST_CASE("external metric merge") {
    RunSummary run = evaluate({job_of("t1", ParseGrade::Strict,
                                      {{1, "a", "a"}, {2, "b", "b"}})});
    merge_external_metric(run, "bertscore",
                          {{"t1", 1, 0.9}, {"t1", 2, 0.7}});
    CHECK(run.external_macro.at("bertscore") == doctest::Approx(0.8));
    CHECK(run.pairs[0].external.at("bertscore") == doctest::Approx(0.9));

    CHECK_THROWS_AS(
        merge_external_metric(run, "x", {{"no-such-transcript", 1, 0.5}}),
        Error);
    try {
        merge_external_metric(run, "x", {{"t1", 99, 0.5}});
    } catch (const Error& e) {
        CHECK(e.code() == Errc::job_set_mismatch);
    }
}

TEST_CASE("compare_runs: run against itself is all zero deltas") {
    std::vector<EvalJob> jobs = {
        job_of("t1", ParseGrade::Strict,
               {{1, "alpha beta gamma", "alpha beta gamma delta"},
                {2, "one two", "one two three"}}),
        job_of("t2", ParseGrade::Salvaged, {{1, "x y z", "x q z"}}),
    };
    RunSummary run = evaluate(jobs);
    ComparisonReport report = compare_runs(run, run);
    REQUIRE(report.metrics.size() == 3);
    for (const auto& m : report.metrics) {
        CHECK(m.multi_value == doctest::Approx(m.single_value));
        CHECK(m.ttest.t == 0.0);
        CHECK(m.ttest.p == 1.0);
        CHECK_FALSE(m.ttest.significant);
    }
    CHECK(report.multi_lengths.mean_words ==
          doctest::Approx(report.single_lengths.mean_words));
}

TEST_CASE("compare_runs: mismatched job sets are rejected") {
    RunSummary a = evaluate({job_of("t1", ParseGrade::Strict,
                                    {{1, "a", "a"}, {2, "b", "b"}})});
    RunSummary b = evaluate({job_of("t1", ParseGrade::Strict,
                                    {{1, "a", "a"}})});
    CHECK_THROWS_AS((void)compare_runs(a, b), Error);

    RunSummary c = evaluate({job_of("other", ParseGrade::Strict,
                                    {{1, "a", "a"}, {2, "b", "b"}})});
    try {
        (void)compare_runs(a, c);
        FAIL("expected a job-set mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::job_set_mismatch);
    }
}

TEST_CASE("compare_runs: external metric joins when fully covered") {
    auto make_run = [](double s1, double s2) {
        RunSummary run = evaluate({job_of("t1", ParseGrade::Strict,
                                          {{1, "a b", "a b"},
                                           {2, "c d", "c d"}})});
        merge_external_metric(run, "align", {{"t1", 1, s1}, {"t1", 2, s2}});
        return run;
    };
    RunSummary multi = make_run(0.9, 0.8), single = make_run(0.6, 0.7);
    ComparisonReport report = compare_runs(multi, single);
    REQUIRE(report.metrics.size() == 4);
    CHECK(report.metrics[3].metric == "align");
    CHECK(report.metrics[3].multi_value == doctest::Approx(0.85));
    CHECK(report.metrics[3].single_value == doctest::Approx(0.65));

    // partial coverage drops the metric instead of guessing
    RunSummary partial = evaluate({job_of("t1", ParseGrade::Strict,
                                          {{1, "a b", "a b"},
                                           {2, "c d", "c d"}})});
    merge_external_metric(partial, "align", {{"t1", 1, 0.5}});
    ComparisonReport r2 = compare_runs(multi, partial);
    CHECK(r2.metrics.size() == 3);
}
