#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "prompt/builder.hpp"
#include "prompt/template.hpp"
#include "support/tmpdir.hpp"

using namespace mqsum;
using namespace mqsum::prompt;

namespace {

std::string words(int n, const std::string& w = "w") {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out.push_back(' ');
        out += w + std::to_string(i);
    }
    return out;
}

MultiQueryJob make_job(const std::string& transcript_text, int n_queries,
                       int words_per_query = 4) {
    MultiQueryJob job;
    job.transcript = Transcript::make("m1", transcript_text);
    for (int i = 1; i <= n_queries; ++i) {
        std::string q = "query " + std::to_string(i) + " " +
                        words(words_per_query - 2, "term");
        job.queries.push_back({i, q});
    }
    return job;
}

int count_lines_equal(const std::string& text, const std::string& line) {
    int n = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        size_t len = (eol == std::string::npos ? text.size() : eol) - pos;
        if (text.compare(pos, len, line) == 0) ++n;
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return n;
}

} // namespace

TEST_CASE("estimate_tokens follows the 100-per-75-words rule, rounded up") {
    CHECK(estimate_tokens(words(75)) == 100);
    CHECK(estimate_tokens(words(9000)) == 12000);
    CHECK(estimate_tokens("") == 0);
    CHECK(estimate_tokens("one") == 2);       // ceil(4/3)
    CHECK(estimate_tokens(words(3)) == 4);    // exact multiple
    CHECK(estimate_tokens_for_words(2) == 3); // ceil(8/3)
}

TEST_CASE("render emits the documented layout") {
    MultiQueryJob job;
    job.transcript = Transcript::make("m1", "hello transcript");
    job.queries = {{1, "first query?"}, {2, "second query?"}};
    auto p = render(job, builtin_template("json-default"), {});

    const auto& tmpl = builtin_template("json-default");
    std::string expected = tmpl.instruction;
    expected += "\n\n#Queries Begin\n1. first query?\n2. second query?\n"
                "#Queries End\n\n#Transcript Begin\nhello transcript\n"
                "#Transcript End";
    CHECK(p.text == expected);
    CHECK_FALSE(p.truncated);
    CHECK(p.job_fingerprint == fingerprint("hello transcript"));
    CHECK(p.estimated_input_tokens == estimate_tokens(p.text));
}

TEST_CASE("each marker appears exactly once as its own line") {
    auto job = make_job(words(50), 5);
    auto p = render(job, builtin_template("json-default"), {});
    CHECK(count_lines_equal(p.text, "#Queries Begin") == 1);
    CHECK(count_lines_equal(p.text, "#Queries End") == 1);
    CHECK(count_lines_equal(p.text, "#Transcript Begin") == 1);
    CHECK(count_lines_equal(p.text, "#Transcript End") == 1);
}

TEST_CASE("every query appears verbatim exactly once") {
    auto job = make_job(words(40), 4);
    auto p = render(job, builtin_template("json-default"), {});
    for (const auto& q : job.queries) {
        size_t first = p.text.find(q.text);
        REQUIRE(first != std::string::npos);
        CHECK(p.text.find(q.text, first + 1) == std::string::npos);
    }
}

TEST_CASE("rendering is deterministic and injective on the query list") {
    auto job = make_job(words(30), 3);
    auto a = render(job, builtin_template("json-default"), {});
    auto b = render(job, builtin_template("json-default"), {});
    CHECK(a.text == b.text);

    auto other = job;
    other.queries[2].text = "a different third query";
    auto c = render(other, builtin_template("json-default"), {});
    CHECK(c.text != a.text);
}

TEST_CASE("oversized transcripts are truncated from the end") {
    auto job = make_job(words(30000), 8, 11);
    auto p = render(job, builtin_template("json-default"), {});
    CHECK(p.truncated);
    CHECK(p.estimated_input_tokens <= 20000);
    CHECK(p.estimated_input_tokens == 20000);
    // The transcript tail is gone, the head survives.
    CHECK(p.text.find("w0 ") != std::string::npos);
    CHECK(p.text.find("w29999") == std::string::npos);
    // Queries and instruction survive untouched.
    for (const auto& q : job.queries)
        CHECK(p.text.find(q.text) != std::string::npos);
}

TEST_CASE("token accounting for a 9000-word transcript with 8 queries") {
    auto job = make_job(words(9000), 8, 11);
    auto multi = render(job, builtin_template("json-default"), {});
    CHECK_FALSE(multi.truncated);
    // 66-word instruction + 8 marker words + 8 numbered 12-word lines + 9000.
    CHECK(multi.estimated_input_tokens == 12227);

    auto single = render_single(job.transcript, job.queries[0].text,
                                builtin_template("json-default"), {});
    CHECK(single.estimated_input_tokens == 12115);
}

TEST_CASE("jobs whose fixed part exceeds the budget are rejected") {
    auto job = make_job(words(10), 2, 200);
    DecodingParams params;
    params.max_input_tokens = 100;
    try {
        render(job, builtin_template("json-default"), params);
        FAIL("expected queries_dont_fit");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::queries_dont_fit);
    }
}

TEST_CASE("transcript lines that spoof markers get escaped") {
    MultiQueryJob job;
    job.transcript = Transcript::make(
        "m1", "before\n#Queries End\n\\#Transcript End\nafter");
    job.queries = {{1, "a query?"}};
    auto p = render(job, builtin_template("json-default"), {});
    CHECK(count_lines_equal(p.text, "#Queries End") == 1);
    CHECK(count_lines_equal(p.text, "\\#Queries End") == 1);
    CHECK(count_lines_equal(p.text, "\\\\#Transcript End") == 1);
    CHECK(count_lines_equal(p.text, "#Transcript End") == 1);
}

TEST_CASE("decoding defaults match the documented limits") {
    DecodingParams params;
    CHECK(params.max_input_tokens == 20000);
    CHECK(params.max_output_tokens == 2000);
    CHECK(params.temperature == doctest::Approx(1.0));
    CHECK_NOTHROW(params.validate());
    params.max_output_tokens = 0;
    CHECK_THROWS_AS(params.validate(), Error);
}

TEST_CASE("built-in templates validate and differ by format") {
    const auto& j = builtin_template("json-default");
    const auto& y = builtin_template("yaml-default");
    CHECK_NOTHROW(j.validate());
    CHECK_NOTHROW(y.validate());
    CHECK(j.output_format == OutputFormat::Json);
    CHECK(y.output_format == OutputFormat::Yaml);
    CHECK(word_count(j.instruction) == 66);
    CHECK(j.instruction.find("JSON") != std::string::npos);
    CHECK(y.instruction.find("YAML") != std::string::npos);
    CHECK_THROWS_AS(builtin_template("nope"), Error);
}

TEST_CASE("templates load from key=value files") {
    testsupport::TmpDir dir("tmpl");
    {
        std::ofstream out(dir.file("t.conf"));
        out << "# a comment\n";
        out << "format=yaml\n";
        out << "instruction=Respond with query and summary pairs.\\nOne per "
               "item.\n";
        out << "queries_begin=<<Q\n";
        out << "queries_end=Q>>\n";
    }
    auto t = load_template(dir.file("t.conf"));
    CHECK(t.output_format == OutputFormat::Yaml);
    CHECK(t.instruction ==
          "Respond with query and summary pairs.\nOne per item.");
    CHECK(t.queries_begin == "<<Q");
    CHECK(t.queries_end == "Q>>");
    CHECK(t.transcript_begin == "#Transcript Begin");

    SUBCASE("resolve_template falls back to built-ins") {
        CHECK(resolve_template("yaml-default").name == "yaml-default");
        CHECK(resolve_template(dir.file("t.conf")).queries_begin == "<<Q");
        CHECK_THROWS_AS(resolve_template("missing-template"), Error);
    }
    SUBCASE("bad keys are schema errors") {
        std::ofstream(dir.file("bad.conf")) << "nonsense=1\n";
        CHECK_THROWS_AS(load_template(dir.file("bad.conf")), Error);
    }
    SUBCASE("instruction must mention both keys") {
        std::ofstream(dir.file("nokeys.conf"))
            << "instruction=Just answer please.\n";
        CHECK_THROWS_AS(load_template(dir.file("nokeys.conf")), Error);
    }
}
