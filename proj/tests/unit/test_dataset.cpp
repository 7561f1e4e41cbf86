#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "dataset/dataset.hpp"
#include "support/tmpdir.hpp"

using namespace mqsum;
using namespace mqsum::dataset;

namespace {

SingleQueryRecord rec(const std::string& id, const std::string& text,
                      const std::string& query, const std::string& ref) {
    return {id, text, query, ref};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

} // namespace

TEST_CASE("convert groups records by transcript in first-appearance order") {
    std::vector<SingleQueryRecord> records = {
        rec("m2", "text two", "q1 about m2", "r1"),
        rec("m1", "text one", "q1 about m1", "r2"),
        rec("m2", "text two", "q2 about m2", "r3"),
        rec("m2", "text two", "q3 about m2", "r4"),
    };
    auto split = convert(records, "test");
    REQUIRE(split.jobs.size() == 2);
    CHECK(split.jobs[0].transcript.id == "m2");
    CHECK(split.jobs[1].transcript.id == "m1");
    REQUIRE(split.jobs[0].queries.size() == 3);
    CHECK(split.jobs[0].queries[0].text == "q1 about m2");
    CHECK(split.jobs[0].queries[1].text == "q2 about m2");
    CHECK(split.jobs[0].queries[2].index == 3);
    REQUIRE(split.jobs[0].references.has_value());
    CHECK((*split.jobs[0].references)[1] == "r3");
    CHECK(split.jobs[1].queries.size() == 1);
}

TEST_CASE("convert keeps duplicate (transcript, query) pairs") {
    std::vector<SingleQueryRecord> records = {
        rec("m1", "text", "same query", "r1"),
        rec("m1", "text", "same query", "r2"),
    };
    auto split = convert(records);
    REQUIRE(split.jobs.size() == 1);
    CHECK(split.jobs[0].queries.size() == 2);
}

TEST_CASE("convert rejects conflicting transcript texts") {
    std::vector<SingleQueryRecord> records = {
        rec("m1", "text A", "q1", "r"),
        rec("m1", "text B", "q2", "r"),
    };
    CHECK_THROWS_WITH_AS(convert(records),
                         "id m1 appears with two different texts", Error);
}

TEST_CASE("convert rejects two ids sharing one transcript fingerprint") {
    std::vector<SingleQueryRecord> records = {
        rec("m1", "same text", "q1", "r"),
        rec("m2", "same  text", "q2", "r"), // whitespace-insensitive match
    };
    try {
        convert(records);
        FAIL("expected conflicting_transcript");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::conflicting_transcript);
    }
}

TEST_CASE("convert rejects blank required fields") {
    auto check_code = [](std::vector<SingleQueryRecord> records) {
        try {
            convert(records);
            FAIL("expected empty_record_field");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::empty_record_field);
        }
    };
    check_code({rec("  ", "text", "q", "r")});
    check_code({rec("m1", " \t", "q", "r")});
    check_code({rec("m1", "text", "", "r")});
}

TEST_CASE("references are optional as a whole") {
    SUBCASE("fully unlabeled group drops the list") {
        auto split = convert({rec("m1", "text", "q1", ""),
                              rec("m1", "text", "q2", " ")});
        CHECK_FALSE(split.jobs[0].references.has_value());
    }
    SUBCASE("mixed labels are a data error") {
        try {
            convert({rec("m1", "text", "q1", "r1"),
                     rec("m1", "text", "q2", "")});
            FAIL("expected empty_record_field");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::empty_record_field);
        }
    }
}

TEST_CASE("expand reproduces the input record list") {
    std::vector<SingleQueryRecord> records = {
        rec("m2", "text two", "q1", "r1"),
        rec("m1", "text one", "q2", "r2"),
        rec("m2", "text two", "q3", "r3"),
    };
    auto expanded = expand(convert(records));
    // Expansion regroups by transcript, so m2's records become adjacent.
    REQUIRE(expanded.size() == 3);
    CHECK(expanded[0].query_text == "q1");
    CHECK(expanded[1].query_text == "q3");
    CHECK(expanded[2].query_text == "q2");
    CHECK(expanded[2].reference_summary == "r2");

    // Converting the expansion changes nothing further.
    auto again = convert(expanded);
    REQUIRE(again.jobs.size() == 2);
    CHECK(again.jobs[0].queries.size() == 2);
    auto twice = expand(again);
    REQUIRE(twice.size() == expanded.size());
    for (size_t i = 0; i < twice.size(); ++i) {
        CHECK(twice[i].transcript_id == expanded[i].transcript_id);
        CHECK(twice[i].query_text == expanded[i].query_text);
        CHECK(twice[i].reference_summary == expanded[i].reference_summary);
    }
}

TEST_CASE("load_records reads JSONL and reports malformed lines") {
    testsupport::TmpDir dir("dataset");
    SUBCASE("well-formed file") {
        write_file(dir.file("ok.jsonl"),
                   R"({"transcript_id":"m1","transcript_text":"t","query_text":"q","reference_summary":"r"})"
                   "\n\n"
                   R"({"transcript_id":"m2","transcript_text":"t2","query_text":"q2","reference_summary":"r2"})"
                   "\n");
        auto records = load_records(dir.file("ok.jsonl"));
        REQUIRE(records.size() == 2);
        CHECK(records[1].transcript_id == "m2");
    }
    SUBCASE("missing field carries line number and field name") {
        write_file(dir.file("bad.jsonl"),
                   R"({"transcript_id":"m1","transcript_text":"t","query_text":"q","reference_summary":"r"})"
                   "\n"
                   R"({"transcript_id":"m2","transcript_text":"t2","reference_summary":"r2"})"
                   "\n");
        try {
            load_records(dir.file("bad.jsonl"));
            FAIL("expected schema error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::schema);
            CHECK(e.line() == 2);
            CHECK(e.field() == "query_text");
        }
    }
    SUBCASE("unparseable line") {
        write_file(dir.file("junk.jsonl"), "not json at all\n");
        try {
            load_records(dir.file("junk.jsonl"));
            FAIL("expected schema error");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::schema);
            CHECK(e.line() == 1);
        }
    }
    SUBCASE("missing reference_summary is allowed") {
        write_file(dir.file("nolabel.jsonl"),
                   R"({"transcript_id":"m1","transcript_text":"t","query_text":"q"})"
                   "\n");
        auto records = load_records(dir.file("nolabel.jsonl"));
        REQUIRE(records.size() == 1);
        CHECK(records[0].reference_summary.empty());
    }
    SUBCASE("missing file is an io error") {
        CHECK_THROWS_AS(load_records(dir.file("absent.jsonl")), Error);
    }
}

TEST_CASE("job files round-trip through save_jobs/load_jobs") {
    testsupport::TmpDir dir("jobs");
    auto split = convert({rec("m1", "text one", "q1", "r1"),
                          rec("m1", "text one", "q2", "r2"),
                          rec("m2", "text two", "q3", "r3")});
    save_jobs(split, dir.file("jobs.jsonl"));
    auto loaded = load_jobs(dir.file("jobs.jsonl"));
    REQUIRE(loaded.jobs.size() == 2);
    CHECK(loaded.jobs[0].transcript.id == "m1");
    CHECK(loaded.jobs[0].transcript.words == 2);
    REQUIRE(loaded.jobs[0].queries.size() == 2);
    CHECK(loaded.jobs[0].queries[1].text == "q2");
    REQUIRE(loaded.jobs[0].references.has_value());
    CHECK((*loaded.jobs[0].references)[0] == "r1");
    CHECK(loaded.jobs[0].output_format == OutputFormat::Json);
}
