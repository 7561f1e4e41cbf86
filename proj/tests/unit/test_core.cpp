#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>

#include "core/fingerprint.hpp"
#include "core/text.hpp"
#include "core/types.hpp"

using namespace mqsum;

namespace {

std::string random_bytes(std::mt19937& rng, size_t len) {
    std::uniform_int_distribution<int> byte(0, 255);
    std::string s;
    s.reserve(len);
    for (size_t i = 0; i < len; ++i) s.push_back(static_cast<char>(byte(rng)));
    return s;
}

} // namespace

TEST_CASE("word_count counts whitespace-delimited runs") {
    CHECK(word_count("the cat sat") == 3);
    CHECK(word_count("") == 0);
    CHECK(word_count("   ") == 0);
    CHECK(word_count("a\n b\tc") == 3);
    CHECK(word_count("one") == 1);
    CHECK(word_count("  leading and trailing  ") == 3);
    CHECK(word_count("a\r\nb") == 2);
}

TEST_CASE("word_count agrees with split_ws and is additive over a space") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(0, 40);
    std::uniform_int_distribution<int> ch(0, 5);
    for (int iter = 0; iter < 200; ++iter) {
        std::string s;
        int n = len(rng);
        for (int i = 0; i < n; ++i) {
            static const char alphabet[] = {'a', 'b', ' ', '\t', '\n', 'x'};
            s.push_back(alphabet[ch(rng)]);
        }
        CHECK(word_count(s) == static_cast<int64_t>(split_ws(s).size()));
        if (word_count(s) > 0)
            CHECK(word_count(s + " " + s) == 2 * word_count(s));
    }
}

TEST_CASE("normalize_ws trims and collapses") {
    CHECK(normalize_ws("a  b") == "a b");
    CHECK(normalize_ws("  a\t\nb ") == "a b");
    CHECK(normalize_ws("") == "");
    CHECK(normalize_ws(" \t ") == "");
    CHECK(normalize_ws("already normal") == "already normal");
}

TEST_CASE("fingerprint is whitespace-insensitive but case-sensitive") {
    CHECK(fingerprint("a  b").hex() == fingerprint("a b").hex());
    CHECK(fingerprint("  a b  ").hex() == fingerprint("a b").hex());
    CHECK(fingerprint("a b").hex() != fingerprint("A b").hex());
    CHECK(fingerprint("a b").hex() != fingerprint("a c").hex());
}

TEST_CASE("fingerprint of empty text is the well-known empty-input digest") {
    CHECK(fingerprint("").hex() ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(fingerprint("   ").hex() == fingerprint("").hex());
}

TEST_CASE("fingerprint accepts arbitrary bytes") {
    std::mt19937 rng(13);
    for (int i = 0; i < 50; ++i) {
        std::string junk = random_bytes(rng, 64);
        auto fp1 = fingerprint(junk);
        auto fp2 = fingerprint(junk);
        CHECK(fp1 == fp2);
        CHECK(fp1.hex().size() == 64);
    }
}

TEST_CASE("sanitize_utf8 passes valid text through unchanged") {
    CHECK(sanitize_utf8("plain ascii") == "plain ascii");
    std::string multibyte = "caf\xC3\xA9 \xE2\x82\xAC \xF0\x9F\x98\x80";
    CHECK(sanitize_utf8(multibyte) == multibyte);
}

TEST_CASE("sanitize_utf8 replaces malformed sequences") {
    const std::string rep = "\xEF\xBF\xBD";
    CHECK(sanitize_utf8("\xFF") == rep);
    CHECK(sanitize_utf8("a\x80z") == "a" + rep + "z");
    CHECK(sanitize_utf8("\xC3") == rep);               // truncated two-byte
    CHECK(sanitize_utf8("\xE2\x82") == rep + rep);     // truncated three-byte
    CHECK(sanitize_utf8("\xC0\xAF") == rep + rep);     // overlong slash
    CHECK(sanitize_utf8("\xED\xA0\x80") == rep + rep + rep); // surrogate
    CHECK(sanitize_utf8("\xF5\x80\x80\x80").substr(0, 3) == rep);
}

TEST_CASE("sanitize_utf8 is idempotent on random bytes") {
    std::mt19937 rng(99);
    for (int i = 0; i < 200; ++i) {
        std::string junk = random_bytes(rng, 48);
        std::string once = sanitize_utf8(junk);
        CHECK(sanitize_utf8(once) == once);
    }
}

TEST_CASE("sha256_hex hashes raw bytes without normalization") {
    CHECK(sha256_hex("a b") != sha256_hex("a  b"));
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("Transcript::make records the word count") {
    auto t = Transcript::make("m1", "hello  there\nworld");
    CHECK(t.id == "m1");
    CHECK(t.words == 3);
}

TEST_CASE("MultiQueryJob validation") {
    MultiQueryJob job;
    job.transcript = Transcript::make("m1", "some text");
    job.queries = {{1, "first?"}, {2, "second?"}};
    CHECK_NOTHROW(job.validate());

    SUBCASE("empty queries rejected") {
        job.queries.clear();
        CHECK_THROWS_AS(job.validate(), Error);
    }
    SUBCASE("non-contiguous indices rejected") {
        job.queries[1].index = 3;
        CHECK_THROWS_AS(job.validate(), Error);
    }
    SUBCASE("blank query text rejected") {
        job.queries[1].text = "  ";
        CHECK_THROWS_AS(job.validate(), Error);
    }
    SUBCASE("misaligned references rejected") {
        job.references = std::vector<std::string>{"only one"};
        CHECK_THROWS_AS(job.validate(), Error);
    }
    SUBCASE("aligned references accepted") {
        job.references = std::vector<std::string>{"r1", "r2"};
        CHECK_NOTHROW(job.validate());
    }
}

TEST_CASE("enum names are stable") {
    CHECK(std::string(grade_name(ParseGrade::Strict)) == "strict");
    CHECK(std::string(grade_name(ParseGrade::Failed)) == "failed");
    CHECK(std::string(match_method_name(MatchMethod::Exact)) == "exact");
    CHECK(std::string(match_method_name(MatchMethod::Unmatched)) == "unmatched");
    CHECK(std::string(format_name(OutputFormat::Yaml)) == "yaml");
    CHECK(format_from_name("json") == OutputFormat::Json);
    CHECK_THROWS_AS(format_from_name("xml"), Error);
}
