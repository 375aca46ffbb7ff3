#include <doctest.h>

#include "engagekit/sha256.hpp"
#include "engagekit/text.hpp"

using namespace engagekit;

TEST_SUITE("text") {

TEST_CASE("word_count counts maximal non-whitespace runs") {
    CHECK(word_count("what is a hypervisor") == 4);
    CHECK(word_count("") == 0);
    CHECK(word_count("  VM  vs.  container  ") == 3);
    CHECK(word_count("one") == 1);
    CHECK(word_count("tabs\tand\nnewlines") == 3);
}

TEST_CASE("word_count treats unicode whitespace as separators") {
    // NBSP and ideographic space between words
    CHECK(word_count("a\xC2\xA0no") == 2);
    CHECK(word_count("x\xE3\x80\x80y") == 2);
    // punctuation stays attached
    CHECK(word_count("type-1, type-2.") == 2);
}

TEST_CASE("word_count is additive over concatenation with a space") {
    const char* samples[] = {"hello", "a b", "one two three", "x-y!"};
    for (const char* a : samples)
        for (const char* b : samples) {
            std::string joined = std::string(a) + " " + b;
            CHECK(word_count(joined) == word_count(a) + word_count(b));
        }
}

TEST_CASE("utf8 validation finds the first bad byte") {
    CHECK(!utf8_invalid_at("plain ascii"));
    CHECK(!utf8_invalid_at("caf\xC3\xA9"));
    CHECK(utf8_invalid_at("ok\xFFnope") == 2);
    CHECK(utf8_invalid_at("\xC3(") == 0);           // truncated sequence
    CHECK(utf8_invalid_at("\xED\xA0\x80") == 0);    // surrogate half
    CHECK(utf8_invalid_at("\xC0\xAF") == 0);        // overlong
}

TEST_CASE("tokenize_lower strips edge punctuation and lowercases") {
    auto tokens = tokenize_lower("How does a Type-1 hypervisor differ? (really)");
    REQUIRE(tokens.size() == 7);
    CHECK(tokens[3] == "type-1");
    CHECK(tokens[5] == "differ");
    CHECK(tokens[6] == "really");
}

TEST_CASE("count_token_seq matches whole-token runs only") {
    auto tokens = tokenize_lower("a virtual machine is not a machine-learning rig");
    CHECK(count_token_seq(tokens, "virtual machine") == 1);
    CHECK(count_token_seq(tokens, "machine") == 1);  // machine-learning stays one token
    CHECK(count_token_seq(tokens, "vs") == 0);
    CHECK(count_token_seq(tokens, "a") == 2);
}

TEST_CASE("trim removes surrounding unicode whitespace") {
    CHECK(trim("  x  ") == "x");
    CHECK(trim("\t\n") == "");
    CHECK(trim("a b") == "a b");
}

TEST_CASE("truncate_words keeps a prefix substring") {
    std::string text = "one two  three four";
    CHECK(truncate_words(text, 2) == "one two");
    CHECK(truncate_words(text, 10) == text);
    CHECK(truncate_words(text, 0) == "");
    CHECK(text.find(truncate_words(text, 3)) == 0);
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.0, 1.0, 160.0, 52.5, 31.0 / 52.5 * 160.0, 0.1}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("format_utc renders ISO-8601 Z") {
    CHECK(format_utc(0) == "1970-01-01T00:00:00Z");
    CHECK(format_utc(1758000000) == "2025-09-16T05:20:00Z");
}

TEST_CASE("sha256 matches FIPS 180-4 vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // 64-byte block boundary
    std::string block(64, 'a');
    CHECK(sha256_hex(block) ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

}  // TEST_SUITE
