#include "engagekit/text.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <ctime>

namespace engagekit {

namespace {

// Decode one UTF-8 code point starting at `i`. Returns the code point and
// advances `i`, or returns nullopt on malformed input (leaving `i` at the
// offending byte).
std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return std::nullopt;
    }
    if (i + len > s.size()) return std::nullopt;
    for (int k = 1; k < len; ++k) {
        unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) return std::nullopt;
        cp = (cp << 6) | (bk & 0x3F);
    }
    // Reject overlong encodings, surrogates and out-of-range values.
    static constexpr std::array<char32_t, 5> min_for_len = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < min_for_len[len]) return std::nullopt;
    if (cp >= 0xD800 && cp <= 0xDFFF) return std::nullopt;
    if (cp > 0x10FFFF) return std::nullopt;
    i += len;
    return cp;
}

bool is_ascii_alnum(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace

std::optional<std::size_t> utf8_invalid_at(std::string_view bytes) {
    std::size_t i = 0;
    while (i < bytes.size()) {
        std::size_t at = i;
        if (!decode_utf8(bytes, i)) return at;
    }
    return std::nullopt;
}

bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case U' ':
        case U'\t':
        case U'\n':
        case U'\v':
        case U'\f':
        case U'\r':
        case 0x0085:  // NEL
        case 0x00A0:  // NBSP
        case 0x1680:  // ogham space mark
        case 0x2028:  // line separator
        case 0x2029:  // paragraph separator
        case 0x202F:  // narrow NBSP
        case 0x205F:  // medium mathematical space
        case 0x3000:  // ideographic space
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

int word_count(std::string_view text) {
    int words = 0;
    bool in_word = false;
    std::size_t i = 0;
    while (i < text.size()) {
        auto cp = decode_utf8(text, i);
        if (!cp) {
            // Treat undecodable bytes as word characters; validation happens
            // at parse time, not here.
            ++i;
            in_word = true;
            continue;
        }
        if (is_unicode_space(*cp)) {
            if (in_word) ++words;
            in_word = false;
        } else {
            in_word = true;
        }
    }
    if (in_word) ++words;
    return words;
}

std::string_view trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t last_word_end = 0;
    bool seen_word = false;
    std::size_t first_word = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t at = i;
        auto cp = decode_utf8(text, i);
        bool space = cp && is_unicode_space(*cp);
        if (!space) {
            if (!seen_word) {
                first_word = at;
                seen_word = true;
            }
            last_word_end = i;
        }
    }
    if (!seen_word) return text.substr(0, 0);
    begin = first_word;
    return text.substr(begin, last_word_end - begin);
}

std::vector<std::string> tokenize_lower(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    auto flush = [&] {
        // Strip non-alphanumeric ASCII from both edges; multibyte sequences
        // count as word characters and survive.
        std::size_t b = 0, e = current.size();
        auto edge = [&](std::size_t k) {
            unsigned char c = static_cast<unsigned char>(current[k]);
            return c < 0x80 && !is_ascii_alnum(c);
        };
        while (b < e && edge(b)) ++b;
        while (e > b && edge(e - 1)) --e;
        if (e > b) tokens.push_back(current.substr(b, e - b));
        current.clear();
    };
    while (i < text.size()) {
        std::size_t at = i;
        auto cp = decode_utf8(text, i);
        if (!cp) {
            current.push_back(text[at]);
            ++i;
            continue;
        }
        if (is_unicode_space(*cp)) {
            if (!current.empty()) flush();
        } else {
            for (std::size_t k = at; k < i; ++k) {
                char c = text[k];
                if (static_cast<unsigned char>(c) < 0x80)
                    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                current.push_back(c);
            }
        }
    }
    if (!current.empty()) flush();
    return tokens;
}

int count_token_seq(const std::vector<std::string>& tokens, std::string_view phrase) {
    std::vector<std::string> needle = tokenize_lower(phrase);
    if (needle.empty() || needle.size() > tokens.size()) return 0;
    int count = 0;
    for (std::size_t i = 0; i + needle.size() <= tokens.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < needle.size(); ++k) {
            if (tokens[i + k] != needle[k]) {
                match = false;
                break;
            }
        }
        if (match) ++count;
    }
    return count;
}

bool contains_token_seq(const std::vector<std::string>& tokens, std::string_view phrase) {
    return count_token_seq(tokens, phrase) > 0;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out)
        if (static_cast<unsigned char>(c) < 0x80)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string format_fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string format_utc(std::int64_t epoch_seconds) {
    std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string_view truncate_words(std::string_view text, int max_words) {
    if (max_words <= 0) return text.substr(0, 0);
    int words = 0;
    bool in_word = false;
    std::size_t i = 0;
    std::size_t last_word_end = 0;
    while (i < text.size()) {
        std::size_t at = i;
        auto cp = decode_utf8(text, i);
        bool space = cp && is_unicode_space(*cp);
        if (space) {
            in_word = false;
        } else {
            if (!in_word && words == max_words) return text.substr(0, last_word_end);
            if (!in_word) ++words;
            in_word = true;
            last_word_end = i;
        }
    }
    return text;  // at most max_words words, keep everything
}

std::string html_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace engagekit
