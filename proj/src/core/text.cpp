#include "kgforge/core/text.hpp"

#include <map>

namespace kgforge::text {

std::vector<uint32_t> decode_utf8(std::string_view s) {
    std::vector<uint32_t> out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        uint32_t cp = 0xFFFD;
        size_t len = 1;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xE0) == 0xC0 && i + 1 < s.size()) {
            unsigned char c1 = static_cast<unsigned char>(s[i + 1]);
            if ((c1 & 0xC0) == 0x80) {
                cp = (uint32_t(c & 0x1F) << 6) | (c1 & 0x3F);
                len = 2;
                if (cp < 0x80) cp = 0xFFFD;
            }
        } else if ((c & 0xF0) == 0xE0 && i + 2 < s.size()) {
            unsigned char c1 = static_cast<unsigned char>(s[i + 1]);
            unsigned char c2 = static_cast<unsigned char>(s[i + 2]);
            if ((c1 & 0xC0) == 0x80 && (c2 & 0xC0) == 0x80) {
                cp = (uint32_t(c & 0x0F) << 12) | (uint32_t(c1 & 0x3F) << 6) | (c2 & 0x3F);
                len = 3;
                if (cp < 0x800) cp = 0xFFFD;
            }
        } else if ((c & 0xF8) == 0xF0 && i + 3 < s.size()) {
            unsigned char c1 = static_cast<unsigned char>(s[i + 1]);
            unsigned char c2 = static_cast<unsigned char>(s[i + 2]);
            unsigned char c3 = static_cast<unsigned char>(s[i + 3]);
            if ((c1 & 0xC0) == 0x80 && (c2 & 0xC0) == 0x80 && (c3 & 0xC0) == 0x80) {
                cp = (uint32_t(c & 0x07) << 18) | (uint32_t(c1 & 0x3F) << 12) |
                     (uint32_t(c2 & 0x3F) << 6) | (c3 & 0x3F);
                len = 4;
                if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
            }
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(const std::vector<uint32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (uint32_t cp : cps) append_utf8(out, cp);
    return out;
}

bool is_space(uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
           cp == 0x00A0 || cp == 0x3000;
}

bool is_ascii_punct(uint32_t cp) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

bool is_surrounding_punct(uint32_t cp) {
    if (is_ascii_punct(cp)) return true;
    if (cp >= 0x2010 && cp <= 0x2027) return true; // dashes, quotes, bullets
    if (cp >= 0x3001 && cp <= 0x3011) return true; // CJK commas, brackets
    if (cp == 0x00B7 || cp == 0x2E3A) return true;
    return false;
}

uint32_t fold_width(uint32_t cp) {
    if (cp >= 0xFF01 && cp <= 0xFF5E) return cp - 0xFEE0;
    if (cp == 0x3000) return 0x20;
    return cp;
}

uint32_t ascii_lower(uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    return cp;
}

const char* script_name(Script s) {
    switch (s) {
        case Script::none: return "none";
        case Script::latin: return "latin";
        case Script::han: return "han";
        case Script::kana: return "kana";
        case Script::hangul: return "hangul";
        case Script::cyrillic: return "cyrillic";
        case Script::greek: return "greek";
        case Script::arabic: return "arabic";
    }
    return "none";
}

Script script_of(uint32_t cp) {
    if ((cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return Script::latin;
    if ((cp >= 0x00C0 && cp <= 0x024F) && cp != 0x00D7 && cp != 0x00F7) return Script::latin;
    if (cp >= 0x4E00 && cp <= 0x9FFF) return Script::han;
    if (cp >= 0x3400 && cp <= 0x4DBF) return Script::han;
    if (cp >= 0xF900 && cp <= 0xFAFF) return Script::han;
    if (cp >= 0x3040 && cp <= 0x30FF) return Script::kana;
    if (cp >= 0xAC00 && cp <= 0xD7AF) return Script::hangul;
    if (cp >= 0x1100 && cp <= 0x11FF) return Script::hangul;
    if (cp >= 0x0400 && cp <= 0x04FF) return Script::cyrillic;
    if (cp >= 0x0370 && cp <= 0x03FF) return Script::greek;
    if (cp >= 0x0600 && cp <= 0x06FF) return Script::arabic;
    return Script::none;
}

Script dominant_script(std::string_view s) {
    std::map<Script, size_t> counts;
    for (uint32_t cp : decode_utf8(s)) {
        Script sc = script_of(cp);
        if (sc != Script::none) counts[sc]++;
    }
    Script best = Script::none;
    size_t best_count = 0;
    for (auto& [sc, n] : counts) {
        if (n > best_count) {
            best = sc;
            best_count = n;
        }
    }
    return best;
}

std::vector<std::string> char_ngrams(std::string_view s, size_t n) {
    std::vector<std::string> grams;
    auto cps = decode_utf8(s);
    if (n == 0 || cps.size() < n) return grams;
    grams.reserve(cps.size() - n + 1);
    for (size_t i = 0; i + n <= cps.size(); ++i) {
        std::string gram;
        for (size_t j = 0; j < n; ++j) append_utf8(gram, cps[i + j]);
        grams.push_back(std::move(gram));
    }
    return grams;
}

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace kgforge::text
