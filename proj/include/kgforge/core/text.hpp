#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgforge::text {

// Decodes UTF-8 into codepoints. Invalid bytes decode as U+FFFD.
std::vector<uint32_t> decode_utf8(std::string_view s);

std::string encode_utf8(const std::vector<uint32_t>& cps);

void append_utf8(std::string& out, uint32_t cp);

bool is_space(uint32_t cp);
bool is_ascii_punct(uint32_t cp);

// Punctuation considered strippable at the ends of a name: ASCII
// punctuation, general punctuation (dashes, quotes), and CJK brackets.
bool is_surrounding_punct(uint32_t cp);

// Full-width ASCII (U+FF01..U+FF5E) to half-width; ideographic space to ' '.
uint32_t fold_width(uint32_t cp);

uint32_t ascii_lower(uint32_t cp);

// Writing-script classes used for the question/answer language check.
enum class Script { none, latin, han, kana, hangul, cyrillic, greek, arabic };

const char* script_name(Script s);

// Script of one codepoint; Script::none for digits, punctuation, symbols.
Script script_of(uint32_t cp);

// Most frequent letter script of a string; Script::none when no letters.
Script dominant_script(std::string_view s);

// Codepoint-level n-grams (each gram re-encoded to UTF-8).
std::vector<std::string> char_ngrams(std::string_view s, size_t n);

std::string trim(std::string_view s);

} // namespace kgforge::text
