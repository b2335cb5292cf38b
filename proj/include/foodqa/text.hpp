#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace foodqa {

struct Token {
  std::string text;
  // True when punctuation separated this token from the previous one.
  bool break_before = false;
};

// Lowercases and splits on whitespace and punctuation; punctuation is dropped.
// Numbers keep an inner decimal point and a trailing '%', a number directly
// followed by letters ("5g", "200kcal") stays one token, and inner
// apostrophes ("don't") are kept.
std::vector<Token> tokenize_with_breaks(std::string_view text);
std::vector<std::string> tokenize(std::string_view text);

std::string to_lower(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// True when `needle` occurs as a contiguous run of whole tokens in `haystack`.
bool contains_tokens(const std::vector<std::string>& haystack,
                     const std::vector<std::string>& needle);

// Shortest decimal representation that round-trips ("5", "12.5", "0.35").
std::string format_number(double value);

std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace foodqa
