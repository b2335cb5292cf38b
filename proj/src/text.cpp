#include "foodqa/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "foodqa/error.hpp"

namespace foodqa {

namespace {

bool is_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_word_char(unsigned char c) { return is_alpha(c) || is_digit(c); }

bool g_warnings = true;

}  // namespace

void warn(std::string_view message) {
  if (!g_warnings) return;
  std::fprintf(stderr, "warning: %.*s\n", static_cast<int>(message.size()),
               message.data());
}
void set_warnings_enabled(bool enabled) { g_warnings = enabled; }
bool warnings_enabled() { return g_warnings; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<Token> tokenize_with_breaks(std::string_view text) {
  std::vector<Token> tokens;
  std::string current;
  bool pending_break = false;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back({to_lower(current), pending_break});
      current.clear();
      pending_break = false;
    }
  };
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    const auto prev = i > 0 ? static_cast<unsigned char>(text[i - 1]) : 0;
    const auto next = i + 1 < n ? static_cast<unsigned char>(text[i + 1]) : 0;
    if (is_word_char(c)) {
      current.push_back(static_cast<char>(c));
    } else if (c == '.' && !current.empty() && is_digit(prev) &&
               is_digit(next)) {
      current.push_back('.');
    } else if (c == '%' && !current.empty() && is_digit(prev)) {
      current.push_back('%');
    } else if (c == '\'' && !current.empty() && is_alpha(prev) &&
               is_alpha(next)) {
      current.push_back('\'');
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      flush();
    } else {
      flush();
      pending_break = true;
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_breaks(text)) out.push_back(std::move(t.text));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool contains_tokens(const std::vector<std::string>& haystack,
                     const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

std::string format_number(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite number");
  if (value == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace foodqa
