#pragma once

// Minimal XML well-formedness check: declaration, balanced quoted
// attributes, matching tag nesting. Enough to validate the SVG emitter
// without an XML dependency.

#include <cctype>
#include <string>
#include <vector>

namespace testutil {

inline bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool saw_root = false;

  while (i < n) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    bool in_quote = false;
    while (j < n && (in_quote || text[j] != '>')) {
      if (text[j] == '"') in_quote = !in_quote;
      ++j;
    }
    if (j >= n || in_quote) return false;
    std::string tag = text.substr(i + 1, j - i - 1);
    i = j + 1;

    if (tag.empty()) return false;
    if (tag.front() == '?') {
      if (tag.back() != '?') return false;  // <?xml ... ?>
      continue;
    }
    if (tag.front() == '!') continue;  // comments / doctype
    if (tag.front() == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    if (self_closing) tag.pop_back();
    std::string name;
    for (char c : tag) {
      if (std::isspace(static_cast<unsigned char>(c))) break;
      name += c;
    }
    if (name.empty()) return false;
    // Attribute quotes must balance.
    int quotes = 0;
    for (char c : tag)
      if (c == '"') ++quotes;
    if (quotes % 2 != 0) return false;
    if (stack.empty() && saw_root) return false;  // single root element
    saw_root = true;
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty() && saw_root;
}

inline int count_occurrences(const std::string& text, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace testutil
