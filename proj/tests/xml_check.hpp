#pragma once

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace xmlcheck {

/// Minimal well-formedness check: balanced tags, quoted unique attributes, known entities.
/// Returns an empty string when the document is fine, otherwise a description of the fault.
/// Also counts start tags by element name.
struct Result {
  std::string error;
  std::map<std::string, int> elements;
  std::vector<std::string> polyline_points;
};

inline Result check(std::string_view doc) {
  Result res;
  std::vector<std::string> stack;
  std::size_t i = 0, roots = 0;
  auto fail = [&](std::string msg) {
    res.error = msg + " at offset " + std::to_string(i);
    return res;
  };
  auto is_name = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.'; };
  auto entity_ok = [](std::string_view text) {
    for (std::size_t p = text.find('&'); p != std::string_view::npos; p = text.find('&', p + 1)) {
      const auto semi = text.find(';', p);
      if (semi == std::string_view::npos) return false;
      const auto ent = text.substr(p + 1, semi - p - 1);
      if (ent != "amp" && ent != "lt" && ent != "gt" && ent != "quot" && ent != "apos" && !ent.starts_with('#')) return false;
    }
    return true;
  };

  while (i < doc.size()) {
    const auto lt = doc.find('<', i);
    const auto text = doc.substr(i, lt == std::string_view::npos ? std::string_view::npos : lt - i);
    if (!entity_ok(text) || text.find('>') != std::string_view::npos) return fail("bad character data");
    if (stack.empty() && text.find_first_not_of(" \t\r\n") != std::string_view::npos) return fail("text outside root");
    if (lt == std::string_view::npos) break;
    i = lt;
    if (doc.substr(i).starts_with("<?")) {
      const auto end = doc.find("?>", i);
      if (end == std::string_view::npos) return fail("unterminated declaration");
      i = end + 2;
      continue;
    }
    if (doc.substr(i).starts_with("<!--")) {
      const auto end = doc.find("-->", i);
      if (end == std::string_view::npos) return fail("unterminated comment");
      i = end + 3;
      continue;
    }
    if (doc.substr(i).starts_with("</")) {
      std::size_t j = i + 2;
      while (j < doc.size() && is_name(doc[j])) ++j;
      const std::string name(doc.substr(i + 2, j - i - 2));
      while (j < doc.size() && std::isspace(static_cast<unsigned char>(doc[j]))) ++j;
      if (j >= doc.size() || doc[j] != '>') return fail("bad end tag");
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
      i = j + 1;
      continue;
    }
    std::size_t j = i + 1;
    while (j < doc.size() && is_name(doc[j])) ++j;
    const std::string name(doc.substr(i + 1, j - i - 1));
    if (name.empty()) return fail("empty element name");
    if (stack.empty() && roots++ > 0) return fail("multiple roots");
    std::map<std::string, std::string> attrs;
    for (;;) {
      while (j < doc.size() && std::isspace(static_cast<unsigned char>(doc[j]))) ++j;
      if (j >= doc.size()) return fail("unterminated tag");
      if (doc[j] == '>' || doc.substr(j).starts_with("/>")) break;
      const std::size_t a = j;
      while (j < doc.size() && is_name(doc[j])) ++j;
      const std::string attr(doc.substr(a, j - a));
      if (attr.empty() || j + 1 >= doc.size() || doc[j] != '=' || (doc[j + 1] != '"' && doc[j + 1] != '\'')) {
        return fail("bad attribute in <" + name + ">");
      }
      const char q = doc[j + 1];
      const auto close = doc.find(q, j + 2);
      if (close == std::string_view::npos) return fail("unterminated attribute");
      const auto value = doc.substr(j + 2, close - j - 2);
      if (value.find('<') != std::string_view::npos || !entity_ok(value)) return fail("bad attribute value");
      if (!attrs.emplace(attr, std::string(value)).second) return fail("duplicate attribute " + attr);
      j = close + 1;
    }
    ++res.elements[name];
    if (name == "polyline") res.polyline_points.push_back(attrs["points"]);
    if (doc[j] == '>') {
      stack.push_back(name);
      i = j + 1;
    } else {
      i = j + 2;
    }
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  if (roots != 1) return fail("no root element");
  return res;
}

}  // namespace xmlcheck
