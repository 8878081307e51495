#include "chaincap/kvconfig.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "chaincap/errors.hpp"

namespace chaincap::kv {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

// Parses the right-hand side of `key = value`: either a double-quoted string
// with \" \\ \n escapes, or a bare token ending at an inline " #" comment.
std::string parse_value(std::string_view rhs, int line, const std::string& key) {
  rhs = trim(rhs);
  if (!rhs.empty() && rhs.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < rhs.size(); ++i) {
      const char c = rhs[i];
      if (c == '"') break;
      if (c == '\\') {
        if (++i >= rhs.size()) break;
        switch (rhs[i]) {
          case 'n': out += '\n'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: throw ParseError(line, key, fmt::format("unknown escape '\\{}'", rhs[i]));
        }
        continue;
      }
      out += c;
    }
    if (i >= rhs.size()) throw ParseError(line, key, "unterminated string");
    const auto rest = trim(rhs.substr(i + 1));
    if (!rest.empty() && rest.front() != '#' && rest.front() != ';') {
      throw ParseError(line, key, "unexpected text after closing quote");
    }
    return out;
  }
  const auto hash = rhs.find(" #");
  if (hash != std::string_view::npos) rhs = trim(rhs.substr(0, hash));
  return std::string(rhs);
}

}  // namespace

Document parse(std::string_view text) {
  Document doc;
  std::vector<Entry>* current = &doc.root;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') {
      if (nl == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, std::string(line), "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) throw ParseError(line_no, std::string(name), "invalid section name");
      doc.sections.push_back(Section{std::string(name), line_no, {}});
      current = &doc.sections.back().entries;
      seen.clear();
    } else {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(line_no, std::string(line), "expected 'key = value'");
      }
      const std::string key(trim(line.substr(0, eq)));
      if (!valid_name(key)) throw ParseError(line_no, key, "invalid key");
      if (!seen.insert(key).second) throw ParseError(line_no, key, "duplicate key");
      current->push_back(Entry{key, parse_value(line.substr(eq + 1), line_no, key), line_no});
    }
    if (nl == text.size()) break;
  }
  return doc;
}

double as_double(const Entry& e) {
  double v = 0.0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ParseError(e.line, e.key, fmt::format("expected a finite number, got '{}'", e.value));
  }
  return v;
}

std::int64_t as_int(const Entry& e) {
  std::int64_t v = 0;
  const auto* first = e.value.data();
  const auto* last = first + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(e.line, e.key, fmt::format("expected an integer, got '{}'", e.value));
  }
  return v;
}

std::uint64_t as_uint(const Entry& e) {
  const auto v = as_int(e);
  if (v < 0) throw ParseError(e.line, e.key, fmt::format("must be >= 0, got {}", v));
  return static_cast<std::uint64_t>(v);
}

bool as_bool(const Entry& e) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ParseError(e.line, e.key, fmt::format("expected true|false, got '{}'", e.value));
}

std::vector<double> as_double_list(const Entry& e) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    out.push_back(as_double(Entry{e.key, std::string(item), e.line}));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

void check_keys(const std::vector<Entry>& entries, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  for (const auto& e : entries) {
    if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
      throw ParseError(e.line, e.key, fmt::format("unknown key in {}", where));
    }
  }
}

std::string quote(std::string_view raw) {
  std::string out = "\"";
  for (const char c : raw) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void require_schema_version(const Document& doc, std::int64_t expected) {
  for (const auto& e : doc.root) {
    if (e.key != "schema_version") continue;
    const auto v = as_int(e);
    if (v != expected) {
      throw ParseError(e.line, e.key, fmt::format("unsupported schema_version {}, expected {}", v, expected));
    }
    return;
  }
  // An empty document is accepted as "no overrides"; anything else must be versioned.
  if (!doc.root.empty() || !doc.sections.empty()) {
    throw ParseError(1, "schema_version", "missing schema_version");
  }
}

}  // namespace chaincap::kv
