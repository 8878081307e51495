#pragma once

// Minimal INI-style key/value documents, shared by scenario override files
// and cluster profiles. Grammar is documented in docs/config-format.md.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace chaincap::kv {

struct Entry {
  std::string key;
  std::string value;  // unquoted, escapes resolved
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

struct Document {
  std::vector<Entry> root;  // keys before the first section header
  std::vector<Section> sections;
};

/// Throws ParseError on malformed lines or a key repeated within a section.
Document parse(std::string_view text);

double as_double(const Entry& e);
std::uint64_t as_uint(const Entry& e);
std::int64_t as_int(const Entry& e);
bool as_bool(const Entry& e);
std::vector<double> as_double_list(const Entry& e);

/// Rejects any key not in `allowed`.
void check_keys(const std::vector<Entry>& entries, std::initializer_list<std::string_view> allowed,
                std::string_view where);

/// Renders a value so that parse() returns it unchanged.
std::string quote(std::string_view raw);

/// Reads schema_version from the root and rejects anything but `expected`.
void require_schema_version(const Document& doc, std::int64_t expected);

}  // namespace chaincap::kv
