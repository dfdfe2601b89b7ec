#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slopedist/types.hpp"

namespace slopedist {

// Flat "key = value" text. '#' starts a comment, blank lines are skipped and
// "key: value" is accepted as well.

struct KeyValueEntry {
  std::string key;
  std::string value;
  int line = 0;
};

std::vector<KeyValueEntry> parse_key_values(std::string_view text, std::string_view source);

/// Collapses entries into a map. Duplicate keys are a ParseError.
KeyValueMap to_map(const std::vector<KeyValueEntry>& entries, std::string_view source);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

KeyValueMap read_key_value_file(const std::filesystem::path& path);

/// Strict decimal parse of the whole (trimmed) string. Rejects inf/nan.
std::optional<double> to_number(std::string_view text) noexcept;

std::string_view trim(std::string_view s) noexcept;

}  // namespace slopedist
