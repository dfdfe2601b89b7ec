#include "slopedist/keyvalue.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "slopedist/errors.hpp"

namespace slopedist {

std::string_view trim(std::string_view s) noexcept {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<KeyValueEntry> parse_key_values(std::string_view text, std::string_view source) {
  std::vector<KeyValueEntry> entries;
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto sep = line.find('=');
    if (sep == std::string_view::npos) sep = line.find(':');
    if (sep == std::string_view::npos) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, sep));
    const auto value = trim(line.substr(sep + 1));
    if (key.empty()) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": empty key");
    }
    entries.push_back({std::string(key), std::string(value), line_no});
  }
  return entries;
}

KeyValueMap to_map(const std::vector<KeyValueEntry>& entries, std::string_view source) {
  KeyValueMap map;
  for (const auto& e : entries) {
    if (!map.emplace(e.key, e.value).second) {
      throw ParseError(std::string(source) + ":" + std::to_string(e.line) + ": duplicate key '" +
                       e.key + "'");
    }
  }
  return map;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error writing " + path.string());
}

KeyValueMap read_key_value_file(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  return to_map(parse_key_values(text, path.string()), path.string());
}

std::optional<double> to_number(std::string_view text) noexcept {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace slopedist
