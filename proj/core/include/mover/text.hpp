#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mover::text {

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);

/// Splits camelCase, PascalCase, snake_case and digit runs into lowercase words.
std::vector<std::string> split_identifier(std::string_view identifier);

/// Erased, unqualified form of a Java type: `java.util.Map<K, V>` -> `Map`,
/// `String...` -> `String[]`.
std::string erase_type(std::string_view type_text);

/// Strips generic arguments and array suffixes but keeps qualification.
std::string base_type_name(std::string_view type_text);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);
std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Offset of the first byte of the line containing `offset`.
std::size_t line_start(std::string_view s, std::size_t offset);
/// Offset just past the newline terminating the line containing `offset`.
std::size_t line_end_inclusive(std::string_view s, std::size_t offset);

std::string_view detect_newline(std::string_view content);

}  // namespace mover::text
