#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "mover/text.hpp"

namespace mover::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(MOVER_FIXTURES) / name; }

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  auto dir = std::filesystem::temp_directory_path() /
             ("mover-test-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Copies a fixture project into a scratch dir and returns the copy's source root.
inline std::filesystem::path copy_fixture(const std::string& name) {
  auto dir = scratch_dir(name);
  std::filesystem::copy(fixture(name), dir / name, std::filesystem::copy_options::recursive);
  return dir / name / "src";
}

inline std::string slurp(const std::filesystem::path& p) { return text::read_file(p); }

inline std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + needle.size())) ++n;
  return n;
}

/// Occurrences of `needle` across every .java file under `root`.
inline std::size_t grep_count(const std::filesystem::path& root, const std::string& needle) {
  std::size_t n = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().extension() == ".java") n += count_occurrences(slurp(e.path()), needle);
  }
  return n;
}

/// Relative path -> content for every file under `root`.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[std::filesystem::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

}  // namespace mover::testing
