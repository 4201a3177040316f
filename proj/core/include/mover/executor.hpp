#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mover/code_model.hpp"
#include "mover/move_analysis.hpp"

namespace mover {

struct TextEdit {
  std::string file;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string replacement;
};

struct MovePlan {
  MethodRef method;
  std::string target;
  bool is_static = false;
  MoveRoute route = MoveRoute::Static;
  std::string new_signature;
  bool host_param_added = false;
  /// Grouped by file (ascending); within a file sorted descending by offset.
  std::vector<TextEdit> edits;
  /// sha256 of every touched file at planning time.
  std::map<std::string, std::string> file_hashes;
  std::vector<std::string> source_roots;
  std::size_t project_method_count = 0;
  std::size_t call_sites_rewritten = 0;
  std::vector<std::string> notes;
  std::string diff;
};

struct ApplyResult {
  std::vector<std::string> files_changed;
  std::size_t call_sites_rewritten = 0;
  bool reparse_ok = false;
  ProjectIndex index_after;
};

struct ApplyOptions {
  /// Test hook: fail verification after writing, forcing a rollback.
  bool inject_reparse_failure = false;
};

/// Throws Infeasible (with the analysis details), StaleIndex when indexed
/// files differ from disk, PlanConflict when edits overlap.
MovePlan plan_move(const ProjectIndex& index, const MethodRef& method, std::string_view target);

/// Applies the plan under the workspace lock, re-indexes, verifies, and
/// restores every file on failure (ReparseFailed).
ApplyResult apply(const MovePlan& plan, const ApplyOptions& options = {});

/// Applies one file's edits (descending order) to its content.
std::string apply_edits(std::string_view content, const std::vector<TextEdit>& edits);

/// Unified diff of one file, hunks built from the edit regions.
std::string unified_diff(std::string_view path, std::string_view before, const std::vector<TextEdit>& edits,
                         int context = 3);

nlohmann::json to_json(const MovePlan& plan);
MovePlan plan_from_json(const nlohmann::json& j);

}  // namespace mover
