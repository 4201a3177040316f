#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mover/candidate_filter.hpp"
#include "mover/code_model.hpp"
#include "mover/embedding.hpp"

namespace mover {

struct TargetCandidate {
  std::string target;
  double heuristic_score = 0.0;  // static moves only
  double semantic_score = 0.0;
  FeasibilityVerdict feasibility;
};

/// Field types of the host plus parameter types of the method, feasible only.
std::vector<TargetCandidate> enumerate_instance_targets(const ProjectIndex& index, const MethodRef& method);

/// Shared leading package segments over the host's package depth.
double package_proximity(const std::vector<std::string>& target_package, const std::vector<std::string>& host_package);
double package_proximity(const ClassInfo& target, const ClassInfo& host);

/// 1 when the lowercased simple name contains "util".
int is_utility_class(const ClassInfo& cls);
int is_utility_name(std::string_view simple_name);

/// 2 * package_proximity + is_utility_class.
double ranking_score(const ClassInfo& target, const ClassInfo& host);

/// Every class except the host, by ranking score (ties by name), cut to
/// `limit`, then filtered by static feasibility.
std::vector<TargetCandidate> enumerate_static_targets(const ProjectIndex& index, const MethodRef& method,
                                                      std::size_t limit = 50);

struct ClassSummary {
  std::string qualified_name;
  std::vector<std::string> field_declarations;
  std::optional<std::string> docstring;
  std::vector<std::string> method_signatures;

  /// Name line, one line per field, the doc block, one line per signature.
  std::string render() const;
  std::size_t token_estimate() const;
};

/// ceil(bytes / 4).
std::size_t estimate_tokens(std::string_view text);

ClassSummary summarize_class(const ProjectIndex& index, const ClassInfo& cls);

struct PackResult {
  std::vector<ClassSummary> summaries;
  std::vector<std::string> warnings;
  std::size_t total_tokens = 0;
};

/// Appends summaries in order while the running total stays within the
/// budget; stops at the first one that does not fit. A first summary that
/// alone exceeds the budget is emitted with trailing signatures dropped and
/// a warning.
PackResult pack_summaries(const std::vector<ClassSummary>& ordered, std::size_t budget_tokens);

struct RetrievalResult {
  /// All candidates by semantic score, descending (ties by name).
  std::vector<TargetCandidate> ranked;
  /// The prefix of `ranked` whose summaries were packed.
  std::vector<TargetCandidate> packed;
  PackResult pack;
};

/// Scores candidates by cosine(method text, full target class text) and
/// packs their summaries in that order.
RetrievalResult semantic_rerank_and_pack(const ProjectIndex& index, EmbeddingProvider& provider,
                                         const MethodRef& method, std::vector<TargetCandidate> candidates,
                                         std::size_t budget_tokens);

nlohmann::json to_json(const TargetCandidate& c);
nlohmann::json to_json(const ClassSummary& s);

}  // namespace mover
