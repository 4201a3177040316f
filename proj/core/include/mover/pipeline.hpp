#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mover/candidate_filter.hpp"
#include "mover/code_model.hpp"
#include "mover/embedding.hpp"
#include "mover/eval.hpp"
#include "mover/executor.hpp"
#include "mover/llm.hpp"
#include "mover/target_retrieval.hpp"

namespace mover {

struct ProviderConfig {
  std::string embedding = "local";  // "local" | "remote"
  bool fallback_to_local = true;
  std::string embedding_cache;      // JSON-lines cache file for remote embeddings
  std::size_t embedding_dimension = 512;
  std::string chat = "remote";      // "remote" | "mock"
  std::string mock_behavior = "similarity";  // "echo" | "similarity" | "fault"
  FaultSpec fault;
};

struct PipelineConfig {
  std::size_t candidate_pool_k = 5;
  std::size_t max_recommendations = 3;
  std::size_t token_budget = 7000;
  std::size_t static_limit = 50;
  std::size_t max_methods = 3;
  std::size_t max_targets_per_method = 3;
  bool critique_enabled = false;
  ProviderConfig providers;

  /// Unknown keys are rejected; missing keys keep their defaults.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

struct Providers {
  std::shared_ptr<EmbeddingProvider> embedder;
  std::shared_ptr<ChatProvider> chat;
};

/// Builds the configured providers; a local embedder is fitted on `index`.
Providers make_providers(const PipelineConfig& config, const ProjectIndex& index);

struct MoveRecommendation {
  std::size_t rank = 0;
  MethodRef method;
  std::string target;
  bool is_static = false;
  std::string method_rationale;
  std::string target_rationale;
  double similarity = 0.0;
  double semantic_score = 0.0;
  FeasibilityVerdict feasibility;
  std::string new_signature;
  std::string diff;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
  bool llm = false;
};

struct RecommendationRun {
  std::string host;
  std::vector<FilterVerdict> sanity;
  std::vector<MoveCandidate> candidates;  // bottom-k by similarity
  std::vector<RankedMethod> ranked;
  std::map<std::string, RetrievalResult> retrieval;  // by method signature
  HallucinationReport report;
  ExchangeLog exchanges;
  std::vector<MoveRecommendation> recommendations;
  std::vector<MovePlan> plans;  // parallel to recommendations
  std::vector<StageTiming> timings;
  std::vector<std::string> warnings;
};

/// Sanity filter, misplacement ranking, method ranking, target retrieval and
/// selection, classification; emits VALID items only, at most
/// min(max_recommendations, 3). Throws UnknownClass.
RecommendationRun recommend(const PipelineConfig& config, const ProjectIndex& index, Providers& providers,
                            std::string_view host);

RecommendedMove to_recommended_move(const MoveRecommendation& r);

nlohmann::json to_json(const MoveRecommendation& r);

/// Output document of a run; excludes timings so identical inputs give
/// identical bytes.
nlohmann::json run_summary_json(const RecommendationRun& run, const std::string& run_id);

/// Deterministic id: sanitized host plus 8 hex digits of a hash over the
/// config, the host and the indexed file hashes.
std::string make_run_id(const PipelineConfig& config, const ProjectIndex& index, std::string_view host);

struct Verdict {
  std::size_t index = 0;
  std::optional<int> rating;
  bool applied = false;
};

/// One directory of JSON files per run.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  std::string save(const RecommendationRun& run, const PipelineConfig& config, const ProjectIndex& index);
  bool exists(const std::string& run_id) const;
  std::filesystem::path run_dir(const std::string& run_id) const;

  /// Throws MissingRun.
  nlohmann::json load_record(const std::string& run_id) const;
  /// 0-based index. Throws MissingRun or InvalidArgument.
  MovePlan load_plan(const std::string& run_id, std::size_t index) const;
  std::size_t recommendation_count(const std::string& run_id) const;

  /// Rating must be 1..6. Throws MissingRun or InvalidArgument.
  void record_verdict(const std::string& run_id, std::size_t index, std::optional<int> rating,
                      std::optional<bool> applied);
  std::vector<Verdict> verdicts(const std::string& run_id) const;

 private:
  std::filesystem::path root_;
};

}  // namespace mover
