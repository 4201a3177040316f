#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mover/code_model.hpp"

namespace mover {

struct GoldTriplet {
  std::string method;  // normalized signature
  std::string host;
  std::string target;
  bool is_static = false;

  friend bool operator==(const GoldTriplet&, const GoldTriplet&) = default;
};

/// One emitted recommendation as seen by the evaluator.
struct RecommendedMove {
  std::string method;
  std::string host;
  std::string target;
};

enum class Stratum { Small, Large };

std::string_view to_string(Stratum s);
Stratum stratify(std::size_t method_count);
/// SMALL below 15 methods.
Stratum stratify(const ClassInfo& cls);

/// `name(T1,T2)`: parameter names, modifiers and annotations dropped, types
/// erased. With `name_only`, just the method name.
std::string normalize_signature(std::string_view signature, bool name_only = false);

struct RecallAtK {
  int k = 0;
  double recall_m = 0.0;
  double recall_c = 0.0;
  double recall_mc = 0.0;
  std::size_t gold = 0;
  std::size_t identified = 0;  // |R_M|
  std::size_t matched = 0;     // |R ∩ G|
};

struct EvalResult {
  std::vector<RecallAtK> overall;
  std::map<Stratum, std::vector<RecallAtK>> strata;
};

struct EvalOptions {
  std::vector<int> ks{1, 2, 3};
  bool name_only = false;
};

/// Recommendation lists are keyed by host and taken in rank order. Throws
/// MissingRun when a gold host has no entry. `host_strata` is optional.
EvalResult compute_recalls(const std::vector<GoldTriplet>& gold,
                           const std::map<std::string, std::vector<RecommendedMove>>& runs,
                           const std::map<std::string, Stratum>& host_strata = {}, const EvalOptions& options = {});

/// Plain-text table with one row per k.
std::string format_table(const EvalResult& result);

std::vector<GoldTriplet> read_gold(const std::filesystem::path& path);
void write_gold(const std::filesystem::path& path, const std::vector<GoldTriplet>& gold);

nlohmann::json to_json(const GoldTriplet& g);
GoldTriplet gold_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvalResult& r);

struct PerturbedCorpus {
  /// Source root of each mutated project copy.
  std::vector<std::string> roots;
  /// Reverse triplets: the moved method in its new class, pointing home.
  std::vector<GoldTriplet> gold;
  std::size_t attempted = 0;
  std::size_t rolled_back = 0;
};

/// Copies each project under `out_dir` and moves `n` instance methods,
/// drawn from a seeded shuffle of all feasible (method, target) pairs, to
/// their targets. A move is kept only if every reverse triplet recorded so
/// far stays feasible. Throws InsufficientCandidates.
PerturbedCorpus generate_perturbed_corpus(const std::vector<std::filesystem::path>& project_roots,
                                          const std::filesystem::path& out_dir, std::size_t n, std::uint64_t seed);

}  // namespace mover
