#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mover/code_model.hpp"
#include "mover/embedding.hpp"
#include "mover/target_retrieval.hpp"

namespace mover {

enum class ChatTask { RankMethods, ChooseTarget, Critique };

std::string_view to_string(ChatTask t);

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ScoredOption {
  std::string name;
  double score = 0.0;
};

/// One chat call. `options`, `decoys_*` and `max_items` are structured hints
/// used by mock providers; real providers only see `messages`.
struct ChatRequest {
  ChatTask task = ChatTask::RankMethods;
  std::vector<ChatMessage> messages;
  std::vector<ScoredOption> options;
  std::vector<std::string> decoys_h2;
  std::vector<std::string> decoys_h3;
  std::size_t max_items = 3;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string model_id() const = 0;
  virtual double temperature() const = 0;
  /// Returns the raw assistant text. Throws ProviderUnavailable.
  virtual std::string complete(const ChatRequest& request) = 0;
};

struct HttpChatConfig {
  std::string url;
  std::string api_key;
  std::string model;
  double temperature = 0.0;
  std::chrono::seconds timeout{120};

  /// CHAT_API_URL, CHAT_API_KEY, CHAT_MODEL, CHAT_TEMPERATURE.
  static HttpChatConfig from_env();
};

/// Chat-completions wire shape: {model, temperature, messages} in,
/// choices[0].message.content out.
class HttpChatProvider : public ChatProvider {
 public:
  explicit HttpChatProvider(HttpChatConfig config);
  std::string model_id() const override { return config_.model; }
  double temperature() const override { return config_.temperature; }
  std::string complete(const ChatRequest& request) override;

 private:
  HttpChatConfig config_;
};

enum class MockBehavior { EchoOrder, SimilarityOracle, Fault };

struct FaultSpec {
  double p_h1 = 0.0;
  double p_h2 = 0.0;
  double p_h3 = 0.0;
  std::uint64_t seed = 0;
  /// Total output slots served; later calls answer with empty lists.
  std::size_t limit = 100;
};

struct FaultLedger {
  std::size_t slots = 0;
  std::size_t h1 = 0;
  std::size_t h2 = 0;
  std::size_t h3 = 0;
  std::size_t faithful = 0;
};

/// Offline provider answering in the same JSON envelopes a real model is
/// asked for, so responses go through the normal parser.
class MockChatProvider : public ChatProvider {
 public:
  explicit MockChatProvider(MockBehavior behavior);
  static std::shared_ptr<MockChatProvider> fault(const FaultSpec& spec);

  std::string model_id() const override;
  double temperature() const override { return 0.0; }
  std::string complete(const ChatRequest& request) override;

  MockBehavior behavior() const { return behavior_; }
  FaultLedger ledger() const;

  /// Uniform draw in [0, 1) from the top 53 bits of a 64-bit Mersenne Twister.
  static double unit_draw(std::mt19937_64& rng);

 private:
  std::vector<ScoredOption> ordered(const ChatRequest& request) const;

  MockBehavior behavior_;
  FaultSpec spec_;
  mutable std::mutex mutex_;
  std::mt19937_64 rng_;
  FaultLedger ledger_;
};

enum class SuggestionSource { MethodRanking, TargetSelection };

std::string_view to_string(SuggestionSource s);

struct RawSuggestion {
  std::string method;
  std::string target;  // empty for method-ranking items
  std::string rationale;
  SuggestionSource source = SuggestionSource::MethodRanking;
};

enum class Bucket { H1, H2, H3, Valid };

std::string_view to_string(Bucket b);

struct Classification {
  Bucket bucket = Bucket::Valid;
  std::vector<std::string> reasons;
  std::optional<MethodRef> method;
  std::optional<std::string> target;
};

/// Resolves a method named by the model: exact signature, then a unique
/// method name in the host.
std::optional<MethodRef> resolve_method_text(const ClassInfo& host, std::string_view text);

/// Resolves a class named by the model: exact qualified name, then the
/// host's scope, then a unique simple-name match.
std::optional<std::string> resolve_class_text(const ProjectIndex& index, const ClassInfo& host, std::string_view text);

/// H1 when the target does not resolve, else H3 when the method fails the
/// sanity filter, else H2 when the move is infeasible, else VALID.
/// Method-ranking items have no target and can only be H3 or VALID.
Classification classify_suggestion(const ProjectIndex& index, const RawSuggestion& raw, const ClassInfo& host);

struct ReportItem {
  RawSuggestion suggestion;
  Bucket bucket = Bucket::Valid;
  std::vector<std::string> reasons;
};

struct HallucinationReport {
  std::map<Bucket, std::size_t> counts{{Bucket::H1, 0}, {Bucket::H2, 0}, {Bucket::H3, 0}, {Bucket::Valid, 0}};
  std::vector<ReportItem> items;

  void add(const RawSuggestion& s, const Classification& c);
  void merge(const HallucinationReport& other);
  std::size_t count(Bucket b) const { return counts.at(b); }
};

struct Exchange {
  ChatTask task = ChatTask::RankMethods;
  std::string subject;
  int attempt = 1;
  std::vector<ChatMessage> messages;
  std::string response;
  std::string error;
  double seconds = 0.0;
};

using ExchangeLog = std::vector<Exchange>;

struct RankedMethod {
  MethodRef method;
  std::string rationale;
};

struct MethodRanking {
  std::vector<RankedMethod> ranked;  // subset of the candidates, model order
  std::vector<RawSuggestion> raw;    // every parsed item
};

/// Asks the model to order candidates by how likely they are misplaced.
/// Names outside the candidate set are kept in `raw` only. Throws
/// MalformedResponse after one retry.
MethodRanking rank_methods(ChatProvider& provider, const ProjectIndex& index, const ClassInfo& cls,
                           const std::vector<MoveCandidate>& candidates, std::size_t max_out,
                           const std::vector<std::string>& h3_decoys, ExchangeLog* log = nullptr);

/// Asks the model to confirm or withdraw each ranked method; withdrawn ones
/// are dropped.
std::vector<RankedMethod> critique(ChatProvider& provider, const ProjectIndex& index, const ClassInfo& cls,
                                   const std::vector<RankedMethod>& ranked, ExchangeLog* log = nullptr);

struct TargetChoice {
  std::string target;
  std::string rationale;
};

struct TargetSelection {
  std::vector<TargetChoice> chosen;  // packed targets only, model order
  std::vector<RawSuggestion> raw;
};

TargetSelection choose_target(ChatProvider& provider, const ProjectIndex& index, const MethodRef& method,
                              const RetrievalResult& retrieval, std::size_t max_items,
                              const std::vector<std::string>& h2_decoys, ExchangeLog* log = nullptr);

/// Text between the first '{' and the last '}', parsed. Throws
/// MalformedResponse.
nlohmann::json extract_json_object(std::string_view response);

nlohmann::json to_json(const RawSuggestion& s);
nlohmann::json to_json(const HallucinationReport& r);
nlohmann::json to_json(const Exchange& e);
nlohmann::json to_json(const FaultLedger& l);

}  // namespace mover
