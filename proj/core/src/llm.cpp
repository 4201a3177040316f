#include "mover/llm.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <nlohmann/json.hpp>
#include <set>

#include "http_util.hpp"
#include "mover/candidate_filter.hpp"
#include "mover/error.hpp"
#include "mover/text.hpp"

namespace mover {

using nlohmann::json;

std::string_view to_string(ChatTask t) {
  switch (t) {
    case ChatTask::RankMethods: return "rank_methods";
    case ChatTask::ChooseTarget: return "choose_target";
    case ChatTask::Critique: return "critique";
  }
  return "rank_methods";
}

std::string_view to_string(SuggestionSource s) {
  return s == SuggestionSource::MethodRanking ? "METHOD_RANKING" : "TARGET_SELECTION";
}

std::string_view to_string(Bucket b) {
  switch (b) {
    case Bucket::H1: return "H1";
    case Bucket::H2: return "H2";
    case Bucket::H3: return "H3";
    case Bucket::Valid: return "VALID";
  }
  return "VALID";
}

namespace {

std::string env_or(const char* name, std::string fallback = "") {
  const char* v = std::getenv(name);
  return v != nullptr ? std::string(v) : fallback;
}

std::string fixed4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

const char* kSystemPrompt =
    "You are a senior Java engineer reviewing class design. You look for methods that depend more on "
    "another class than on the class that declares them. Reply with a single JSON object in exactly the "
    "shape requested and nothing else.";

std::string envelope_key(ChatTask t) {
  switch (t) {
    case ChatTask::RankMethods: return "ranking";
    case ChatTask::ChooseTarget: return "targets";
    case ChatTask::Critique: return "verdicts";
  }
  return "ranking";
}

std::string item_key(ChatTask t) { return t == ChatTask::ChooseTarget ? "class" : "method"; }

/// Checks the envelope shape for a task; returns its item array.
json validated_items(const json& j, ChatTask task) {
  std::string key = envelope_key(task);
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorCode::MalformedResponse, "expected an object with a \"" + key + "\" array");
  }
  for (const auto& item : j.at(key)) {
    if (!item.is_object() || !item.contains(item_key(task)) || !item.at(item_key(task)).is_string()) {
      throw Error(ErrorCode::MalformedResponse, "every \"" + key + "\" entry needs a string \"" + item_key(task) + "\"");
    }
    if (task == ChatTask::Critique && (!item.contains("keep") || !item.at("keep").is_boolean())) {
      throw Error(ErrorCode::MalformedResponse, "every verdict needs a boolean \"keep\"");
    }
  }
  return j.at(key);
}

json call_with_retry(ChatProvider& provider, ChatRequest request, const std::string& subject, ExchangeLog* log) {
  for (int attempt = 1; attempt <= 2; ++attempt) {
    Exchange ex;
    ex.task = request.task;
    ex.subject = subject;
    ex.attempt = attempt;
    ex.messages = request.messages;
    auto start = std::chrono::steady_clock::now();
    try {
      ex.response = provider.complete(request);
    } catch (const Error& e) {
      ex.error = e.what();
      ex.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (log != nullptr) log->push_back(std::move(ex));
      throw;
    }
    ex.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
      json items = validated_items(extract_json_object(ex.response), request.task);
      if (log != nullptr) log->push_back(std::move(ex));
      return items;
    } catch (const Error& e) {
      ex.error = e.what();
      std::string bad = ex.response;
      if (log != nullptr) log->push_back(std::move(ex));
      if (attempt == 2) {
        throw Error(ErrorCode::MalformedResponse, std::string(to_string(request.task)) + " for " + subject + ": " +
                                                      e.what());
      }
      request.messages.push_back(ChatMessage{"assistant", bad});
      request.messages.push_back(ChatMessage{
          "user", "That answer could not be used (" + std::string(e.what()) +
                      "). Reply again with only the JSON object in the requested shape."});
    }
  }
  throw Error(ErrorCode::MalformedResponse, "unreachable");
}

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out.push_back(c);
  }
  return out;
}

}  // namespace

HttpChatConfig HttpChatConfig::from_env() {
  HttpChatConfig c;
  c.url = env_or("CHAT_API_URL");
  c.api_key = env_or("CHAT_API_KEY");
  c.model = env_or("CHAT_MODEL", "default");
  std::string t = env_or("CHAT_TEMPERATURE");
  if (!t.empty()) {
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0') throw Error(ErrorCode::InvalidArgument, "CHAT_TEMPERATURE is not a number");
    c.temperature = v;
  }
  return c;
}

HttpChatProvider::HttpChatProvider(HttpChatConfig config) : config_(std::move(config)) {}

std::string HttpChatProvider::complete(const ChatRequest& request) {
  if (config_.url.empty()) throw Error(ErrorCode::ProviderUnavailable, "CHAT_API_URL is not set");
  json messages = json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  json body = {{"model", config_.model}, {"temperature", config_.temperature}, {"messages", messages}};
  json res = detail::post_json(config_.url, config_.api_key, body, config_.timeout);
  try {
    return res.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ProviderUnavailable, std::string("unexpected chat response: ") + e.what());
  }
}

MockChatProvider::MockChatProvider(MockBehavior behavior) : behavior_(behavior) {}

std::shared_ptr<MockChatProvider> MockChatProvider::fault(const FaultSpec& spec) {
  auto p = std::make_shared<MockChatProvider>(MockBehavior::Fault);
  p->spec_ = spec;
  p->rng_.seed(spec.seed);
  return p;
}

std::string MockChatProvider::model_id() const {
  switch (behavior_) {
    case MockBehavior::EchoOrder: return "mock-echo";
    case MockBehavior::SimilarityOracle: return "mock-similarity";
    case MockBehavior::Fault: return "mock-fault";
  }
  return "mock";
}

FaultLedger MockChatProvider::ledger() const {
  std::lock_guard lock(mutex_);
  return ledger_;
}

double MockChatProvider::unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<ScoredOption> MockChatProvider::ordered(const ChatRequest& request) const {
  std::vector<ScoredOption> opts = request.options;
  if (behavior_ != MockBehavior::EchoOrder) {
    std::stable_sort(opts.begin(), opts.end(), [](const ScoredOption& a, const ScoredOption& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.name < b.name;
    });
  }
  return opts;
}

std::string MockChatProvider::complete(const ChatRequest& request) {
  std::string key = envelope_key(request.task);
  std::string field = item_key(request.task);
  json items = json::array();
  if (request.task == ChatTask::Critique) {
    for (const auto& o : request.options) items.push_back({{"method", o.name}, {"keep", true}});
    return json{{key, items}}.dump();
  }
  auto opts = ordered(request);
  std::size_t n = std::min(request.max_items, opts.size());
  if (behavior_ != MockBehavior::Fault) {
    for (std::size_t i = 0; i < n; ++i) {
      items.push_back({{field, opts[i].name}, {"reason", "score " + fixed4(opts[i].score)}});
    }
    return json{{key, items}}.dump();
  }
  std::lock_guard lock(mutex_);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < n && ledger_.slots < spec_.limit; ++slot) {
    ++ledger_.slots;
    double u = unit_draw(rng_);
    if (request.task == ChatTask::RankMethods && u < spec_.p_h3 && !request.decoys_h3.empty()) {
      items.push_back({{field, request.decoys_h3[ledger_.h3 % request.decoys_h3.size()]}, {"reason", "injected"}});
      ++ledger_.h3;
    } else if (request.task == ChatTask::ChooseTarget && u < spec_.p_h1) {
      ++ledger_.h1;
      items.push_back({{field, "GhostHelper" + std::to_string(ledger_.h1)}, {"reason", "injected"}});
    } else if (request.task == ChatTask::ChooseTarget && u < spec_.p_h1 + spec_.p_h2 && !request.decoys_h2.empty()) {
      items.push_back({{field, request.decoys_h2[ledger_.h2 % request.decoys_h2.size()]}, {"reason", "injected"}});
      ++ledger_.h2;
    } else {
      items.push_back({{field, opts[next].name}, {"reason", "score " + fixed4(opts[next].score)}});
      ++next;
      ++ledger_.faithful;
    }
  }
  return json{{key, items}}.dump();
}

json extract_json_object(std::string_view response) {
  auto first = response.find('{');
  auto last = response.rfind('}');
  if (first == std::string_view::npos || last == std::string_view::npos || last < first) {
    throw Error(ErrorCode::MalformedResponse, "no JSON object in response");
  }
  json j = json::parse(response.substr(first, last - first + 1), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::MalformedResponse, "response JSON does not parse");
  return j;
}

std::optional<MethodRef> resolve_method_text(const ClassInfo& host, std::string_view text) {
  std::string t = strip_ws(text);
  if (auto hash = t.rfind('#'); hash != std::string::npos) t = t.substr(hash + 1);
  std::string name = t.substr(0, t.find('('));
  if (auto dot = name.rfind('.'); dot != std::string::npos) {
    t = t.substr(dot + 1);
    name = name.substr(dot + 1);
  }
  for (const auto& m : host.methods) {
    if (strip_ws(m.signature) == t) return MethodRef{host.qualified_name, m.signature};
  }
  const MethodInfo* unique = nullptr;
  for (const auto& m : host.methods) {
    if (m.name != name || m.is_constructor) continue;
    if (unique != nullptr) return std::nullopt;
    unique = &m;
  }
  if (unique == nullptr) return std::nullopt;
  return MethodRef{host.qualified_name, unique->signature};
}

std::optional<std::string> resolve_class_text(const ProjectIndex& index, const ClassInfo& host, std::string_view text) {
  std::string t = strip_ws(text);
  if (text::ends_with(t, ".java")) t.resize(t.size() - 5);
  if (t.empty()) return std::nullopt;
  if (index.find_class(t) != nullptr) return t;
  if (auto r = resolve_type(index, host, t)) return r;
  std::optional<std::string> unique;
  for (const auto& [name, cls] : index.classes) {
    if (cls.simple_name != t) continue;
    if (unique) return std::nullopt;
    unique = name;
  }
  return unique;
}

Classification classify_suggestion(const ProjectIndex& index, const RawSuggestion& raw, const ClassInfo& host) {
  Classification c;
  if (raw.source == SuggestionSource::TargetSelection) {
    c.target = resolve_class_text(index, host, raw.target);
    if (!c.target) {
      c.bucket = Bucket::H1;
      c.reasons.emplace_back("TARGET_NOT_FOUND");
      return c;
    }
  }
  c.method = resolve_method_text(host, raw.method);
  if (!c.method) {
    c.bucket = Bucket::H3;
    c.reasons.emplace_back("METHOD_NOT_FOUND");
    return c;
  }
  auto sanity = sanity_check(host, *host.find_method(c.method->signature));
  if (!sanity.passed) {
    c.bucket = Bucket::H3;
    for (auto r : sanity.reasons) c.reasons.emplace_back(to_string(r));
    return c;
  }
  if (c.target) {
    auto verdict = check_feasibility(index, *c.method, *c.target);
    if (!verdict.feasible) {
      c.bucket = Bucket::H2;
      for (auto r : verdict.reasons) c.reasons.emplace_back(to_string(r));
      return c;
    }
  }
  c.bucket = Bucket::Valid;
  return c;
}

void HallucinationReport::add(const RawSuggestion& s, const Classification& c) {
  ++counts[c.bucket];
  items.push_back(ReportItem{s, c.bucket, c.reasons});
}

void HallucinationReport::merge(const HallucinationReport& other) {
  for (const auto& [b, n] : other.counts) counts[b] += n;
  items.insert(items.end(), other.items.begin(), other.items.end());
}

MethodRanking rank_methods(ChatProvider& provider, const ProjectIndex& index, const ClassInfo& cls,
                           const std::vector<MoveCandidate>& candidates, std::size_t max_out,
                           const std::vector<std::string>& h3_decoys, ExchangeLog* log) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "rank_methods needs at least one candidate");
  ChatRequest req;
  req.task = ChatTask::RankMethods;
  req.max_items = max_out;
  req.decoys_h3 = h3_decoys;
  std::string listing;
  for (const auto& c : candidates) {
    req.options.push_back(ScoredOption{c.method.signature, 1.0 - c.similarity});
    listing += "- " + c.method.signature + " (similarity to the rest of the class: " + fixed4(c.similarity) + ")\n";
  }
  std::string user =
      "Class " + cls.qualified_name + ":\n\n```java\n" + std::string(class_text(index, cls)) +
      "\n```\n\nCandidate methods:\n" + listing +
      "\nFor each candidate, work out what it does, which classes' data and behaviour it relies on, and how well it "
      "fits the rest of " + cls.simple_name + ". Then pick at most " + std::to_string(max_out) +
      " candidates that would be better placed in another class, strongest case first. Answer as "
      "{\"ranking\": [{\"method\": \"<signature exactly as listed>\", \"reason\": \"<one or two sentences>\"}]}.";
  req.messages = {ChatMessage{"system", kSystemPrompt}, ChatMessage{"user", user}};

  json items = call_with_retry(provider, req, cls.qualified_name, log);
  std::set<std::string> pool;
  for (const auto& c : candidates) pool.insert(c.method.signature);
  MethodRanking out;
  std::set<std::string> taken;
  for (const auto& item : items) {
    if (out.raw.size() >= max_out) break;
    RawSuggestion s{item.at("method").get<std::string>(), "", item.value("reason", std::string()),
                    SuggestionSource::MethodRanking};
    out.raw.push_back(s);
    auto ref = resolve_method_text(cls, s.method);
    if (!ref || !pool.count(ref->signature) || !taken.insert(ref->signature).second) continue;
    out.ranked.push_back(RankedMethod{*ref, s.rationale});
  }
  return out;
}

std::vector<RankedMethod> critique(ChatProvider& provider, const ProjectIndex& index, const ClassInfo& cls,
                                   const std::vector<RankedMethod>& ranked, ExchangeLog* log) {
  if (ranked.empty()) return {};
  ChatRequest req;
  req.task = ChatTask::Critique;
  req.max_items = ranked.size();
  std::string listing;
  for (const auto& r : ranked) {
    req.options.push_back(ScoredOption{r.method.signature, 0.0});
    listing += "- " + r.method.signature + ": " + r.rationale + "\n";
  }
  std::string user = "Class " + cls.qualified_name + ":\n\n```java\n" + std::string(class_text(index, cls)) +
                     "\n```\n\nYou proposed moving these methods out of the class:\n" + listing +
                     "\nCheck each proposal again against the code. Keep it only if the method would clearly read "
                     "better elsewhere. Answer as {\"verdicts\": [{\"method\": \"<signature>\", \"keep\": true}]}.";
  req.messages = {ChatMessage{"system", kSystemPrompt}, ChatMessage{"user", user}};
  json items = call_with_retry(provider, req, cls.qualified_name, log);
  std::set<std::string> struck;
  for (const auto& item : items) {
    if (item.at("keep").get<bool>()) continue;
    if (auto ref = resolve_method_text(cls, item.at("method").get<std::string>())) struck.insert(ref->signature);
  }
  std::vector<RankedMethod> out;
  for (const auto& r : ranked) {
    if (!struck.count(r.method.signature)) out.push_back(r);
  }
  return out;
}

TargetSelection choose_target(ChatProvider& provider, const ProjectIndex& index, const MethodRef& method,
                              const RetrievalResult& retrieval, std::size_t max_items,
                              const std::vector<std::string>& h2_decoys, ExchangeLog* log) {
  if (retrieval.packed.empty()) throw Error(ErrorCode::InvalidArgument, "choose_target needs packed summaries");
  const ClassInfo& host = index.class_at(method.class_name);
  ChatRequest req;
  req.task = ChatTask::ChooseTarget;
  req.max_items = max_items;
  req.decoys_h2 = h2_decoys;
  std::string listing;
  for (std::size_t i = 0; i < retrieval.packed.size(); ++i) {
    req.options.push_back(ScoredOption{retrieval.packed[i].target, retrieval.packed[i].semantic_score});
    listing += "### " + std::to_string(i + 1) + "\n" + retrieval.pack.summaries[i].render() + "\n";
  }
  std::string user =
      "Method " + method.signature + " currently lives in " + host.qualified_name + ":\n\n```java\n" +
      std::string(method_text(index, host, find_method(index, method))) +
      "\n```\n\nEach class below can receive this method without breaking the code:\n\n" + listing +
      "Choose at most " + std::to_string(max_items) +
      " of these classes as a new home for the method, best first, judging by which class owns the data and "
      "concepts the method works with. Answer as {\"targets\": [{\"class\": \"<qualified name as listed>\", "
      "\"reason\": \"<one or two sentences>\"}]}.";
  req.messages = {ChatMessage{"system", kSystemPrompt}, ChatMessage{"user", user}};

  json items = call_with_retry(provider, req, method.class_name + "#" + method.signature, log);
  std::set<std::string> packed;
  for (const auto& c : retrieval.packed) packed.insert(c.target);
  TargetSelection out;
  std::set<std::string> taken;
  for (const auto& item : items) {
    if (out.raw.size() >= max_items) break;
    RawSuggestion s{method.signature, item.at("class").get<std::string>(), item.value("reason", std::string()),
                    SuggestionSource::TargetSelection};
    out.raw.push_back(s);
    auto t = resolve_class_text(index, host, s.target);
    if (!t || !packed.count(*t) || !taken.insert(*t).second) continue;
    out.chosen.push_back(TargetChoice{*t, s.rationale});
  }
  return out;
}

json to_json(const RawSuggestion& s) {
  return {{"method", s.method}, {"target", s.target}, {"rationale", s.rationale}, {"source", to_string(s.source)}};
}

json to_json(const HallucinationReport& r) {
  json counts = json::object();
  for (const auto& [b, n] : r.counts) counts[std::string(to_string(b))] = n;
  json items = json::array();
  for (const auto& i : r.items) {
    items.push_back({{"suggestion", to_json(i.suggestion)}, {"bucket", to_string(i.bucket)}, {"reasons", i.reasons}});
  }
  return {{"counts", counts}, {"items", items}};
}

json to_json(const Exchange& e) {
  json messages = json::array();
  for (const auto& m : e.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  return {{"task", to_string(e.task)}, {"subject", e.subject}, {"attempt", e.attempt},
          {"messages", messages},      {"response", e.response}, {"error", e.error}};
}

json to_json(const FaultLedger& l) {
  return {{"slots", l.slots}, {"h1", l.h1}, {"h2", l.h2}, {"h3", l.h3}, {"faithful", l.faithful}};
}

}  // namespace mover
