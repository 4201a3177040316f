#include "mover/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>

#include "mover/error.hpp"
#include "mover/text.hpp"

namespace mover {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [k, _] : j.items()) {
    if (!known.count(k)) throw Error(ErrorCode::InvalidArgument, "unknown config key " + where + k);
  }
}

class Stopwatch {
 public:
  Stopwatch(std::vector<StageTiming>& out, std::string stage, bool llm)
      : out_(out), stage_(std::move(stage)), llm_(llm), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() {
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    for (auto& t : out_) {
      if (t.stage == stage_) {
        t.seconds += s;
        return;
      }
    }
    out_.push_back(StageTiming{stage_, s, llm_});
  }
  Stopwatch(const Stopwatch&) = delete;
  Stopwatch& operator=(const Stopwatch&) = delete;

 private:
  std::vector<StageTiming>& out_;
  std::string stage_;
  bool llm_;
  std::chrono::steady_clock::time_point start_;
};

bool is_fault_mock(const ChatProvider& p) {
  const auto* mock = dynamic_cast<const MockChatProvider*>(&p);
  return mock != nullptr && mock->behavior() == MockBehavior::Fault;
}

/// Indexed classes the move of `method` to them was verified infeasible.
std::vector<std::string> infeasible_classes(const ProjectIndex& index, const MethodRef& method,
                                            const RetrievalResult& retrieval, std::size_t limit) {
  std::set<std::string> skip{method.class_name};
  for (const auto& c : retrieval.ranked) skip.insert(c.target);
  std::vector<std::string> out;
  for (const auto& [name, _] : index.classes) {
    if (out.size() >= limit) break;
    if (skip.count(name)) continue;
    if (!check_feasibility(index, method, name).feasible) out.push_back(name);
  }
  return out;
}

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ? c : '_');
  return out;
}

json read_json(const fs::path& p) {
  std::string body = text::read_file(p);
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::IoError, p.string() + " is not valid JSON");
  return j;
}

void write_json(const fs::path& p, const json& j) { text::write_file_atomic(p, j.dump(2) + "\n"); }

std::mutex& verdict_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  reject_unknown(j,
                 {"candidate_pool_k", "max_recommendations", "token_budget", "static_limit", "max_methods",
                  "max_targets_per_method", "critique_enabled", "providers"},
                 "");
  PipelineConfig c;
  try {
    read_key(j, "candidate_pool_k", c.candidate_pool_k);
    read_key(j, "max_recommendations", c.max_recommendations);
    read_key(j, "token_budget", c.token_budget);
    read_key(j, "static_limit", c.static_limit);
    read_key(j, "max_methods", c.max_methods);
    read_key(j, "max_targets_per_method", c.max_targets_per_method);
    read_key(j, "critique_enabled", c.critique_enabled);
    if (j.contains("providers")) {
      const json& p = j.at("providers");
      reject_unknown(p,
                     {"embedding", "fallback_to_local", "embedding_cache", "embedding_dimension", "chat",
                      "mock_behavior", "fault"},
                     "providers.");
      read_key(p, "embedding", c.providers.embedding);
      read_key(p, "fallback_to_local", c.providers.fallback_to_local);
      read_key(p, "embedding_cache", c.providers.embedding_cache);
      read_key(p, "embedding_dimension", c.providers.embedding_dimension);
      read_key(p, "chat", c.providers.chat);
      read_key(p, "mock_behavior", c.providers.mock_behavior);
      if (p.contains("fault")) {
        const json& f = p.at("fault");
        reject_unknown(f, {"p_h1", "p_h2", "p_h3", "seed", "limit"}, "providers.fault.");
        read_key(f, "p_h1", c.providers.fault.p_h1);
        read_key(f, "p_h2", c.providers.fault.p_h2);
        read_key(f, "p_h3", c.providers.fault.p_h3);
        read_key(f, "seed", c.providers.fault.seed);
        read_key(f, "limit", c.providers.fault.limit);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad config value: ") + e.what());
  }
  if (c.candidate_pool_k == 0 || c.max_methods == 0 || c.token_budget == 0 || c.static_limit == 0 ||
      c.max_targets_per_method == 0) {
    throw Error(ErrorCode::InvalidArgument, "counts in the config must be positive");
  }
  if (c.providers.embedding != "local" && c.providers.embedding != "remote") {
    throw Error(ErrorCode::InvalidArgument, "providers.embedding must be \"local\" or \"remote\"");
  }
  if (c.providers.chat != "mock" && c.providers.chat != "remote") {
    throw Error(ErrorCode::InvalidArgument, "providers.chat must be \"mock\" or \"remote\"");
  }
  const auto& b = c.providers.mock_behavior;
  if (b != "echo" && b != "similarity" && b != "fault") {
    throw Error(ErrorCode::InvalidArgument, "providers.mock_behavior must be echo, similarity or fault");
  }
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::IoError, "config file not found: " + path.string());
  return from_json(read_json(path));
}

json PipelineConfig::to_json() const {
  const auto& p = providers;
  return {{"candidate_pool_k", candidate_pool_k},
          {"max_recommendations", max_recommendations},
          {"token_budget", token_budget},
          {"static_limit", static_limit},
          {"max_methods", max_methods},
          {"max_targets_per_method", max_targets_per_method},
          {"critique_enabled", critique_enabled},
          {"providers",
           {{"embedding", p.embedding},
            {"fallback_to_local", p.fallback_to_local},
            {"embedding_cache", p.embedding_cache},
            {"embedding_dimension", p.embedding_dimension},
            {"chat", p.chat},
            {"mock_behavior", p.mock_behavior},
            {"fault",
             {{"p_h1", p.fault.p_h1},
              {"p_h2", p.fault.p_h2},
              {"p_h3", p.fault.p_h3},
              {"seed", p.fault.seed},
              {"limit", p.fault.limit}}}}}};
}

Providers make_providers(const PipelineConfig& config, const ProjectIndex& index) {
  const auto& p = config.providers;
  Providers out;
  auto local = std::make_shared<LocalEmbedder>(p.embedding_dimension);
  local->fit(index);
  if (p.embedding == "local") {
    out.embedder = local;
  } else {
    std::shared_ptr<EmbeddingProvider> remote = std::make_shared<HttpEmbedder>(HttpEmbedderConfig::from_env());
    if (!p.embedding_cache.empty()) remote = std::make_shared<CachingEmbedder>(remote, p.embedding_cache);
    out.embedder = p.fallback_to_local ? std::make_shared<FallbackEmbedder>(remote, local) : remote;
  }
  if (p.chat == "remote") {
    out.chat = std::make_shared<HttpChatProvider>(HttpChatConfig::from_env());
  } else if (p.mock_behavior == "fault") {
    out.chat = MockChatProvider::fault(p.fault);
  } else {
    out.chat = std::make_shared<MockChatProvider>(p.mock_behavior == "echo" ? MockBehavior::EchoOrder
                                                                            : MockBehavior::SimilarityOracle);
  }
  return out;
}

RecommendationRun recommend(const PipelineConfig& config, const ProjectIndex& index, Providers& providers,
                            std::string_view host_name) {
  const ClassInfo* host = index.find_class(host_name);
  if (host == nullptr) throw Error(ErrorCode::UnknownClass, std::string(host_name));
  RecommendationRun run;
  run.host = host->qualified_name;
  const bool fault = is_fault_mock(*providers.chat);

  std::vector<const MethodInfo*> surviving;
  std::vector<std::string> h3_decoys;
  {
    Stopwatch sw(run.timings, "sanity_filter", false);
    run.sanity = sanity_filter(*host);
    for (std::size_t i = 0; i < host->methods.size(); ++i) {
      if (run.sanity[i].passed) {
        surviving.push_back(&host->methods[i]);
      } else {
        h3_decoys.push_back(host->methods[i].signature);
      }
    }
  }
  if (surviving.empty()) return run;

  {
    Stopwatch sw(run.timings, "misplacement", false);
    auto scored = misplacement_scores(index, *providers.embedder, *host, surviving);
    if (scored.size() > config.candidate_pool_k) scored.resize(config.candidate_pool_k);
    run.candidates = std::move(scored);
  }

  MethodRanking ranking;
  {
    Stopwatch sw(run.timings, "rank_methods", true);
    try {
      ranking = rank_methods(*providers.chat, index, *host, run.candidates, config.max_methods,
                             fault ? h3_decoys : std::vector<std::string>{}, &run.exchanges);
    } catch (const Error& e) {
      throw Error(e.code(), std::string("rank_methods: ") + e.what());
    }
  }
  std::set<std::string> valid_methods;
  for (const auto& raw : ranking.raw) {
    auto c = classify_suggestion(index, raw, *host);
    run.report.add(raw, c);
    if (c.bucket == Bucket::Valid && c.method) valid_methods.insert(c.method->signature);
  }
  for (const auto& r : ranking.ranked) {
    if (valid_methods.count(r.method.signature)) run.ranked.push_back(r);
  }
  if (config.critique_enabled && !run.ranked.empty()) {
    Stopwatch sw(run.timings, "critique", true);
    run.ranked = critique(*providers.chat, index, *host, run.ranked, &run.exchanges);
  }

  struct ValidTarget {
    std::string target;
    std::string rationale;
    double semantic = 0.0;
    FeasibilityVerdict verdict;
  };
  std::vector<std::vector<ValidTarget>> per_method;
  for (const auto& rm : run.ranked) {
    const MethodInfo& m = find_method(index, rm.method);
    RetrievalResult retrieval;
    {
      Stopwatch sw(run.timings, "target_retrieval", false);
      auto candidates = m.is_static ? enumerate_static_targets(index, rm.method, config.static_limit)
                                    : enumerate_instance_targets(index, rm.method);
      retrieval = semantic_rerank_and_pack(index, *providers.embedder, rm.method, std::move(candidates),
                                           config.token_budget);
    }
    for (const auto& w : retrieval.pack.warnings) run.warnings.push_back(w);
    std::vector<ValidTarget> valid;
    if (retrieval.packed.empty()) {
      run.warnings.push_back(rm.method.signature + ": no feasible target class");
    } else {
      std::vector<std::string> h2_decoys;
      if (fault) h2_decoys = infeasible_classes(index, rm.method, retrieval, 3);
      TargetSelection selection;
      {
        Stopwatch sw(run.timings, "choose_target", true);
        try {
          selection = choose_target(*providers.chat, index, rm.method, retrieval,
                                    std::min(config.max_targets_per_method, retrieval.packed.size()), h2_decoys,
                                    &run.exchanges);
        } catch (const Error& e) {
          throw Error(e.code(), std::string("choose_target: ") + e.what());
        }
      }
      std::set<std::string> chosen;
      for (const auto& c : selection.chosen) chosen.insert(c.target);
      std::set<std::string> taken;
      for (const auto& raw : selection.raw) {
        auto c = classify_suggestion(index, raw, *host);
        run.report.add(raw, c);
        if (c.bucket != Bucket::Valid || !c.target || !chosen.count(*c.target) || !taken.insert(*c.target).second) {
          continue;
        }
        auto it = std::find_if(retrieval.packed.begin(), retrieval.packed.end(),
                               [&](const TargetCandidate& t) { return t.target == *c.target; });
        valid.push_back(ValidTarget{*c.target, raw.rationale, it->semantic_score, it->feasibility});
      }
    }
    run.retrieval.emplace(rm.method.signature, std::move(retrieval));
    per_method.push_back(std::move(valid));
  }

  const std::size_t cap = std::min<std::size_t>(config.max_recommendations, 3);
  std::size_t depth = 0;
  for (auto& v : per_method) depth = std::max(depth, v.size());
  Stopwatch sw(run.timings, "planning", false);
  for (std::size_t level = 0; level < depth && run.recommendations.size() < cap; ++level) {
    for (std::size_t i = 0; i < per_method.size() && run.recommendations.size() < cap; ++i) {
      if (level >= per_method[i].size()) continue;
      const auto& rm = run.ranked[i];
      const auto& vt = per_method[i][level];
      MovePlan plan;
      try {
        plan = plan_move(index, rm.method, vt.target);
      } catch (const Error& e) {
        run.warnings.push_back(rm.method.signature + " -> " + vt.target + " dropped: " + e.what());
        continue;
      }
      MoveRecommendation rec;
      rec.rank = run.recommendations.size() + 1;
      rec.method = rm.method;
      rec.target = vt.target;
      rec.is_static = find_method(index, rm.method).is_static;
      rec.method_rationale = rm.rationale;
      rec.target_rationale = vt.rationale;
      auto cand = std::find_if(run.candidates.begin(), run.candidates.end(),
                               [&](const MoveCandidate& c) { return c.method == rm.method; });
      rec.similarity = cand != run.candidates.end() ? cand->similarity : 0.0;
      rec.semantic_score = vt.semantic;
      rec.feasibility = vt.verdict;
      rec.new_signature = plan.new_signature;
      rec.diff = plan.diff;
      run.recommendations.push_back(std::move(rec));
      run.plans.push_back(std::move(plan));
    }
  }
  return run;
}

RecommendedMove to_recommended_move(const MoveRecommendation& r) {
  return RecommendedMove{r.method.signature, r.method.class_name, r.target};
}

json to_json(const MoveRecommendation& r) {
  return {{"rank", r.rank},
          {"method", r.method.signature},
          {"host", r.method.class_name},
          {"target", r.target},
          {"is_static", r.is_static},
          {"new_signature", r.new_signature},
          {"rationale", {{"method", r.method_rationale}, {"target", r.target_rationale}}},
          {"similarity", r.similarity},
          {"semantic_score", r.semantic_score},
          {"feasibility", to_json(r.feasibility)},
          {"diff", r.diff}};
}

json run_summary_json(const RecommendationRun& run, const std::string& run_id) {
  json recs = json::array();
  for (const auto& r : run.recommendations) recs.push_back(to_json(r));
  json counts = json::object();
  for (const auto& [b, n] : run.report.counts) counts[std::string(to_string(b))] = n;
  return {{"run_id", run_id}, {"host", run.host}, {"recommendations", recs}, {"hallucinations", counts},
          {"warnings", run.warnings}};
}

std::string make_run_id(const PipelineConfig& config, const ProjectIndex& index, std::string_view host) {
  std::string material = config.to_json().dump() + "\n" + std::string(host) + "\n";
  for (const auto& [path, f] : index.files) material += path + " " + f.sha256 + "\n";
  return sanitize(host) + "-" + text::sha256_hex(material).substr(0, 8);
}

RunStore::RunStore(fs::path root) : root_(std::move(root)) {}

fs::path RunStore::run_dir(const std::string& run_id) const { return root_ / run_id; }

bool RunStore::exists(const std::string& run_id) const {
  if (run_id.empty() || run_id.find('/') != std::string::npos || run_id.find("..") != std::string::npos) return false;
  return fs::exists(run_dir(run_id) / "recommendations.json");
}

std::string RunStore::save(const RecommendationRun& run, const PipelineConfig& config, const ProjectIndex& index) {
  std::string id = make_run_id(config, index, run.host);
  fs::path dir = run_dir(id);
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (text::starts_with(entry.path().filename().string(), "plan_")) fs::remove(entry.path());
  }
  write_json(dir / "config.json", config.to_json());

  json sanity = json::array();
  for (const auto& v : run.sanity) sanity.push_back(to_json(v));
  json candidates = json::array();
  for (const auto& c : run.candidates) {
    candidates.push_back({{"method", c.method.signature}, {"similarity", c.similarity}});
  }
  json ranked = json::array();
  for (const auto& r : run.ranked) ranked.push_back({{"method", r.method.signature}, {"rationale", r.rationale}});
  write_json(dir / "candidates.json",
             {{"host", run.host}, {"sanity", sanity}, {"candidates", candidates}, {"ranked", ranked}});

  json packed = json::object();
  for (const auto& [sig, r] : run.retrieval) {
    json ranked_targets = json::array();
    for (const auto& c : r.ranked) ranked_targets.push_back(to_json(c));
    json summaries = json::array();
    for (const auto& s : r.pack.summaries) summaries.push_back(to_json(s));
    packed[sig] = {{"ranked", ranked_targets},
                   {"summaries", summaries},
                   {"total_tokens", r.pack.total_tokens},
                   {"warnings", r.pack.warnings}};
  }
  write_json(dir / "packed.json", packed);

  json exchanges = json::array();
  for (const auto& e : run.exchanges) exchanges.push_back(to_json(e));
  write_json(dir / "exchanges.json", exchanges);
  write_json(dir / "report.json", to_json(run.report));
  write_json(dir / "recommendations.json", run_summary_json(run, id));

  json timings = json::array();
  double llm = 0.0;
  double total = 0.0;
  for (const auto& t : run.timings) {
    timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}, {"llm", t.llm}});
    total += t.seconds;
    if (t.llm) llm += t.seconds;
  }
  write_json(dir / "timings.json", {{"stages", timings}, {"llm_seconds", llm}, {"total_seconds", total}});

  json verdicts = json::array();
  for (std::size_t i = 0; i < run.recommendations.size(); ++i) {
    verdicts.push_back({{"index", i}, {"rating", nullptr}, {"applied", false}});
  }
  write_json(dir / "verdicts.json", verdicts);
  for (std::size_t i = 0; i < run.plans.size(); ++i) {
    write_json(dir / ("plan_" + std::to_string(i) + ".json"), to_json(run.plans[i]));
  }
  return id;
}

json RunStore::load_record(const std::string& run_id) const {
  if (!exists(run_id)) throw Error(ErrorCode::MissingRun, "no run " + run_id);
  fs::path dir = run_dir(run_id);
  json record = json::object();
  record["run_id"] = run_id;
  for (const char* name : {"config", "candidates", "packed", "exchanges", "report", "recommendations", "timings",
                           "verdicts"}) {
    fs::path p = dir / (std::string(name) + ".json");
    if (fs::exists(p)) record[name] = read_json(p);
  }
  return record;
}

std::size_t RunStore::recommendation_count(const std::string& run_id) const {
  if (!exists(run_id)) throw Error(ErrorCode::MissingRun, "no run " + run_id);
  return read_json(run_dir(run_id) / "recommendations.json").at("recommendations").size();
}

MovePlan RunStore::load_plan(const std::string& run_id, std::size_t index) const {
  std::size_t n = recommendation_count(run_id);
  if (index >= n) {
    throw Error(ErrorCode::InvalidArgument, "run " + run_id + " has " + std::to_string(n) + " recommendations");
  }
  return plan_from_json(read_json(run_dir(run_id) / ("plan_" + std::to_string(index) + ".json")));
}

std::vector<Verdict> RunStore::verdicts(const std::string& run_id) const {
  if (!exists(run_id)) throw Error(ErrorCode::MissingRun, "no run " + run_id);
  std::vector<Verdict> out;
  for (const auto& v : read_json(run_dir(run_id) / "verdicts.json")) {
    Verdict x;
    x.index = v.at("index").get<std::size_t>();
    if (!v.at("rating").is_null()) x.rating = v.at("rating").get<int>();
    x.applied = v.at("applied").get<bool>();
    out.push_back(x);
  }
  return out;
}

void RunStore::record_verdict(const std::string& run_id, std::size_t index, std::optional<int> rating,
                              std::optional<bool> applied) {
  if (rating && (*rating < 1 || *rating > 6)) throw Error(ErrorCode::InvalidArgument, "rating must be 1..6");
  std::lock_guard lock(verdict_mutex());
  auto current = verdicts(run_id);
  if (index >= current.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "run " + run_id + " has " + std::to_string(current.size()) + " recommendations");
  }
  if (rating) current[index].rating = rating;
  if (applied) current[index].applied = *applied;
  json out = json::array();
  for (const auto& v : current) {
    out.push_back({{"index", v.index}, {"rating", v.rating ? json(*v.rating) : json(nullptr)}, {"applied", v.applied}});
  }
  write_json(run_dir(run_id) / "verdicts.json", out);
}

}  // namespace mover
