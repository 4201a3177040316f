#include "mover/target_retrieval.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <set>

#include "mover/text.hpp"

namespace mover {

namespace {

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<TargetCandidate> enumerate_instance_targets(const ProjectIndex& index, const MethodRef& method) {
  const ClassInfo& host = index.class_at(method.class_name);
  const MethodInfo& m = find_method(index, method);
  std::vector<std::string> types;
  std::set<std::string> seen;
  auto consider = [&](const std::string& declared) {
    if (declared == host.qualified_name || index.find_class(declared) == nullptr) return;
    if (seen.insert(declared).second) types.push_back(declared);
  };
  for (const auto& f : host.fields) {
    if (!f.is_static) consider(f.declared_type);
  }
  for (const auto& p : m.parameters) consider(p.declared_type);
  std::vector<TargetCandidate> out;
  for (const auto& t : types) {
    auto verdict = check_instance_feasibility(index, method, t);
    if (verdict.feasible) out.push_back(TargetCandidate{t, 0.0, 0.0, std::move(verdict)});
  }
  return out;
}

double package_proximity(const std::vector<std::string>& target_package, const std::vector<std::string>& host_package) {
  if (host_package.empty()) return target_package.empty() ? 1.0 : 0.0;
  std::size_t shared = 0;
  while (shared < host_package.size() && shared < target_package.size() &&
         host_package[shared] == target_package[shared]) {
    ++shared;
  }
  return static_cast<double>(shared) / static_cast<double>(host_package.size());
}

double package_proximity(const ClassInfo& target, const ClassInfo& host) {
  return package_proximity(target.package_path, host.package_path);
}

int is_utility_name(std::string_view simple_name) {
  return text::to_lower(simple_name).find("util") != std::string::npos ? 1 : 0;
}

int is_utility_class(const ClassInfo& cls) { return is_utility_name(cls.simple_name); }

double ranking_score(const ClassInfo& target, const ClassInfo& host) {
  return 2.0 * package_proximity(target, host) + is_utility_class(target);
}

std::vector<TargetCandidate> enumerate_static_targets(const ProjectIndex& index, const MethodRef& method,
                                                      std::size_t limit) {
  const ClassInfo& host = index.class_at(method.class_name);
  std::vector<TargetCandidate> scored;
  for (const auto& [name, cls] : index.classes) {
    if (name == host.qualified_name) continue;
    TargetCandidate c;
    c.target = name;
    c.heuristic_score = ranking_score(cls, host);
    scored.push_back(std::move(c));
  }
  std::stable_sort(scored.begin(), scored.end(), [](const TargetCandidate& a, const TargetCandidate& b) {
    if (a.heuristic_score != b.heuristic_score) return a.heuristic_score > b.heuristic_score;
    return a.target < b.target;
  });
  if (scored.size() > limit) scored.resize(limit);
  std::vector<TargetCandidate> out;
  for (auto& c : scored) {
    c.feasibility = check_static_feasibility(index, method, c.target);
    if (c.feasibility.feasible) out.push_back(std::move(c));
  }
  return out;
}

std::string ClassSummary::render() const {
  std::string out = qualified_name + "\n";
  for (const auto& f : field_declarations) out += f + "\n";
  if (docstring && !docstring->empty()) out += *docstring + "\n";
  for (const auto& s : method_signatures) out += s + "\n";
  return out;
}

std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

std::size_t ClassSummary::token_estimate() const { return estimate_tokens(render()); }

ClassSummary summarize_class(const ProjectIndex& index, const ClassInfo& cls) {
  std::string_view src = index.file_content(cls.source_file);
  ClassSummary s;
  s.qualified_name = cls.qualified_name;
  s.docstring = cls.docstring;
  std::set<std::size_t> spans;
  for (const auto& f : cls.fields) {
    if (!spans.insert(f.decl_span.begin).second) continue;
    s.field_declarations.push_back(collapse_ws(src.substr(f.decl_span.begin, f.decl_span.size())));
  }
  for (const auto& m : cls.methods) {
    std::string sig = text::join(m.modifiers, " ");
    if (!sig.empty()) sig += " ";
    if (!m.is_constructor) sig += m.return_type + " ";
    sig += m.name + collapse_ws(src.substr(m.params_span.begin, m.params_span.size()));
    s.method_signatures.push_back(std::move(sig));
  }
  return s;
}

PackResult pack_summaries(const std::vector<ClassSummary>& ordered, std::size_t budget_tokens) {
  PackResult r;
  for (const auto& s : ordered) {
    std::size_t t = s.token_estimate();
    if (r.total_tokens + t <= budget_tokens) {
      r.summaries.push_back(s);
      r.total_tokens += t;
      continue;
    }
    if (r.summaries.empty()) {
      ClassSummary cut = s;
      while (!cut.method_signatures.empty() && cut.token_estimate() > budget_tokens) cut.method_signatures.pop_back();
      std::size_t dropped = s.method_signatures.size() - cut.method_signatures.size();
      r.warnings.push_back(s.qualified_name + " summary is " + std::to_string(t) + " tokens, over the budget of " +
                           std::to_string(budget_tokens) + "; emitted alone with " + std::to_string(dropped) +
                           " signatures dropped");
      r.total_tokens = cut.token_estimate();
      r.summaries.push_back(std::move(cut));
    }
    break;
  }
  return r;
}

RetrievalResult semantic_rerank_and_pack(const ProjectIndex& index, EmbeddingProvider& provider,
                                         const MethodRef& method, std::vector<TargetCandidate> candidates,
                                         std::size_t budget_tokens) {
  RetrievalResult r;
  if (candidates.empty()) return r;
  const ClassInfo& host = index.class_at(method.class_name);
  EmbeddingVector mv = provider.embed(method_text(index, host, find_method(index, method)));
  for (auto& c : candidates) {
    const ClassInfo& t = index.class_at(c.target);
    c.semantic_score = cosine_similarity(mv, provider.embed(class_text(index, t)));
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const TargetCandidate& a, const TargetCandidate& b) {
    if (a.semantic_score != b.semantic_score) return a.semantic_score > b.semantic_score;
    return a.target < b.target;
  });
  std::vector<ClassSummary> summaries;
  summaries.reserve(candidates.size());
  for (const auto& c : candidates) summaries.push_back(summarize_class(index, index.class_at(c.target)));
  r.pack = pack_summaries(summaries, budget_tokens);
  r.packed.assign(candidates.begin(), candidates.begin() + static_cast<long>(r.pack.summaries.size()));
  r.ranked = std::move(candidates);
  return r;
}

nlohmann::json to_json(const TargetCandidate& c) {
  return {{"target", c.target},
          {"heuristic_score", c.heuristic_score},
          {"semantic_score", c.semantic_score},
          {"feasibility", to_json(c.feasibility)}};
}

nlohmann::json to_json(const ClassSummary& s) {
  return {{"qualified_name", s.qualified_name},
          {"field_declarations", s.field_declarations},
          {"docstring", s.docstring ? nlohmann::json(*s.docstring) : nlohmann::json(nullptr)},
          {"method_signatures", s.method_signatures},
          {"token_estimate", s.token_estimate()}};
}

}  // namespace mover
