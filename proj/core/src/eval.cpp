#include "mover/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "mover/candidate_filter.hpp"
#include "mover/error.hpp"
#include "mover/executor.hpp"
#include "mover/target_retrieval.hpp"
#include "mover/text.hpp"

namespace mover {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Stratum s) { return s == Stratum::Small ? "SMALL" : "LARGE"; }

Stratum stratify(std::size_t method_count) { return method_count < 15 ? Stratum::Small : Stratum::Large; }

Stratum stratify(const ClassInfo& cls) { return stratify(cls.methods.size()); }

namespace {

std::vector<std::string> split_top_level(std::string_view params) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : params) {
    if (c == '<' || c == '(' || c == '[') ++depth;
    if (c == '>' || c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur.push_back(c);
  }
  if (!text::trim(cur).empty() || !out.empty()) out.push_back(cur);
  return out;
}

/// Type part of one parameter declaration.
std::string parameter_type(std::string_view param) {
  std::string p = text::trim(param);
  // Drop annotations and `final`.
  for (;;) {
    if (text::starts_with(p, "@")) {
      std::size_t i = 1;
      while (i < p.size() && (std::isalnum(static_cast<unsigned char>(p[i])) || p[i] == '_' || p[i] == '.')) ++i;
      if (i < p.size() && p[i] == '(') {
        int depth = 0;
        for (; i < p.size(); ++i) {
          if (p[i] == '(') ++depth;
          if (p[i] == ')' && --depth == 0) {
            ++i;
            break;
          }
        }
      }
      p = text::trim(p.substr(i));
    } else if (text::starts_with(p, "final ")) {
      p = text::trim(p.substr(6));
    } else {
      break;
    }
  }
  // A trailing identifier after top-level whitespace is the parameter name.
  int depth = 0;
  std::size_t last_space = std::string::npos;
  for (std::size_t i = 0; i < p.size(); ++i) {
    char c = p[i];
    if (c == '<') ++depth;
    if (c == '>') --depth;
    if (depth == 0 && (c == ' ' || c == '\t' || c == '\n')) last_space = i;
  }
  if (last_space != std::string::npos) {
    std::string tail = text::trim(p.substr(last_space));
    bool ident = !tail.empty() && std::all_of(tail.begin(), tail.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
    });
    if (ident) p = text::trim(p.substr(0, last_space));
  }
  return text::erase_type(p);
}

bool same_method(const std::string& a, const std::string& b, bool name_only) {
  return normalize_signature(a, name_only) == normalize_signature(b, name_only);
}

}  // namespace

std::string normalize_signature(std::string_view signature, bool name_only) {
  std::string s = text::trim(signature);
  auto open = s.find('(');
  std::string name = text::trim(s.substr(0, open));
  if (name_only || open == std::string::npos) return name;
  auto close = s.rfind(')');
  std::string inner = close == std::string::npos || close < open ? s.substr(open + 1) : s.substr(open + 1, close - open - 1);
  std::vector<std::string> types;
  for (const auto& p : split_top_level(inner)) types.push_back(parameter_type(p));
  return name + "(" + text::join(types, ",") + ")";
}

EvalResult compute_recalls(const std::vector<GoldTriplet>& gold,
                           const std::map<std::string, std::vector<RecommendedMove>>& runs,
                           const std::map<std::string, Stratum>& host_strata, const EvalOptions& options) {
  for (const auto& g : gold) {
    if (!runs.count(g.host)) throw Error(ErrorCode::MissingRun, "no recommendation run for " + g.host);
  }
  auto evaluate = [&](const std::vector<const GoldTriplet*>& subset, int k) {
    RecallAtK r;
    r.k = k;
    r.gold = subset.size();
    for (const GoldTriplet* g : subset) {
      const auto& recs = runs.at(g->host);
      std::size_t top = std::min<std::size_t>(recs.size(), static_cast<std::size_t>(std::max(k, 0)));
      bool identified = false;
      bool matched = false;
      for (std::size_t i = 0; i < top; ++i) {
        if (recs[i].host != g->host || !same_method(recs[i].method, g->method, options.name_only)) continue;
        identified = true;
        if (recs[i].target == g->target) matched = true;
      }
      r.identified += identified ? 1 : 0;
      r.matched += matched ? 1 : 0;
    }
    if (r.gold > 0) {
      r.recall_m = static_cast<double>(r.identified) / static_cast<double>(r.gold);
      r.recall_mc = static_cast<double>(r.matched) / static_cast<double>(r.gold);
    }
    if (r.identified > 0) r.recall_c = static_cast<double>(r.matched) / static_cast<double>(r.identified);
    return r;
  };
  EvalResult out;
  std::vector<const GoldTriplet*> all;
  std::map<Stratum, std::vector<const GoldTriplet*>> by_stratum;
  for (const auto& g : gold) {
    all.push_back(&g);
    auto s = host_strata.find(g.host);
    if (s != host_strata.end()) by_stratum[s->second].push_back(&g);
  }
  for (int k : options.ks) {
    out.overall.push_back(evaluate(all, k));
    for (const auto& [stratum, subset] : by_stratum) out.strata[stratum].push_back(evaluate(subset, k));
  }
  return out;
}

std::string format_table(const EvalResult& result) {
  auto rows = [](const std::string& label, const std::vector<RecallAtK>& rs) {
    std::string out;
    for (const auto& r : rs) {
      char line[160];
      std::snprintf(line, sizeof line, "%-8s %3d %9.3f %9.3f %10.3f %6zu %6zu %6zu\n", label.c_str(), r.k, r.recall_m,
                    r.recall_c, r.recall_mc, r.gold, r.identified, r.matched);
      out += line;
    }
    return out;
  };
  std::string out = "stratum    k  Recall_M  Recall_C  Recall_MC    |G|  |R_M| |R∩G|\n";
  out += rows("ALL", result.overall);
  for (const auto& [s, rs] : result.strata) out += rows(std::string(to_string(s)), rs);
  return out;
}

json to_json(const GoldTriplet& g) {
  return {{"method", g.method}, {"host", g.host}, {"target", g.target}, {"is_static", g.is_static}};
}

GoldTriplet gold_from_json(const json& j) {
  GoldTriplet g{normalize_signature(j.at("method").get<std::string>()), j.at("host").get<std::string>(),
                j.at("target").get<std::string>(), j.value("is_static", false)};
  if (g.host == g.target) throw Error(ErrorCode::InvalidArgument, "gold triplet with host == target: " + g.host);
  return g;
}

std::vector<GoldTriplet> read_gold(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::vector<GoldTriplet> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(n) + " is not JSON");
    out.push_back(gold_from_json(j));
  }
  return out;
}

void write_gold(const fs::path& path, const std::vector<GoldTriplet>& gold) {
  std::string body;
  for (const auto& g : gold) body += to_json(g).dump() + "\n";
  text::write_file_atomic(path, body);
}

json to_json(const EvalResult& r) {
  auto rows = [](const std::vector<RecallAtK>& rs) {
    json a = json::array();
    for (const auto& x : rs) {
      a.push_back({{"k", x.k},
                   {"recall_m", x.recall_m},
                   {"recall_c", x.recall_c},
                   {"recall_mc", x.recall_mc},
                   {"gold", x.gold},
                   {"identified", x.identified},
                   {"matched", x.matched}});
    }
    return a;
  };
  json strata = json::object();
  for (const auto& [s, rs] : r.strata) strata[std::string(to_string(s))] = rows(rs);
  return {{"overall", rows(r.overall)}, {"strata", strata}};
}

namespace {

struct PoolEntry {
  std::size_t project = 0;
  MethodRef method;
  std::string target;
};

std::string project_name(const fs::path& root) {
  fs::path p = fs::weakly_canonical(root);
  std::string name = p.filename().string();
  if ((name == "src" || name == "java") && p.has_parent_path()) {
    fs::path parent = p.parent_path();
    while ((parent.filename() == "main" || parent.filename() == "src") && parent.has_parent_path()) {
      parent = parent.parent_path();
    }
    name = parent.filename().string();
  }
  return name.empty() ? "project" : name;
}

bool reverse_feasible(const ProjectIndex& index, const GoldTriplet& g) {
  const ClassInfo* cls = index.find_class(g.host);
  if (cls == nullptr) return false;
  const MethodInfo* m = cls->find_method(g.method);
  if (m == nullptr || !sanity_check(*cls, *m).passed) return false;
  return check_instance_feasibility(index, MethodRef{g.host, g.method}, g.target).feasible;
}

}  // namespace

PerturbedCorpus generate_perturbed_corpus(const std::vector<fs::path>& project_roots, const fs::path& out_dir,
                                          std::size_t n, std::uint64_t seed) {
  PerturbedCorpus corpus;
  std::vector<ProjectIndex> indexes;
  std::vector<std::vector<GoldTriplet>> gold_by_project(project_roots.size());
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < project_roots.size(); ++i) {
    fs::path copy = out_dir / (std::to_string(i) + "-" + project_name(project_roots[i]));
    fs::remove_all(copy);
    fs::copy(project_roots[i], copy, fs::copy_options::recursive);
    corpus.roots.push_back(copy.string());
    indexes.push_back(build_index({copy}));
  }

  std::vector<PoolEntry> pool;
  for (std::size_t p = 0; p < indexes.size(); ++p) {
    for (const auto& [name, cls] : indexes[p].classes) {
      if (indexes[p].files.at(cls.source_file).under_test_root) continue;
      for (const auto& m : cls.methods) {
        if (m.is_static || !sanity_check(cls, m).passed) continue;
        MethodRef ref{name, m.signature};
        for (const auto& t : enumerate_instance_targets(indexes[p], ref)) pool.push_back(PoolEntry{p, ref, t.target});
      }
    }
  }
  // Fisher-Yates with an explicit draw so the order is the same on every standard library.
  std::mt19937_64 rng(seed);
  for (std::size_t i = pool.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(pool[i - 1], pool[j]);
  }

  for (const auto& entry : pool) {
    if (corpus.gold.size() >= n) break;
    ProjectIndex& index = indexes[entry.project];
    const ClassInfo* host = index.find_class(entry.method.class_name);
    if (host == nullptr || host->find_method(entry.method.signature) == nullptr) continue;
    if (!check_instance_feasibility(index, entry.method, entry.target).feasible) continue;
    ++corpus.attempted;
    MovePlan plan;
    try {
      plan = plan_move(index, entry.method, entry.target);
    } catch (const Error&) {
      continue;
    }
    std::map<std::string, std::string> before;
    for (const auto& [path, _] : plan.file_hashes) before[path] = text::read_file(path);
    ApplyResult applied;
    try {
      applied = apply(plan);
    } catch (const Error&) {
      ++corpus.rolled_back;
      continue;
    }
    GoldTriplet g{plan.new_signature, entry.target, entry.method.class_name, false};
    auto& project_gold = gold_by_project[entry.project];
    project_gold.push_back(g);
    bool sound = std::all_of(project_gold.begin(), project_gold.end(),
                             [&](const GoldTriplet& x) { return reverse_feasible(applied.index_after, x); });
    if (!sound) {
      project_gold.pop_back();
      for (const auto& [path, content] : before) text::write_file_atomic(path, content);
      index = build_index({fs::path(corpus.roots[entry.project])});
      ++corpus.rolled_back;
      continue;
    }
    index = std::move(applied.index_after);
    corpus.gold.push_back(g);
  }
  if (corpus.gold.size() < n) {
    throw Error(ErrorCode::InsufficientCandidates, "only " + std::to_string(corpus.gold.size()) + " of " +
                                                       std::to_string(n) + " perturbations succeeded");
  }
  return corpus;
}

}  // namespace mover
