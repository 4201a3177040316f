#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "mover/error.hpp"
#include "mover/eval.hpp"
#include "mover/executor.hpp"
#include "mover/pipeline.hpp"
#include "mover/service.hpp"
#include "mover/text.hpp"

namespace mover::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::vector<std::string> roots;
  std::string runs_dir = ".mover/runs";
  std::string config_file;
  std::string mock_behavior;
  bool mock_llm = false;
  bool local_embeddings = false;
  bool json_output = false;
};

PipelineConfig load_config(const Globals& g) {
  PipelineConfig c = g.config_file.empty() ? PipelineConfig{} : PipelineConfig::load(g.config_file);
  if (g.mock_llm) c.providers.chat = "mock";
  if (!g.mock_behavior.empty()) {
    c.providers.chat = "mock";
    c.providers.mock_behavior = g.mock_behavior;
  }
  if (g.local_embeddings) c.providers.embedding = "local";
  return c;
}

std::vector<fs::path> roots_of(const Globals& g) {
  if (g.roots.empty()) return {fs::path(".")};
  return {g.roots.begin(), g.roots.end()};
}

int cmd_index(const Globals& g, const std::string& output, std::ostream& out) {
  ProjectIndex index = build_index(roots_of(g));
  if (!output.empty()) text::write_file_atomic(output, to_json(index).dump() + "\n");
  json classes = json::array();
  for (const auto& [name, cls] : index.classes) {
    classes.push_back({{"name", name}, {"methods", cls.methods.size()}, {"stratum", to_string(stratify(cls))}});
  }
  json warnings = json::array();
  for (const auto& w : index.warnings) warnings.push_back({{"file", w.file}, {"message", w.message}});
  if (g.json_output) {
    out << json{{"files", index.files.size()},
                {"classes", classes},
                {"methods", index.method_count()},
                {"warnings", warnings}}
               .dump(2)
        << "\n";
    return 0;
  }
  out << index.files.size() << " files, " << index.classes.size() << " classes, " << index.method_count()
      << " methods\n";
  for (const auto& c : classes) {
    out << "  " << c["name"].get<std::string>() << "  " << c["methods"].get<std::size_t>() << " methods  "
        << c["stratum"].get<std::string>() << "\n";
  }
  for (const auto& w : index.warnings) out << "warning: " << w.file << ": " << w.message << "\n";
  return 0;
}

void print_run(const json& summary, std::ostream& out) {
  out << "run " << summary["run_id"].get<std::string>() << "\n";
  const auto& recs = summary["recommendations"];
  if (recs.empty()) out << "no move recommended for " << summary["host"].get<std::string>() << "\n";
  for (const auto& r : recs) {
    out << r["rank"].get<std::size_t>() << ". " << r["host"].get<std::string>() << "#"
        << r["method"].get<std::string>() << " -> " << r["target"].get<std::string>() << "\n";
    out << "   why this method: " << r["rationale"]["method"].get<std::string>() << "\n";
    out << "   why this class:  " << r["rationale"]["target"].get<std::string>() << "\n";
    out << r["diff"].get<std::string>();
  }
  for (const auto& w : summary["warnings"]) out << "warning: " << w.get<std::string>() << "\n";
}

int cmd_recommend(const Globals& g, const std::string& cls, std::ostream& out) {
  PipelineConfig config = load_config(g);
  ProjectIndex index = build_index(roots_of(g));
  Providers providers = make_providers(config, index);
  RecommendationRun run = recommend(config, index, providers, cls);
  RunStore store(g.runs_dir);
  std::string id = store.save(run, config, index);
  json summary = run_summary_json(run, id);
  if (g.json_output) {
    out << summary.dump(2) << "\n";
  } else {
    print_run(summary, out);
  }
  return 0;
}

int cmd_apply(const Globals& g, const std::string& run_id, std::size_t rank, std::ostream& out) {
  RunStore store(g.runs_dir);
  if (rank == 0) throw Error(ErrorCode::InvalidArgument, "recommendation numbers start at 1");
  MovePlan plan = store.load_plan(run_id, rank - 1);
  ApplyResult result = apply(plan);
  store.record_verdict(run_id, rank - 1, std::nullopt, true);
  if (g.json_output) {
    out << json{{"run_id", run_id},
                {"recommendation", rank},
                {"files_changed", result.files_changed},
                {"call_sites_rewritten", result.call_sites_rewritten},
                {"reparse_ok", result.reparse_ok}}
               .dump(2)
        << "\n";
  } else {
    out << "moved " << plan.method.class_name << "#" << plan.method.signature << " to " << plan.target << " as "
        << plan.new_signature << "\n";
    for (const auto& f : result.files_changed) out << "  changed " << f << "\n";
    out << result.call_sites_rewritten << " call sites rewritten\n";
  }
  return 0;
}

int cmd_eval(const Globals& g, const std::string& gold_file, bool name_only, std::ostream& out) {
  PipelineConfig config = load_config(g);
  auto gold = read_gold(gold_file);
  ProjectIndex index = build_index(roots_of(g));
  Providers providers = make_providers(config, index);
  std::map<std::string, std::vector<RecommendedMove>> runs;
  std::map<std::string, Stratum> strata;
  for (const auto& t : gold) {
    if (runs.count(t.host)) continue;
    const ClassInfo* cls = index.find_class(t.host);
    if (cls == nullptr) continue;
    strata[t.host] = stratify(*cls);
    auto run = recommend(config, index, providers, t.host);
    auto& list = runs[t.host];
    for (const auto& r : run.recommendations) list.push_back(to_recommended_move(r));
  }
  EvalOptions options;
  options.name_only = name_only;
  EvalResult result = compute_recalls(gold, runs, strata, options);
  if (g.json_output) {
    out << to_json(result).dump(2) << "\n";
  } else {
    out << format_table(result);
  }
  return 0;
}

int cmd_perturb(const Globals& g, const std::string& out_dir, std::size_t n, std::uint64_t seed,
                std::string gold_out, std::ostream& out) {
  auto corpus = generate_perturbed_corpus(roots_of(g), out_dir, n, seed);
  if (gold_out.empty()) gold_out = (fs::path(out_dir) / "gold.jsonl").string();
  write_gold(gold_out, corpus.gold);
  if (g.json_output) {
    json gold = json::array();
    for (const auto& t : corpus.gold) gold.push_back(to_json(t));
    out << json{{"roots", corpus.roots}, {"gold_file", gold_out}, {"gold", gold}, {"rolled_back", corpus.rolled_back}}
               .dump(2)
        << "\n";
  } else {
    out << corpus.gold.size() << " methods moved; gold set written to " << gold_out << "\n";
    for (const auto& r : corpus.roots) out << "  project copy " << r << "\n";
  }
  return 0;
}

int cmd_serve(const Globals& g, const std::string& host, int port, const std::string& ui_dir, std::ostream& out) {
  ServiceOptions options;
  for (const auto& r : roots_of(g)) options.roots.push_back(r.string());
  options.runs_dir = g.runs_dir;
  options.static_dir = ui_dir;
  options.config = load_config(g);
  Service service(options);
  out << "serving on http://" << host << ":" << port << "\n" << std::flush;
  if (!service.listen(host, port)) throw Error(ErrorCode::IoError, "cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recommend, preview and apply MoveMethod refactorings in Java projects", "mover"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--root", g.roots, "Java source root (repeatable; default .)");
  app.add_option("--runs-dir", g.runs_dir, "Directory for run records")->capture_default_str();
  app.add_option("--config", g.config_file, "Pipeline config file (JSON)");
  app.add_flag("--mock-llm", g.mock_llm, "Use the offline mock chat provider");
  app.add_option("--mock-behavior", g.mock_behavior, "Mock behaviour: echo, similarity or fault")
      ->check(CLI::IsMember({"echo", "similarity", "fault"}));
  app.add_flag("--local-embeddings", g.local_embeddings, "Use the offline TF-IDF embedder");
  app.add_flag("--json", g.json_output, "Print JSON");

  auto* index_cmd = app.add_subcommand("index", "Index the project and list its classes");
  std::string index_output;
  index_cmd->add_option("--output", index_output, "Write the full index as JSON");

  auto* rec_cmd = app.add_subcommand("recommend", "Recommend moves for methods of one class");
  std::string cls;
  rec_cmd->add_option("class", cls, "Qualified class name")->required();

  auto* apply_cmd = app.add_subcommand("apply", "Apply a recommendation from a stored run");
  std::string run_id;
  std::size_t rank = 0;
  apply_cmd->add_option("run", run_id, "Run id")->required();
  apply_cmd->add_option("n", rank, "Recommendation number (1-based)")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Score recommendations against a gold set");
  std::string gold_file;
  bool name_only = false;
  eval_cmd->add_option("--gold", gold_file, "Gold set (JSON lines)")->required();
  eval_cmd->add_flag("--name-only", name_only, "Match methods by name only");

  auto* perturb_cmd = app.add_subcommand("perturb", "Build a synthetic corpus by moving methods away");
  std::string out_dir;
  std::size_t n = 30;
  std::uint64_t seed = 42;
  std::string gold_out;
  perturb_cmd->add_option("--out", out_dir, "Output directory for project copies")->required();
  perturb_cmd->add_option("--n", n, "Number of moves")->capture_default_str();
  perturb_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  perturb_cmd->add_option("--gold-out", gold_out, "Gold file (default <out>/gold.jsonl)");

  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string ui_dir;
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str();
  serve_cmd->add_option("--ui", ui_dir, "Directory of static UI assets");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return 2;
  }

  try {
    if (index_cmd->parsed()) return cmd_index(g, index_output, out);
    if (rec_cmd->parsed()) return cmd_recommend(g, cls, out);
    if (apply_cmd->parsed()) return cmd_apply(g, run_id, rank, out);
    if (eval_cmd->parsed()) return cmd_eval(g, gold_file, name_only, out);
    if (perturb_cmd->parsed()) return cmd_perturb(g, out_dir, n, seed, gold_out, out);
    if (serve_cmd->parsed()) return cmd_serve(g, host, port, ui_dir, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidArgument ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mover::cli
