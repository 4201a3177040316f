#include <benchmark/benchmark.h>

#include <random>

#include "mover/pipeline.hpp"

using namespace mover;

namespace {

std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(MOVER_FIXTURES) / name; }

std::vector<std::filesystem::path> projects() {
  return {fixture("perturb/logistics/src"), fixture("perturb/library/src"), fixture("perturb/clinic/src"),
          fixture("bank/src"), fixture("esql/src")};
}

void BM_BuildIndex(benchmark::State& state) {
  auto roots = projects();
  for (auto _ : state) benchmark::DoNotOptimize(build_index(roots));
}
BENCHMARK(BM_BuildIndex)->Unit(benchmark::kMillisecond);

void BM_LocalEmbed(benchmark::State& state) {
  auto idx = build_index(projects());
  LocalEmbedder e;
  e.fit(idx);
  const auto& cls = idx.class_at("org.example.esql.session.EsqlSession");
  std::string text(class_text(idx, cls));
  for (auto _ : state) benchmark::DoNotOptimize(e.embed(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_LocalEmbed);

void BM_MisplacementScores(benchmark::State& state) {
  auto idx = build_index(projects());
  LocalEmbedder e;
  e.fit(idx);
  const auto& cls = idx.class_at("org.example.esql.session.EsqlSession");
  std::vector<const MethodInfo*> methods;
  for (const auto& m : cls.methods) methods.push_back(&m);
  for (auto _ : state) benchmark::DoNotOptimize(misplacement_scores(idx, e, cls, methods));
}
BENCHMARK(BM_MisplacementScores);

void BM_RecommendWithMock(benchmark::State& state) {
  auto idx = build_index(projects());
  PipelineConfig c;
  c.providers.chat = "mock";
  auto providers = make_providers(c, idx);
  for (auto _ : state) benchmark::DoNotOptimize(recommend(c, idx, providers, "org.example.esql.session.EsqlSession"));
}
BENCHMARK(BM_RecommendWithMock)->Unit(benchmark::kMillisecond);

void BM_ComputeRecalls(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<GoldTriplet> gold;
  std::map<std::string, std::vector<RecommendedMove>> runs;
  for (int h = 0; h < state.range(0); ++h) {
    std::string host = "p.H" + std::to_string(h);
    gold.push_back({"m" + std::to_string(rng() % 5) + "()", host, "p.T" + std::to_string(rng() % 4), false});
    auto& list = runs[host];
    for (int i = 0; i < 3; ++i) list.push_back({"m" + std::to_string(rng() % 5) + "()", host, "p.T" + std::to_string(rng() % 4)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(compute_recalls(gold, runs));
}
BENCHMARK(BM_ComputeRecalls)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
