#include <gtest/gtest.h>

#include "mover/error.hpp"
#include "mover/eval.hpp"
#include "support.hpp"

using namespace mover;
using mover::testing::fixture;

namespace {

const RecallAtK& at(const EvalResult& r, int k) {
  for (const auto& x : r.overall) {
    if (x.k == k) return x;
  }
  throw std::out_of_range("k");
}

std::vector<std::filesystem::path> perturb_projects() {
  return {fixture("perturb/logistics/src"), fixture("perturb/library/src"), fixture("perturb/clinic/src")};
}

}  // namespace

TEST(Recall, ExactTopOneMatch) {
  std::vector<GoldTriplet> gold{{"m(int)", "p.H", "p.T", false}};
  std::map<std::string, std::vector<RecommendedMove>> runs{{"p.H", {{"m(int)", "p.H", "p.T"}}}};
  auto r = compute_recalls(gold, runs);
  for (int k : {1, 2, 3}) {
    EXPECT_EQ(at(r, k).recall_m, 1.0);
    EXPECT_EQ(at(r, k).recall_c, 1.0);
    EXPECT_EQ(at(r, k).recall_mc, 1.0);
  }
}

TEST(Recall, MethodAtRankTwoWithWrongTarget) {
  std::vector<GoldTriplet> gold{{"m(int)", "p.H", "p.T", false}};
  std::map<std::string, std::vector<RecommendedMove>> runs{
      {"p.H", {{"other()", "p.H", "p.T"}, {"m(int)", "p.H", "p.X"}}}};
  auto r = compute_recalls(gold, runs);
  EXPECT_EQ(at(r, 1).recall_m, 0.0);
  EXPECT_EQ(at(r, 1).recall_c, 0.0);  // nothing identified: defined as 0
  EXPECT_EQ(at(r, 3).recall_m, 1.0);
  EXPECT_EQ(at(r, 3).recall_c, 0.0);
  EXPECT_EQ(at(r, 3).recall_mc, 0.0);
  EXPECT_EQ(at(r, 3).identified, 1u);
}

TEST(Recall, TargetRatioCanFallAsKGrows) {
  // k=1: one of one identified method correct; k=2 adds a wrong one.
  std::vector<GoldTriplet> gold{{"a()", "p.H", "p.T", false}, {"b()", "p.G", "p.T", false}};
  std::map<std::string, std::vector<RecommendedMove>> runs{
      {"p.H", {{"a()", "p.H", "p.T"}}}, {"p.G", {{"z()", "p.G", "p.T"}, {"b()", "p.G", "p.X"}}}};
  auto r = compute_recalls(gold, runs);
  EXPECT_EQ(at(r, 1).recall_c, 1.0);
  EXPECT_EQ(at(r, 2).recall_c, 0.5);
  EXPECT_LE(at(r, 1).recall_m, at(r, 2).recall_m);
  EXPECT_LE(at(r, 1).recall_mc, at(r, 2).recall_mc);
}

TEST(Recall, SignaturesCompareAfterNormalization) {
  std::vector<GoldTriplet> gold{{"m(List,int)", "p.H", "p.T", false}};
  std::map<std::string, std::vector<RecommendedMove>> runs{{"p.H", {{"m(java.util.List<String>, int)", "p.H", "p.T"}}}};
  EXPECT_EQ(at(compute_recalls(gold, runs), 1).recall_mc, 1.0);
  std::map<std::string, std::vector<RecommendedMove>> by_name{{"p.H", {{"m(String)", "p.H", "p.T"}}}};
  EXPECT_EQ(at(compute_recalls(gold, by_name), 1).recall_mc, 0.0);
  EvalOptions o;
  o.name_only = true;
  EXPECT_EQ(at(compute_recalls(gold, by_name, {}, o), 1).recall_mc, 1.0);
}

TEST(Recall, MissingRunForGoldHost) {
  std::vector<GoldTriplet> gold{{"m()", "p.H", "p.T", false}};
  try {
    compute_recalls(gold, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingRun);
  }
}

TEST(Recall, StrataSplitByHostSize) {
  std::vector<GoldTriplet> gold{{"a()", "p.S", "p.T", false}, {"b()", "p.L", "p.T", false}};
  std::map<std::string, std::vector<RecommendedMove>> runs{{"p.S", {{"a()", "p.S", "p.T"}}}, {"p.L", {}}};
  auto r = compute_recalls(gold, runs, {{"p.S", Stratum::Small}, {"p.L", Stratum::Large}});
  EXPECT_EQ(r.strata.at(Stratum::Small)[0].recall_mc, 1.0);
  EXPECT_EQ(r.strata.at(Stratum::Large)[0].recall_mc, 0.0);
  EXPECT_EQ(at(r, 1).recall_mc, 0.5);
  std::string table = format_table(r);
  EXPECT_NE(table.find("Recall_MC"), std::string::npos);
  EXPECT_NE(table.find("SMALL"), std::string::npos);
}

TEST(Stratum, SmallBelowFifteen) {
  EXPECT_EQ(stratify(6), Stratum::Small);
  EXPECT_EQ(stratify(14), Stratum::Small);
  EXPECT_EQ(stratify(15), Stratum::Large);
  EXPECT_EQ(stratify(48), Stratum::Large);
}

TEST(Normalize, DropsNamesModifiersAndGenerics) {
  EXPECT_EQ(normalize_signature("foo(final java.util.List<String> items, @Nonnull int n)"), "foo(List,int)");
  EXPECT_EQ(normalize_signature("foo(Map<K, V> m, String... rest)"), "foo(Map,String[])");
  EXPECT_EQ(normalize_signature("foo()"), "foo()");
  EXPECT_EQ(normalize_signature("foo(int)", true), "foo");
}

TEST(Gold, FileRoundTripAndValidation) {
  auto file = mover::testing::scratch_dir("gold") / "gold.jsonl";
  std::vector<GoldTriplet> gold{{"a(int)", "p.H", "p.T", false}, {"b()", "p.X", "p.Y", true}};
  write_gold(file, gold);
  EXPECT_EQ(read_gold(file), gold);
  EXPECT_THROW(gold_from_json({{"method", "a()"}, {"host", "p.H"}, {"target", "p.H"}}), Error);
}

TEST(Perturb, SeededCorpusIsReproducible) {
  auto a = generate_perturbed_corpus(perturb_projects(), mover::testing::scratch_dir("pa"), 10, 5);
  auto b = generate_perturbed_corpus(perturb_projects(), mover::testing::scratch_dir("pb"), 10, 5);
  ASSERT_EQ(a.gold.size(), 10u);
  EXPECT_EQ(a.gold, b.gold);
  EXPECT_EQ(a.roots.size(), 3u);
  auto c = generate_perturbed_corpus(perturb_projects(), mover::testing::scratch_dir("pc"), 10, 6);
  EXPECT_NE(a.gold, c.gold);
}

TEST(Perturb, GoldPointsHomeAndStaysFeasible) {
  auto corpus = generate_perturbed_corpus(perturb_projects(), mover::testing::scratch_dir("pg"), 12, 11);
  std::vector<std::filesystem::path> roots(corpus.roots.begin(), corpus.roots.end());
  auto idx = build_index(roots);
  for (const auto& g : corpus.gold) {
    EXPECT_FALSE(g.is_static);
    const ClassInfo* moved_to = idx.find_class(g.host);
    ASSERT_NE(moved_to, nullptr);
    ASSERT_NE(moved_to->find_method(g.method), nullptr) << g.method << " in " << g.host;
    EXPECT_NE(idx.find_class(g.target), nullptr);
  }
  // Source fixtures are untouched.
  EXPECT_EQ(build_index(perturb_projects()).method_count(), idx.method_count());
}

TEST(Perturb, TooManyMovesRequested) {
  try {
    generate_perturbed_corpus({fixture("bank/src")}, mover::testing::scratch_dir("pi"), 50, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientCandidates);
  }
}
