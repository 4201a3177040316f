#include <gtest/gtest.h>

#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = mover::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  auto help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("recommend"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  auto missing = run({"recommend"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("class"), std::string::npos);
}

TEST(Cli, IndexListsClasses) {
  auto r = run({"--root", mover::testing::fixture("bank/src").string(), "--json", "index"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["classes"].size(), 6u);
  EXPECT_EQ(j["methods"], 24);
}

TEST(Cli, RecommendIsDeterministicAndApplyWorksOnce) {
  auto root = mover::testing::copy_fixture("bank").string();
  auto runs = mover::testing::scratch_dir("cli-runs").string();
  std::vector<std::string> args{"--root", root, "--runs-dir", runs, "--mock-llm", "--local-embeddings", "--json",
                                "recommend", "com.bank.model.Account"};
  auto a = run(args);
  auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::string id = json::parse(a.out)["run_id"];

  auto text = run({"--root", root, "--runs-dir", runs, "--mock-llm", "recommend", "com.bank.model.Account"});
  EXPECT_NE(text.out.find("com.bank.model.Account#computeInterest(InterestPolicy) -> com.bank.model.InterestPolicy"),
            std::string::npos);

  EXPECT_EQ(run({"--runs-dir", runs, "apply", id, "0"}).code, 2);
  EXPECT_EQ(run({"--runs-dir", runs, "apply", "no-such-run", "1"}).code, 1);
  auto applied = run({"--runs-dir", runs, "apply", id, "1"});
  EXPECT_EQ(applied.code, 0) << applied.err;
  auto again = run({"--runs-dir", runs, "apply", id, "1"});
  EXPECT_EQ(again.code, 1);
  EXPECT_NE(again.err.find("StaleIndex"), std::string::npos);
}

TEST(Cli, UnknownClassIsUserError) {
  auto r = run({"--root", mover::testing::fixture("bank/src").string(), "--runs-dir",
                mover::testing::scratch_dir("cli-x").string(), "--mock-llm", "recommend", "com.bank.Nope"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("UnknownClass"), std::string::npos);
}

TEST(Cli, PerturbThenEval) {
  auto out = mover::testing::scratch_dir("cli-perturb");
  std::vector<std::string> roots;
  for (const char* p : {"logistics", "library", "clinic"}) {
    roots.push_back("--root");
    roots.push_back(mover::testing::fixture(std::string("perturb/") + p + "/src").string());
  }
  auto args = roots;
  args.push_back("--json");
  for (const char* a : {"perturb", "--n", "9", "--seed", "3", "--out"}) args.push_back(a);
  args.push_back(out.string());
  auto p = run(args);
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(mover::testing::count_occurrences(mover::testing::slurp(out / "gold.jsonl"), "\n"), 9u);

  std::vector<std::string> eval;
  json perturbed = json::parse(p.out);
  for (const auto& r : perturbed["roots"]) {
    eval.push_back("--root");
    eval.push_back(r.get<std::string>());
  }
  for (const char* a : {"--mock-llm", "--runs-dir"}) eval.push_back(a);
  eval.push_back((out / "runs").string());
  for (const char* a : {"eval", "--gold"}) eval.push_back(a);
  eval.push_back((out / "gold.jsonl").string());
  auto e = run(eval);
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("Recall_MC"), std::string::npos);
}
