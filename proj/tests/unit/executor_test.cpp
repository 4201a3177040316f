#include <gtest/gtest.h>

#include "mover/error.hpp"
#include "mover/executor.hpp"
#include "support.hpp"

using namespace mover;
using mover::testing::copy_fixture;
using mover::testing::fixture;
using mover::testing::slurp;

namespace {

const MethodRef kComputeInterest{"com.bank.model.Account", "computeInterest(InterestPolicy)"};
const MethodRef kRoundCents{"com.shop.core.PriceCalc", "roundCents(double)"};

std::multiset<std::pair<std::string, std::string>> method_multimap(const ProjectIndex& idx) {
  std::multiset<std::pair<std::string, std::string>> out;
  for (const auto& [name, cls] : idx.classes) {
    for (const auto& m : cls.methods) out.emplace(name, m.signature);
  }
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Executor, BankMoveProducesExpectedFiles) {
  auto root = copy_fixture("bank");
  auto idx = build_index({root});
  MovePlan plan = plan_move(idx, kComputeInterest, "com.bank.model.InterestPolicy");
  EXPECT_EQ(plan.route, MoveRoute::Parameter);
  EXPECT_EQ(plan.new_signature, "computeInterest(Account)");
  EXPECT_EQ(plan.call_sites_rewritten, 1u);
  ApplyResult result = apply(plan);
  EXPECT_TRUE(result.reparse_ok);
  EXPECT_EQ(result.files_changed.size(), 3u);
  auto expected = fixture("expected/bank_compute_interest");
  EXPECT_EQ(slurp(root / "com/bank/model/Account.java"), slurp(expected / "Account.java"));
  EXPECT_EQ(slurp(root / "com/bank/model/InterestPolicy.java"), slurp(expected / "InterestPolicy.java"));
  EXPECT_EQ(slurp(root / "com/bank/service/Bank.java"), slurp(expected / "Bank.java"));
  EXPECT_NE(result.index_after.class_at("com.bank.model.InterestPolicy").find_method("computeInterest(Account)"),
            nullptr);
}

TEST(Executor, DiffShowsRemovalInsertionAndCallSite) {
  auto idx = build_index({fixture("bank/src")});
  MovePlan plan = plan_move(idx, kComputeInterest, "com.bank.model.InterestPolicy");
  EXPECT_NE(plan.diff.find("-    public double computeInterest(InterestPolicy policy) {"), std::string::npos);
  EXPECT_NE(plan.diff.find("+    public double computeInterest(Account account) {"), std::string::npos);
  EXPECT_NE(plan.diff.find("+            sb.append(policy.computeInterest(a)).append('\\n');"), std::string::npos);
  EXPECT_NE(plan.diff.find("--- "), std::string::npos);
  EXPECT_NE(plan.diff.find("@@ "), std::string::npos);
}

TEST(Executor, PlanningNeverTouchesDisk) {
  auto root = copy_fixture("bank");
  auto before = mover::testing::snapshot(root);
  auto idx = build_index({root});
  plan_move(idx, kComputeInterest, "com.bank.model.InterestPolicy");
  EXPECT_EQ(mover::testing::snapshot(root), before);
}

TEST(Executor, InfeasibleMoveIsRejected) {
  auto idx = build_index({fixture("bank/src")});
  EXPECT_EQ(code_of([&] { plan_move(idx, kComputeInterest, "com.bank.model.Customer"); }), ErrorCode::Infeasible);
}

TEST(Executor, EditedFileMakesPlanStale) {
  auto root = copy_fixture("bank");
  auto idx = build_index({root});
  MovePlan plan = plan_move(idx, kComputeInterest, "com.bank.model.InterestPolicy");
  auto account = root / "com/bank/model/Account.java";
  text::write_file_atomic(account, slurp(account) + "\n");
  auto before = mover::testing::snapshot(root);
  EXPECT_EQ(code_of([&] { apply(plan); }), ErrorCode::StaleIndex);
  EXPECT_EQ(mover::testing::snapshot(root), before);
  EXPECT_EQ(code_of([&] { plan_move(idx, kComputeInterest, "com.bank.model.InterestPolicy"); }),
            ErrorCode::StaleIndex);
}

TEST(Executor, SecondApplyOfSamePlanIsStale) {
  auto root = copy_fixture("bank");
  MovePlan plan = plan_move(build_index({root}), kComputeInterest, "com.bank.model.InterestPolicy");
  apply(plan);
  auto after = mover::testing::snapshot(root);
  EXPECT_EQ(code_of([&] { apply(plan); }), ErrorCode::StaleIndex);
  EXPECT_EQ(mover::testing::snapshot(root), after);
}

TEST(Executor, MethodCountIsConserved) {
  auto root = copy_fixture("bank");
  auto idx = build_index({root});
  auto result = apply(plan_move(idx, kComputeInterest, "com.bank.model.InterestPolicy"));
  EXPECT_EQ(result.index_after.method_count(), idx.method_count());
}

TEST(Executor, ForcedReparseFailureRestoresEveryByte) {
  auto root = copy_fixture("static_move");
  auto before = mover::testing::snapshot(root);
  MovePlan plan = plan_move(build_index({root}), kRoundCents, "com.shop.util.MoneyUtils");
  ApplyOptions options;
  options.inject_reparse_failure = true;
  EXPECT_EQ(code_of([&] { apply(plan, options); }), ErrorCode::ReparseFailed);
  EXPECT_EQ(mover::testing::snapshot(root), before);
}

TEST(Executor, StaticMoveRewritesQualifiedCallSites) {
  auto root = copy_fixture("static_move");
  auto idx = build_index({root});
  MovePlan plan = plan_move(idx, kRoundCents, "com.shop.util.MoneyUtils");
  EXPECT_TRUE(plan.is_static);
  EXPECT_EQ(plan.call_sites_rewritten, 2u);
  EXPECT_EQ(mover::testing::grep_count(root, "PriceCalc.roundCents"), 2u);
  apply(plan);
  EXPECT_EQ(mover::testing::grep_count(root, "PriceCalc.roundCents"), 0u);
  EXPECT_EQ(mover::testing::grep_count(root, "MoneyUtils.roundCents"), 2u);
  std::string checkout = slurp(root / "com/shop/app/Checkout.java");
  EXPECT_NE(checkout.find("import com.shop.util.MoneyUtils;"), std::string::npos);
}

TEST(Executor, StaticRoundTripRestoresMethodMultimap) {
  auto root = copy_fixture("static_move");
  auto idx0 = build_index({root});
  auto r1 = apply(plan_move(idx0, kRoundCents, "com.shop.util.MoneyUtils"));
  auto r2 = apply(plan_move(r1.index_after, {"com.shop.util.MoneyUtils", "roundCents(double)"}, "com.shop.core.PriceCalc"));
  EXPECT_EQ(method_multimap(r2.index_after), method_multimap(idx0));
  EXPECT_EQ(mover::testing::grep_count(root, "PriceCalc.roundCents"), 2u);
}

TEST(Executor, StaticMoveAddsTypeImportToTarget) {
  auto root = copy_fixture("imports");
  auto idx = build_index({root});
  MovePlan plan = plan_move(idx, {"a.Host", "weigh(D)"}, "b.Target");
  apply(plan);
  EXPECT_EQ(slurp(root / "b/Target.java"), slurp(fixture("expected/imports_weigh/Target.java")));
  EXPECT_EQ(slurp(root / "a/Host.java"), slurp(fixture("expected/imports_weigh/Host.java")));
}

TEST(Executor, NoHostParameterWhenBodyIgnoresHost) {
  auto root = mover::testing::scratch_dir("nohost");
  std::filesystem::create_directories(root / "p");
  text::write_file_atomic(root / "p/A.java",
                          "package p;\n\npublic class A {\n    public int score(B b) {\n        return b.value() + 1;\n"
                          "    }\n\n    public int use(B b) {\n        return score(b);\n    }\n}\n");
  text::write_file_atomic(root / "p/B.java",
                          "package p;\n\npublic class B {\n    public int value() {\n        return 3;\n    }\n}\n");
  auto idx = build_index({root});
  MovePlan plan = plan_move(idx, {"p.A", "score(B)"}, "p.B");
  EXPECT_FALSE(plan.host_param_added);
  EXPECT_EQ(plan.new_signature, "score()");
  apply(plan);
  EXPECT_NE(slurp(root / "p/B.java").find("    public int score() {\n        return value() + 1;\n    }\n"),
            std::string::npos);
  EXPECT_NE(slurp(root / "p/A.java").find("return b.score();"), std::string::npos);
}

TEST(Executor, PlanJsonRoundTrip) {
  auto idx = build_index({fixture("bank/src")});
  MovePlan plan = plan_move(idx, kComputeInterest, "com.bank.model.InterestPolicy");
  MovePlan back = plan_from_json(to_json(plan));
  EXPECT_EQ(to_json(back), to_json(plan));
  EXPECT_EQ(back.route, plan.route);
  EXPECT_EQ(back.edits.size(), plan.edits.size());
}

TEST(Executor, ApplyEditsInDescendingOrder) {
  std::vector<TextEdit> edits{{"f", 6, 11, "there"}, {"f", 0, 5, "Hi"}};
  EXPECT_EQ(apply_edits("hello world", edits), "Hi there");
}
