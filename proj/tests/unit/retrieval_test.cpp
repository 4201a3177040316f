#include <gtest/gtest.h>

#include "mover/target_retrieval.hpp"
#include "support.hpp"

using namespace mover;
using mover::testing::fixture;

namespace {

std::vector<std::string> names(const std::vector<TargetCandidate>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.target);
  return out;
}

/// A summary whose rendering costs exactly `tokens`.
ClassSummary sized_summary(const std::string& name, std::size_t tokens) {
  ClassSummary s;
  s.qualified_name = name;
  s.method_signatures.push_back("");
  while (s.token_estimate() < tokens) s.method_signatures.back() += 'x';
  EXPECT_EQ(s.token_estimate(), tokens);
  return s;
}

}  // namespace

using Path = std::vector<std::string>;

TEST(Proximity, SharedLeadingSegmentsOverHostDepth) {
  EXPECT_DOUBLE_EQ(package_proximity(Path{"org", "example", "core"}, Path{"org", "example", "utils"}), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(package_proximity(Path{"org", "example", "core"}, Path{"org", "example", "core"}), 1.0);
  EXPECT_DOUBLE_EQ(package_proximity(Path{"com", "example"}, Path{"org", "example"}), 0.0);
  EXPECT_DOUBLE_EQ(package_proximity(Path{"a", "b", "c", "d"}, Path{"a", "b"}), 1.0);
}

TEST(Proximity, DefaultPackageHost) {
  EXPECT_DOUBLE_EQ(package_proximity(Path{}, Path{}), 1.0);
  EXPECT_DOUBLE_EQ(package_proximity(Path{"a"}, Path{}), 0.0);
}

TEST(Utility, NameContainsUtil) {
  EXPECT_EQ(is_utility_name("StringUtils"), 1);
  EXPECT_EQ(is_utility_name("UtilityBelt"), 1);
  EXPECT_EQ(is_utility_name("Helper"), 0);
  EXPECT_EQ(is_utility_name("UTIL"), 1);
}

TEST(StaticTargets, RankedByScoreThenFiltered) {
  auto idx = build_index({fixture("static_rank/src")});
  const auto& host = idx.class_at("com.acme.core.Parser");
  EXPECT_DOUBLE_EQ(ranking_score(idx.class_at("com.acme.core.StringUtil"), host), 3.0);
  EXPECT_DOUBLE_EQ(ranking_score(idx.class_at("com.acme.text.Quoting"), host), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(ranking_score(idx.class_at("org.other.Formatter"), host), 0.0);
  MethodRef m{"com.acme.core.Parser", "stripQuotes(String)"};
  auto all = enumerate_static_targets(idx, m);
  EXPECT_EQ(names(all), (std::vector<std::string>{"com.acme.core.StringUtil", "com.acme.text.Quoting", "org.other.Formatter"}));
  EXPECT_DOUBLE_EQ(all[0].heuristic_score, 3.0);
  auto top2 = enumerate_static_targets(idx, m, 2);
  EXPECT_EQ(names(top2), (std::vector<std::string>{"com.acme.core.StringUtil", "com.acme.text.Quoting"}));
}

TEST(InstanceTargets, FieldAndParameterTypesThatAreFeasible) {
  auto bank = build_index({fixture("bank/src")});
  EXPECT_EQ(names(enumerate_instance_targets(bank, {"com.bank.model.Account", "computeInterest(InterestPolicy)"})),
            (std::vector<std::string>{"com.bank.model.InterestPolicy"}));
  auto esql = build_index({fixture("esql/src")});
  EXPECT_EQ(names(enumerate_instance_targets(esql, {"org.example.esql.session.EsqlSession", "resolvePolicy(String)"})),
            (std::vector<std::string>{"org.example.esql.enrich.EnrichPolicyResolver"}));
}

TEST(Tokens, CeilOfBytesOverFour) {
  EXPECT_EQ(estimate_tokens(""), 0u);
  EXPECT_EQ(estimate_tokens("abcd"), 1u);
  EXPECT_EQ(estimate_tokens("abcde"), 2u);
}

TEST(Summary, HoldsFieldsDocAndSignatures) {
  auto idx = build_index({fixture("esql/src")});
  auto s = summarize_class(idx, idx.class_at("org.example.esql.enrich.EnrichPolicyResolver"));
  EXPECT_EQ(s.qualified_name, "org.example.esql.enrich.EnrichPolicyResolver");
  ASSERT_EQ(s.field_declarations.size(), 1u);
  EXPECT_NE(s.field_declarations[0].find("Map<String, EnrichPolicy> policies"), std::string::npos);
  ASSERT_TRUE(s.docstring.has_value());
  EXPECT_NE(s.docstring->find("Looks up enrich policies"), std::string::npos);
  ASSERT_EQ(s.method_signatures.size(), 3u);
  EXPECT_NE(s.method_signatures[1].find("EnrichPolicy lookupPolicy(String policyName)"), std::string::npos);
  std::string r = s.render();
  EXPECT_EQ(r.find(s.qualified_name), 0u);
  EXPECT_EQ(r.find("{"), std::string::npos);  // no bodies
}

TEST(Packing, ElevenOfSixHundredFitSevenThousand) {
  std::vector<ClassSummary> in;
  for (int i = 0; i < 20; ++i) in.push_back(sized_summary("p.C" + std::to_string(100 + i), 600));
  auto r = pack_summaries(in, 7000);
  EXPECT_EQ(r.summaries.size(), 11u);
  EXPECT_EQ(r.total_tokens, 6600u);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Packing, StopsAtFirstSummaryThatDoesNotFit) {
  std::vector<ClassSummary> in{sized_summary("p.A", 600), sized_summary("p.B", 6500), sized_summary("p.C", 100)};
  auto r = pack_summaries(in, 7000);
  ASSERT_EQ(r.summaries.size(), 1u);
  EXPECT_EQ(r.summaries[0].qualified_name, "p.A");
}

TEST(Packing, OversizedFirstSummaryIsTruncatedWithWarning) {
  ClassSummary big;
  big.qualified_name = "p.Big";
  for (int i = 0; i < 400; ++i) big.method_signatures.push_back("public void operation" + std::to_string(i) + "(int a, int b, int c, int d, int e, int f, int g)");
  ASSERT_GT(big.token_estimate(), 7000u);
  auto r = pack_summaries({big, sized_summary("p.Small", 10)}, 7000);
  ASSERT_EQ(r.summaries.size(), 1u);
  EXPECT_EQ(r.warnings.size(), 1u);
  EXPECT_LE(r.summaries[0].token_estimate(), 7000u);
  EXPECT_LT(r.summaries[0].method_signatures.size(), big.method_signatures.size());
}

TEST(Packing, EmptyInput) {
  auto r = pack_summaries({}, 7000);
  EXPECT_TRUE(r.summaries.empty());
  EXPECT_EQ(r.total_tokens, 0u);
}

TEST(Rerank, ScoresAndPacksInOrder) {
  auto idx = build_index({fixture("esql/src")});
  LocalEmbedder e;
  e.fit(idx);
  MethodRef m{"org.example.esql.session.EsqlSession", "parse(String)"};
  std::vector<TargetCandidate> cands;
  for (const char* t : {"org.example.esql.plan.Verifier", "org.example.esql.enrich.EnrichPolicyResolver",
                        "org.example.esql.plan.PlanOptimizer"}) {
    TargetCandidate c;
    c.target = t;
    cands.push_back(c);
  }
  auto r = semantic_rerank_and_pack(idx, e, m, cands, 7000);
  ASSERT_EQ(r.ranked.size(), 3u);
  for (std::size_t i = 1; i < r.ranked.size(); ++i) EXPECT_GE(r.ranked[i - 1].semantic_score, r.ranked[i].semantic_score);
  EXPECT_EQ(r.packed.size(), 3u);
  EXPECT_EQ(r.pack.summaries.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.pack.summaries[i].qualified_name, r.ranked[i].target);
  auto tight = semantic_rerank_and_pack(idx, e, m, cands, r.pack.summaries[0].token_estimate());
  EXPECT_EQ(tight.packed.size(), 1u);
  EXPECT_EQ(tight.ranked.size(), 3u);
}
