#include <gtest/gtest.h>

#include <deque>

#include "mover/error.hpp"
#include "mover/llm.hpp"
#include "support.hpp"

using namespace mover;
using nlohmann::json;
using mover::testing::fixture;

namespace {

/// Replays canned responses in order.
class ScriptedChat : public ChatProvider {
 public:
  explicit ScriptedChat(std::deque<std::string> replies) : replies_(std::move(replies)) {}
  std::string model_id() const override { return "scripted"; }
  double temperature() const override { return 0.0; }
  std::string complete(const ChatRequest& request) override {
    requests.push_back(request);
    if (replies_.empty()) return "{}";
    std::string r = replies_.front();
    replies_.pop_front();
    return r;
  }
  std::vector<ChatRequest> requests;

 private:
  std::deque<std::string> replies_;
};

ChatRequest target_request(std::vector<ScoredOption> options, std::size_t max_items) {
  ChatRequest r;
  r.task = ChatTask::ChooseTarget;
  r.options = std::move(options);
  r.max_items = max_items;
  return r;
}

std::vector<std::string> items(const std::string& response, const char* key, const char* field) {
  std::vector<std::string> out;
  json parsed = json::parse(response);
  for (const auto& i : parsed.at(key)) out.push_back(i.at(field).get<std::string>());
  return out;
}

const ProjectIndex& bank() {
  static ProjectIndex idx = build_index({fixture("bank/src")});
  return idx;
}

Bucket bucket_of(const std::string& method, const std::string& target, SuggestionSource source) {
  const auto& idx = bank();
  return classify_suggestion(idx, {method, target, "", source}, idx.class_at("com.bank.model.Account")).bucket;
}

}  // namespace

TEST(MockChat, EchoKeepsInputOrder) {
  MockChatProvider p(MockBehavior::EchoOrder);
  auto r = p.complete(target_request({{"b.B", 0.1}, {"a.A", 0.9}, {"c.C", 0.5}}, 2));
  EXPECT_EQ(items(r, "targets", "class"), (std::vector<std::string>{"b.B", "a.A"}));
}

TEST(MockChat, OracleSortsByScoreThenName) {
  MockChatProvider p(MockBehavior::SimilarityOracle);
  auto r = p.complete(target_request({{"b.B", 0.5}, {"a.A", 0.5}, {"c.C", 0.9}}, 3));
  EXPECT_EQ(items(r, "targets", "class"), (std::vector<std::string>{"c.C", "a.A", "b.B"}));
  auto j = json::parse(r);
  EXPECT_EQ(j["targets"][0]["reason"], "score 0.9000");
}

TEST(MockChat, FaultInjectionFollowsSeededDraws) {
  FaultSpec spec;
  spec.p_h1 = 0.5;
  spec.seed = 7;
  auto p = MockChatProvider::fault(spec);
  std::vector<ScoredOption> options{{"p.A", 0.9}, {"p.B", 0.5}, {"p.C", 0.1}};

  // Reference: one 53-bit draw per output slot from an independent engine.
  std::mt19937_64 ref(7);
  std::vector<std::string> expected;
  std::size_t next = 0, ghosts = 0;
  for (int call = 0; call < 4; ++call) {
    for (int slot = 0; slot < 3; ++slot) {
      double u = static_cast<double>(ref() >> 11) / 9007199254740992.0;
      if (u < 0.5) {
        expected.push_back("GhostHelper" + std::to_string(++ghosts));
      } else {
        expected.push_back(options[next++].name);
      }
    }
    next = 0;
  }
  std::vector<std::string> got;
  for (int call = 0; call < 4; ++call) {
    for (auto& s : items(p->complete(target_request(options, 3)), "targets", "class")) got.push_back(s);
  }
  EXPECT_EQ(got, expected);
  auto l = p->ledger();
  EXPECT_EQ(l.slots, 12u);
  EXPECT_EQ(l.h1, ghosts);
  EXPECT_EQ(l.faithful, 12u - ghosts);
  EXPECT_GT(ghosts, 0u);
  EXPECT_LT(ghosts, 12u);
}

TEST(MockChat, FaultLimitCapsSlots) {
  FaultSpec spec;
  spec.limit = 4;
  auto p = MockChatProvider::fault(spec);
  std::vector<ScoredOption> options{{"p.A", 0.9}, {"p.B", 0.5}, {"p.C", 0.1}};
  EXPECT_EQ(items(p->complete(target_request(options, 3)), "targets", "class").size(), 3u);
  EXPECT_EQ(items(p->complete(target_request(options, 3)), "targets", "class").size(), 1u);
  EXPECT_TRUE(items(p->complete(target_request(options, 3)), "targets", "class").empty());
  EXPECT_EQ(p->ledger().slots, 4u);
}

TEST(MockChat, UnitDrawUsesTop53Bits) {
  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    double u = MockChatProvider::unit_draw(a);
    EXPECT_EQ(u, std::ldexp(static_cast<double>(b() >> 11), -53));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(ExtractJson, TakesOutermostBraces) {
  EXPECT_EQ(extract_json_object("Sure! {\"a\": {\"b\": 1}} hope that helps")["a"]["b"], 1);
  EXPECT_THROW(extract_json_object("no json here"), Error);
  EXPECT_THROW(extract_json_object("{ broken"), Error);
}

TEST(Classify, UnknownTargetIsH1) {
  EXPECT_EQ(bucket_of("computeInterest", "PolicyUtils", SuggestionSource::TargetSelection), Bucket::H1);
  EXPECT_EQ(bucket_of("computeInterest", "com.bank.model.Nope", SuggestionSource::TargetSelection), Bucket::H1);
}

TEST(Classify, AccessorMovedAloneIsH3) {
  EXPECT_EQ(bucket_of("getBalance", "com.bank.model.InterestPolicy", SuggestionSource::TargetSelection), Bucket::H3);
  EXPECT_EQ(bucket_of("getBalance()", "", SuggestionSource::MethodRanking), Bucket::H3);
  EXPECT_EQ(bucket_of("teleport()", "", SuggestionSource::MethodRanking), Bucket::H3);
}

TEST(Classify, InfeasibleMoveIsH2) {
  EXPECT_EQ(bucket_of("computeInterest", "com.bank.model.Customer", SuggestionSource::TargetSelection), Bucket::H2);
  EXPECT_EQ(bucket_of("computeInterest", "Transaction", SuggestionSource::TargetSelection), Bucket::H2);
}

TEST(Classify, FeasibleMoveIsValidUnderAnySpelling) {
  for (const char* t : {"com.bank.model.InterestPolicy", "InterestPolicy", " InterestPolicy.java"}) {
    EXPECT_EQ(bucket_of("computeInterest(InterestPolicy)", t, SuggestionSource::TargetSelection), Bucket::Valid) << t;
  }
  EXPECT_EQ(bucket_of("deposit", "", SuggestionSource::MethodRanking), Bucket::Valid);
}

TEST(Report, CountsAndMerge) {
  HallucinationReport a, b;
  a.add({"m", "T", "", SuggestionSource::TargetSelection}, Classification{Bucket::H1, {}, {}, {}});
  b.add({"m", "", "", SuggestionSource::MethodRanking}, Classification{Bucket::Valid, {}, {}, {}});
  b.add({"n", "", "", SuggestionSource::MethodRanking}, Classification{Bucket::H3, {}, {}, {}});
  a.merge(b);
  EXPECT_EQ(a.count(Bucket::H1), 1u);
  EXPECT_EQ(a.count(Bucket::H3), 1u);
  EXPECT_EQ(a.count(Bucket::Valid), 1u);
  EXPECT_EQ(a.count(Bucket::H2), 0u);
  EXPECT_EQ(a.items.size(), 3u);
  auto j = to_json(a);
  EXPECT_EQ(j["counts"]["H1"], 1);
}

TEST(RankMethods, RetriesOnceAfterMalformedReply) {
  const auto& idx = bank();
  const auto& acc = idx.class_at("com.bank.model.Account");
  std::vector<MoveCandidate> cands{{{acc.qualified_name, "computeInterest(InterestPolicy)"}, 0.2},
                                   {{acc.qualified_name, "deposit(double)"}, 0.4}};
  ScriptedChat chat({"I think computeInterest.", R"({"ranking":[{"method":"computeInterest","reason":"r"}]})"});
  ExchangeLog log;
  auto r = rank_methods(chat, idx, acc, cands, 3, {}, &log);
  ASSERT_EQ(r.ranked.size(), 1u);
  EXPECT_EQ(r.ranked[0].method.signature, "computeInterest(InterestPolicy)");
  EXPECT_EQ(log.size(), 2u);
  EXPECT_EQ(chat.requests.size(), 2u);
  EXPECT_GT(chat.requests[1].messages.size(), chat.requests[0].messages.size());
  EXPECT_FALSE(log[0].error.empty());
}

TEST(RankMethods, SecondMalformedReplyRaises) {
  const auto& idx = bank();
  const auto& acc = idx.class_at("com.bank.model.Account");
  std::vector<MoveCandidate> cands{{{acc.qualified_name, "deposit(double)"}, 0.4}};
  ScriptedChat chat({"nope", "{\"ranking\": 5}"});
  try {
    rank_methods(chat, idx, acc, cands, 3, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedResponse);
  }
}

TEST(RankMethods, NamesOutsidePoolStayInRawOnly) {
  const auto& idx = bank();
  const auto& acc = idx.class_at("com.bank.model.Account");
  std::vector<MoveCandidate> cands{{{acc.qualified_name, "deposit(double)"}, 0.4}};
  ScriptedChat chat({R"({"ranking":[{"method":"getBalance","reason":"x"},{"method":"deposit","reason":"y"}]})"});
  auto r = rank_methods(chat, idx, acc, cands, 3, {});
  ASSERT_EQ(r.ranked.size(), 1u);
  EXPECT_EQ(r.ranked[0].method.signature, "deposit(double)");
  EXPECT_EQ(r.raw.size(), 2u);
}

TEST(Critique, DropsWithdrawnMethods) {
  const auto& idx = bank();
  const auto& acc = idx.class_at("com.bank.model.Account");
  std::vector<RankedMethod> ranked{{{acc.qualified_name, "deposit(double)"}, "a"},
                                   {{acc.qualified_name, "computeInterest(InterestPolicy)"}, "b"}};
  ScriptedChat chat({R"({"verdicts":[{"method":"deposit","keep":false},{"method":"computeInterest","keep":true}]})"});
  auto kept = critique(chat, idx, acc, ranked);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].method.signature, "computeInterest(InterestPolicy)");
}

TEST(HttpChat, UnreachableEndpointIsProviderUnavailable) {
  HttpChatConfig c;
  c.url = "http://127.0.0.1:1/v1/chat/completions";
  c.model = "m";
  c.timeout = std::chrono::seconds(2);
  HttpChatProvider p(c);
  try {
    p.complete(target_request({}, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ProviderUnavailable);
  }
}
