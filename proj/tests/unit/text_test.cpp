#include <gtest/gtest.h>

#include "mover/java_lexer.hpp"
#include "mover/text.hpp"

using namespace mover;

TEST(Text, SplitIdentifierHandlesCaseStylesAndDigits) {
  EXPECT_EQ(text::split_identifier("computeInterestRate"), (std::vector<std::string>{"compute", "interest", "rate"}));
  EXPECT_EQ(text::split_identifier("HTTPServer"), (std::vector<std::string>{"http", "server"}));
  EXPECT_EQ(text::split_identifier("max_value2"), (std::vector<std::string>{"max", "value", "2"}));
}

TEST(Text, EraseTypeDropsGenericsAndQualification) {
  EXPECT_EQ(text::erase_type("java.util.Map<String, List<Integer>>"), "Map");
  EXPECT_EQ(text::erase_type("String..."), "String[]");
  EXPECT_EQ(text::erase_type("int[]"), "int[]");
  EXPECT_EQ(text::base_type_name("java.util.List<String>[]"), "java.util.List");
}

TEST(Text, Sha256KnownVector) {
  EXPECT_EQ(text::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Text, LineHelpers) {
  std::string s = "ab\ncd\r\nef";
  EXPECT_EQ(text::line_start(s, 4), 3u);
  EXPECT_EQ(text::line_end_inclusive(s, 4), 7u);
  EXPECT_EQ(text::detect_newline("a\r\nb\nc"), "\r\n");
  EXPECT_EQ(text::detect_newline("a\nb"), "\n");
}

TEST(Lexer, SeparatesCommentsStringsAndKeywords) {
  std::string src = "/** doc */ class A { String s = \"x // y\"; } // tail";
  auto r = java::lex(src);
  ASSERT_TRUE(r.errors.empty());
  ASSERT_EQ(r.comments.size(), 2u);
  EXPECT_TRUE(r.comments[0].is_doc);
  EXPECT_FALSE(r.comments[1].is_doc);
  ASSERT_GE(r.tokens.size(), 4u);
  EXPECT_EQ(r.tokens[0].kind, java::TokenKind::Keyword);
  bool saw_string = false;
  for (const auto& t : r.tokens) saw_string |= t.kind == java::TokenKind::String && t.text == "\"x // y\"";
  EXPECT_TRUE(saw_string);
}

TEST(Lexer, ReportsUnterminatedComment) {
  auto r = java::lex("class A { /* never closed");
  EXPECT_FALSE(r.errors.empty());
}
