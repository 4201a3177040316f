#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mover::java {

enum class TokenKind {
  Identifier,
  Keyword,
  Number,
  String,
  Char,
  Punct,
};

struct Token {
  TokenKind kind;
  std::size_t begin;
  std::size_t end;
  std::string_view text;

  bool is(std::string_view s) const { return text == s && kind != TokenKind::String; }
  bool is_identifier() const { return kind == TokenKind::Identifier; }
};

struct Comment {
  std::size_t begin;
  std::size_t end;
  bool is_doc;  // `/** ... */`
};

struct LexError {
  std::size_t offset;
  std::string message;
};

/// Token stream over a source buffer. Token text views point into the
/// buffer, so the buffer must outlive the result.
struct LexResult {
  std::vector<Token> tokens;
  std::vector<Comment> comments;
  std::vector<LexError> errors;
};

LexResult lex(std::string_view source);

bool is_keyword(std::string_view word);
bool is_primitive_type(std::string_view word);

}  // namespace mover::java
