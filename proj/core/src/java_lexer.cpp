#include "mover/java_lexer.hpp"

#include <algorithm>
#include <iterator>
#include <cctype>

namespace mover::java {

namespace {

constexpr std::string_view kKeywords[] = {
    "abstract", "assert",     "boolean",   "break",     "byte",      "case",     "catch",
    "char",     "class",      "const",     "continue",  "default",   "do",       "double",
    "else",     "enum",       "extends",   "final",     "finally",   "float",    "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",     "interface",
    "long",     "native",     "new",       "package",   "private",   "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",     "switch",   "synchronized",
    "this",     "throw",      "throws",    "transient", "try",       "void",     "volatile",
    "while",
};

constexpr std::string_view kLiteralWords[] = {"true", "false", "null"};

constexpr std::string_view kMultiCharPunct[] = {
    "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=",
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), word) != std::end(kKeywords) ||
         std::find(std::begin(kLiteralWords), std::end(kLiteralWords), word) != std::end(kLiteralWords);
}

bool is_primitive_type(std::string_view word) {
  return word == "int" || word == "long" || word == "short" || word == "byte" || word == "char" ||
         word == "boolean" || word == "float" || word == "double" || word == "void";
}

LexResult lex(std::string_view src) {
  LexResult out;
  std::size_t i = 0;
  const std::size_t n = src.size();
  auto push = [&](TokenKind kind, std::size_t b, std::size_t e) {
    out.tokens.push_back(Token{kind, b, e, src.substr(b, e - b)});
  };

  while (i < n) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      std::size_t b = i;
      while (i < n && src[i] != '\n') ++i;
      out.comments.push_back(Comment{b, i, false});
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      std::size_t b = i;
      bool doc = i + 2 < n && src[i + 2] == '*' && !(i + 3 < n && src[i + 3] == '/');
      auto close = src.find("*/", i + 2);
      if (close == std::string_view::npos) {
        out.errors.push_back({b, "unterminated block comment"});
        i = n;
        out.comments.push_back(Comment{b, n, doc});
        break;
      }
      i = close + 2;
      out.comments.push_back(Comment{b, i, doc});
      continue;
    }
    if (ident_start(c)) {
      std::size_t b = i;
      while (i < n && ident_part(static_cast<unsigned char>(src[i]))) ++i;
      auto word = src.substr(b, i - b);
      push(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, b, i);
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t b = i;
      while (i < n) {
        char d = src[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '.') {
          if (d == '.' && i + 1 < n && src[i + 1] == '.') break;
          ++i;
        } else if ((d == '+' || d == '-') && i > b &&
                   (src[i - 1] == 'e' || src[i - 1] == 'E' || src[i - 1] == 'p' || src[i - 1] == 'P') &&
                   !(src[b] == '0' && i > b + 1 && (src[b + 1] == 'x' || src[b + 1] == 'X') &&
                     (src[i - 1] == 'e' || src[i - 1] == 'E'))) {
          ++i;
        } else {
          break;
        }
      }
      push(TokenKind::Number, b, i);
      continue;
    }
    if (c == '"') {
      std::size_t b = i;
      if (src.substr(i, 3) == "\"\"\"") {
        auto close = i + 3;
        bool done = false;
        while (close < n) {
          if (src[close] == '\\') {
            close += 2;
            continue;
          }
          if (src.substr(close, 3) == "\"\"\"") {
            i = close + 3;
            done = true;
            break;
          }
          ++close;
        }
        if (!done) {
          out.errors.push_back({b, "unterminated text block"});
          i = n;
        }
        push(TokenKind::String, b, i);
        continue;
      }
      ++i;
      bool done = false;
      while (i < n) {
        if (src[i] == '\\') {
          i += 2;
          continue;
        }
        if (src[i] == '\n') break;
        if (src[i] == '"') {
          ++i;
          done = true;
          break;
        }
        ++i;
      }
      if (!done) {
        out.errors.push_back({b, "unterminated string literal"});
      }
      i = std::min(i, n);
      push(TokenKind::String, b, i);
      continue;
    }
    if (c == '\'') {
      std::size_t b = i;
      ++i;
      bool done = false;
      while (i < n && src[i] != '\n') {
        if (src[i] == '\\') {
          i += 2;
          continue;
        }
        if (src[i] == '\'') {
          ++i;
          done = true;
          break;
        }
        ++i;
      }
      if (!done) {
        out.errors.push_back({b, "unterminated character literal"});
      }
      i = std::min(i, n);
      push(TokenKind::Char, b, i);
      continue;
    }
    // `>` is always a single token so nested generics close cleanly.
    bool matched = false;
    for (auto p : kMultiCharPunct) {
      if (src.substr(i, p.size()) == p) {
        push(TokenKind::Punct, i, i + p.size());
        i += p.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("{}()[];,.@=<>!~?:+-*/&|^%").find(static_cast<char>(c)) != std::string_view::npos) {
      push(TokenKind::Punct, i, i + 1);
      ++i;
      continue;
    }
    out.errors.push_back({i, std::string("unexpected character '") + static_cast<char>(c) + "'"});
    ++i;
  }
  return out;
}

}  // namespace mover::java
