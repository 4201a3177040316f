#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mover/java_lexer.hpp"

namespace mover::java {

/// Half-open byte range into a source buffer.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(const Span& other) const { return begin <= other.begin && other.end <= end; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Inclusive token index range `[first, last]`.
struct TokenRange {
  std::size_t first = 0;
  std::size_t last = 0;
};

struct Modifiers {
  std::vector<std::string> keywords;
  std::vector<std::string> annotations;  // simple names, without '@'
  std::optional<std::size_t> first_token;

  bool has(std::string_view keyword) const;
  bool has_annotation(std::string_view name) const;
};

struct Param {
  std::string name;
  std::string type_text;  // whitespace-normalized, may include generics / `...`
  Span span;
  bool is_varargs = false;
  bool is_final = false;
};

struct MethodDecl {
  std::string name;
  Modifiers modifiers;
  std::string type_params;
  std::string return_type;  // empty for constructors
  std::vector<Param> params;
  Span decl;                // doc comment (if any) through the closing brace or ';'
  Span params_span;         // '(' ... ')'
  std::size_t name_offset = 0;
  std::optional<Span> body;  // '{' ... '}'
  std::optional<TokenRange> body_tokens;
  std::optional<Span> doc;
  bool is_constructor = false;
};

struct FieldDecl {
  std::string name;
  std::string type_text;
  Modifiers modifiers;
  Span decl;  // whole declaration statement (shared by multi-declarator fields)
  std::optional<TokenRange> initializer;
  bool is_enum_constant = false;
};

enum class TypeKind { Class, Interface, Enum, Record, Annotation };

struct TypeDecl {
  TypeKind kind = TypeKind::Class;
  std::string name;
  Modifiers modifiers;
  std::string type_params;
  std::vector<std::string> extends;
  std::vector<std::string> implements;
  Span decl;  // doc comment (if any) through the closing brace
  Span body;  // '{' ... '}'
  std::optional<Span> doc;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
  std::vector<TypeDecl> nested;
  std::vector<TokenRange> initializer_blocks;
  std::vector<Param> record_components;
  /// Non-static member classes are kept for span bookkeeping but are not
  /// indexed as classes of their own.
  bool is_inner = false;
};

struct ImportDecl {
  std::string name;  // dotted, without `.*`
  bool is_static = false;
  bool is_wildcard = false;
  Span span;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::size_t offset, const std::string& message) : std::runtime_error(message), offset(offset) {}
  std::size_t offset;
};

struct ParseError {
  std::size_t offset;
  std::string message;
};

struct CompilationUnit {
  std::string package_name;
  std::optional<Span> package_span;
  std::vector<ImportDecl> imports;
  std::vector<TypeDecl> types;
  LexResult lexed;
  std::vector<ParseError> errors;

  bool ok() const { return errors.empty(); }
};

/// Parses the declaration structure of a Java compilation unit. Method
/// bodies are kept as token ranges and not parsed into statements.
CompilationUnit parse(std::string_view source);

/// Index just past a generic argument list starting at `open` ('<'), or
/// `open` itself when the tokens there do not form a type-argument list.
std::size_t skip_type_arguments(const std::vector<Token>& tokens, std::size_t open);

/// Index of the token matching the bracket at `open`; throws on imbalance.
std::size_t match_bracket(const std::vector<Token>& tokens, std::size_t open);

/// Joins tokens `[first, last)` with Java-style spacing.
std::string render_tokens(const std::vector<Token>& tokens, std::size_t first, std::size_t last);

}  // namespace mover::java
