#include "mover/java_parser.hpp"

#include <algorithm>
#include <utility>

namespace mover::java {

bool Modifiers::has(std::string_view keyword) const {
  return std::find(keywords.begin(), keywords.end(), keyword) != keywords.end();
}

bool Modifiers::has_annotation(std::string_view name) const {
  return std::find(annotations.begin(), annotations.end(), name) != annotations.end();
}

namespace {

bool word_like(const Token& t) {
  return t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword || t.kind == TokenKind::Number;
}

bool is_modifier_keyword(std::string_view w) {
  return w == "public" || w == "protected" || w == "private" || w == "static" || w == "abstract" ||
         w == "final" || w == "native" || w == "synchronized" || w == "transient" || w == "volatile" ||
         w == "strictfp" || w == "default";
}

class Parser {
 public:
  Parser(std::string_view src, CompilationUnit& cu) : src_(src), cu_(cu), toks_(cu.lexed.tokens) {}

  void run() {
    std::size_t i = 0;
    {
      Modifiers ignored;
      std::size_t j = parse_modifiers(i, ignored);
      if (at(j, "package")) {
        std::size_t k = j + 1;
        std::string name;
        k = parse_qualified_name(k, name);
        expect(k, ";");
        cu_.package_name = name;
        cu_.package_span = Span{tok(i).begin, tok(k).end};
        i = k + 1;
      }
    }
    while (at(i, "import")) {
      ImportDecl imp;
      std::size_t k = i + 1;
      if (at(k, "static")) {
        imp.is_static = true;
        ++k;
      }
      std::string name;
      k = parse_qualified_name(k, name);
      if (at(k, ".") && at(k + 1, "*")) {
        imp.is_wildcard = true;
        k += 2;
      }
      expect(k, ";");
      imp.name = name;
      imp.span = Span{tok(i).begin, tok(k).end};
      cu_.imports.push_back(std::move(imp));
      i = k + 1;
    }
    while (i < toks_.size()) {
      if (at(i, ";")) {
        ++i;
        continue;
      }
      TypeDecl t;
      i = parse_type_decl(i, t);
      cu_.types.push_back(std::move(t));
    }
  }

 private:
  const Token& tok(std::size_t i) const {
    if (i >= toks_.size()) {
      throw SyntaxError(src_.size(), "unexpected end of file");
    }
    return toks_[i];
  }

  bool at(std::size_t i, std::string_view s) const { return i < toks_.size() && toks_[i].is(s); }

  bool ident(std::size_t i) const { return i < toks_.size() && toks_[i].is_identifier(); }

  [[noreturn]] void fail(std::size_t i, const std::string& message) const {
    std::size_t offset = i < toks_.size() ? toks_[i].begin : src_.size();
    throw SyntaxError(offset, message);
  }

  void expect(std::size_t i, std::string_view s) const {
    if (!at(i, s)) {
      fail(i, "expected '" + std::string(s) + "'");
    }
  }

  std::size_t parse_qualified_name(std::size_t i, std::string& out) {
    if (!ident(i)) fail(i, "expected identifier");
    out = std::string(tok(i).text);
    ++i;
    while (at(i, ".") && ident(i + 1)) {
      out += ".";
      out += tok(i + 1).text;
      i += 2;
    }
    return i;
  }

  std::size_t skip_annotation(std::size_t i, std::string* name_out) {
    // at '@'
    std::string name;
    std::size_t k = parse_qualified_name(i + 1, name);
    if (at(k, "(")) {
      k = match_bracket(toks_, k) + 1;
    }
    if (name_out) {
      auto dot = name.rfind('.');
      *name_out = dot == std::string::npos ? name : name.substr(dot + 1);
    }
    return k;
  }

  std::size_t parse_modifiers(std::size_t i, Modifiers& mods) {
    while (i < toks_.size()) {
      const Token& t = toks_[i];
      if (t.is("@") && !at(i + 1, "interface")) {
        if (!mods.first_token) mods.first_token = i;
        std::string name;
        i = skip_annotation(i, &name);
        mods.annotations.push_back(name);
        continue;
      }
      if (t.kind == TokenKind::Keyword && is_modifier_keyword(t.text)) {
        if (!mods.first_token) mods.first_token = i;
        mods.keywords.emplace_back(t.text);
        ++i;
        continue;
      }
      if (t.is_identifier() && t.text == "sealed") {
        if (!mods.first_token) mods.first_token = i;
        mods.keywords.emplace_back("sealed");
        ++i;
        continue;
      }
      if (t.is_identifier() && t.text == "non" && at(i + 1, "-") && at(i + 2, "sealed")) {
        if (!mods.first_token) mods.first_token = i;
        mods.keywords.emplace_back("non-sealed");
        i += 3;
        continue;
      }
      break;
    }
    return i;
  }

  std::size_t skip_annotations(std::size_t i) {
    while (at(i, "@") && !at(i + 1, "interface")) {
      i = skip_annotation(i, nullptr);
    }
    return i;
  }

  std::size_t parse_type(std::size_t i, std::string& text) {
    i = skip_annotations(i);
    std::size_t start = i;
    const Token& t = tok(i);
    if (t.kind == TokenKind::Keyword && is_primitive_type(t.text)) {
      ++i;
    } else if (t.is_identifier()) {
      ++i;
      while (true) {
        if (at(i, "<")) {
          std::size_t j = skip_type_arguments(toks_, i);
          if (j == i) fail(i, "malformed type arguments");
          i = j;
        }
        if (at(i, ".") && (ident(i + 1) || at(i + 1, "@"))) {
          i = skip_annotations(i + 1);
          if (!ident(i)) fail(i, "expected identifier");
          ++i;
          continue;
        }
        break;
      }
    } else {
      fail(i, "expected type");
    }
    while (true) {
      std::size_t k = skip_annotations(i);
      if (at(k, "[") && at(k + 1, "]")) {
        i = k + 2;
        continue;
      }
      break;
    }
    text = render_tokens(toks_, start, i);
    return i;
  }

  std::optional<Span> find_doc(std::size_t first_token) const {
    std::size_t prev_end = first_token > 0 ? toks_[first_token - 1].end : 0;
    std::size_t begin = toks_[first_token].begin;
    std::optional<Span> found;
    for (const auto& c : cu_.lexed.comments) {
      if (c.begin >= begin) break;
      if (c.is_doc && c.begin >= prev_end && c.end <= begin) {
        found = Span{c.begin, c.end};
      }
    }
    return found;
  }

  bool is_type_start(std::size_t i) const {
    return at(i, "class") || at(i, "interface") || at(i, "enum") || (at(i, "@") && at(i + 1, "interface")) ||
           (ident(i) && toks_[i].text == "record" && ident(i + 1));
  }

  std::size_t parse_type_list(std::size_t i, std::vector<std::string>& out) {
    while (true) {
      std::string text;
      i = parse_type(i, text);
      out.push_back(text);
      if (at(i, ",")) {
        ++i;
        continue;
      }
      return i;
    }
  }

  std::size_t parse_type_decl(std::size_t start, TypeDecl& t) {
    std::size_t i = parse_modifiers(start, t.modifiers);
    if (at(i, "class")) {
      t.kind = TypeKind::Class;
      ++i;
    } else if (at(i, "interface")) {
      t.kind = TypeKind::Interface;
      ++i;
    } else if (at(i, "enum")) {
      t.kind = TypeKind::Enum;
      ++i;
    } else if (at(i, "@") && at(i + 1, "interface")) {
      t.kind = TypeKind::Annotation;
      i += 2;
    } else if (ident(i) && tok(i).text == "record") {
      t.kind = TypeKind::Record;
      ++i;
    } else {
      fail(i, "expected type declaration");
    }
    if (!ident(i)) fail(i, "expected type name");
    t.name = std::string(tok(i).text);
    ++i;
    if (at(i, "<")) {
      std::size_t j = skip_type_arguments(toks_, i);
      if (j == i) fail(i, "malformed type parameters");
      t.type_params = render_tokens(toks_, i, j);
      i = j;
    }
    if (t.kind == TypeKind::Record) {
      expect(i, "(");
      std::size_t close = match_bracket(toks_, i);
      parse_params(i, close, t.record_components);
      i = close + 1;
    }
    while (!at(i, "{")) {
      if (at(i, "extends")) {
        i = parse_type_list(i + 1, t.extends);
      } else if (at(i, "implements")) {
        i = parse_type_list(i + 1, t.implements);
      } else if (ident(i) && tok(i).text == "permits") {
        std::vector<std::string> ignored;
        i = parse_type_list(i + 1, ignored);
      } else {
        fail(i, "unexpected token in type header");
      }
    }
    std::size_t open = i;
    std::size_t close = parse_members(t, open);
    t.body = Span{tok(open).begin, tok(close).end};
    t.doc = find_doc(start);
    t.decl = Span{t.doc ? t.doc->begin : tok(start).begin, tok(close).end};
    return close + 1;
  }

  std::size_t parse_enum_constants(TypeDecl& t, std::size_t i) {
    while (true) {
      if (at(i, ";")) return i + 1;
      if (at(i, "}")) return i;
      std::size_t start = i;
      i = skip_annotations(i);
      if (!ident(i)) fail(i, "expected enum constant");
      FieldDecl f;
      f.name = std::string(tok(i).text);
      f.type_text = t.name;
      f.is_enum_constant = true;
      f.modifiers.keywords = {"public", "static", "final"};
      ++i;
      if (at(i, "(")) i = match_bracket(toks_, i) + 1;
      if (at(i, "{")) i = match_bracket(toks_, i) + 1;
      f.decl = Span{tok(start).begin, tok(i - 1).end};
      t.fields.push_back(std::move(f));
      if (at(i, ",")) ++i;
    }
  }

  void parse_params(std::size_t open, std::size_t close, std::vector<Param>& out) {
    std::size_t i = open + 1;
    while (i < close) {
      Param p;
      std::size_t start = i;
      while (true) {
        if (at(i, "final")) {
          p.is_final = true;
          ++i;
        } else if (at(i, "@")) {
          i = skip_annotation(i, nullptr);
        } else {
          break;
        }
      }
      std::size_t type_start = i;
      std::string type_text;
      i = parse_type(i, type_text);
      if (at(i, "...")) {
        p.is_varargs = true;
        ++i;
      }
      p.type_text = render_tokens(toks_, type_start, i);
      if (at(i, "this")) {
        // receiver parameter, not a real parameter
        ++i;
        if (at(i, ",")) ++i;
        continue;
      }
      if (!ident(i)) fail(i, "expected parameter name");
      p.name = std::string(tok(i).text);
      ++i;
      while (at(i, "[") && at(i + 1, "]")) {
        p.type_text += "[]";
        i += 2;
      }
      p.span = Span{tok(start).begin, tok(i - 1).end};
      out.push_back(std::move(p));
      if (at(i, ",")) {
        ++i;
      } else if (i != close) {
        fail(i, "expected ',' or ')' in parameter list");
      }
    }
  }

  std::size_t skip_initializer(std::size_t i) {
    while (true) {
      const Token& t = tok(i);
      if (t.is("(") || t.is("[") || t.is("{")) {
        i = match_bracket(toks_, i) + 1;
      } else if (t.is("<") && i > 0 && (toks_[i - 1].is_identifier() || toks_[i - 1].is("."))) {
        std::size_t j = skip_type_arguments(toks_, i);
        i = j == i ? i + 1 : j;
      } else if (t.is(",") || t.is(";")) {
        return i;
      } else if (t.is(")") || t.is("]") || t.is("}")) {
        fail(i, "unbalanced initializer");
      } else {
        ++i;
      }
    }
  }

  std::size_t parse_method(TypeDecl& owner, std::size_t start, Modifiers mods, std::string type_params,
                           std::string return_type, std::size_t name_idx, bool is_ctor) {
    MethodDecl m;
    m.name = std::string(tok(name_idx).text);
    m.name_offset = tok(name_idx).begin;
    m.modifiers = std::move(mods);
    m.type_params = std::move(type_params);
    m.return_type = std::move(return_type);
    m.is_constructor = is_ctor;
    std::size_t i = name_idx + 1;
    if (at(i, "(")) {
      std::size_t close = match_bracket(toks_, i);
      parse_params(i, close, m.params);
      m.params_span = Span{tok(i).begin, tok(close).end};
      i = close + 1;
    } else {
      // compact canonical record constructor
      m.params_span = Span{tok(name_idx).end, tok(name_idx).end};
    }
    while (at(i, "[") && at(i + 1, "]")) {
      m.return_type += "[]";
      i += 2;
    }
    if (at(i, "throws")) {
      std::vector<std::string> ignored;
      i = parse_type_list(i + 1, ignored);
    }
    if (at(i, "default")) {
      i = skip_initializer(i + 1);
    }
    std::size_t end_tok;
    if (at(i, "{")) {
      std::size_t close = match_bracket(toks_, i);
      m.body = Span{tok(i).begin, tok(close).end};
      m.body_tokens = TokenRange{i, close};
      end_tok = close;
    } else if (at(i, ";")) {
      end_tok = i;
    } else {
      fail(i, "expected method body or ';'");
    }
    m.doc = find_doc(start);
    m.decl = Span{m.doc ? m.doc->begin : tok(start).begin, tok(end_tok).end};
    owner.methods.push_back(std::move(m));
    return end_tok + 1;
  }

  std::size_t parse_members(TypeDecl& t, std::size_t open) {
    std::size_t i = open + 1;
    if (t.kind == TypeKind::Enum) {
      i = parse_enum_constants(t, i);
    }
    while (!at(i, "}")) {
      if (i >= toks_.size()) fail(i, "unterminated type body");
      if (at(i, ";")) {
        ++i;
        continue;
      }
      std::size_t start = i;
      Modifiers mods;
      std::size_t j = parse_modifiers(i, mods);
      if (at(j, "{")) {
        std::size_t close = match_bracket(toks_, j);
        t.initializer_blocks.push_back(TokenRange{j, close});
        i = close + 1;
        continue;
      }
      if (is_type_start(j)) {
        TypeDecl nested;
        i = parse_type_decl(start, nested);
        bool container_static_scope = t.kind == TypeKind::Interface || t.kind == TypeKind::Annotation;
        nested.is_inner = nested.kind == TypeKind::Class && !nested.modifiers.has("static") &&
                          !container_static_scope;
        t.nested.push_back(std::move(nested));
        continue;
      }
      std::string type_params;
      if (at(j, "<")) {
        std::size_t k = skip_type_arguments(toks_, j);
        if (k == j) fail(j, "malformed type parameters");
        type_params = render_tokens(toks_, j, k);
        j = k;
      }
      if (ident(j) && tok(j).text == t.name && at(j + 1, "(")) {
        i = parse_method(t, start, std::move(mods), std::move(type_params), "", j, true);
        continue;
      }
      if (t.kind == TypeKind::Record && ident(j) && tok(j).text == t.name && at(j + 1, "{")) {
        i = parse_method(t, start, std::move(mods), std::move(type_params), "", j, true);
        continue;
      }
      std::string type_text;
      std::size_t k = parse_type(j, type_text);
      if (!ident(k)) fail(k, "expected member name");
      if (at(k + 1, "(")) {
        i = parse_method(t, start, std::move(mods), std::move(type_params), type_text, k, false);
        continue;
      }
      // field declarators
      std::vector<FieldDecl> declared;
      while (true) {
        if (!ident(k)) fail(k, "expected field name");
        FieldDecl f;
        f.name = std::string(tok(k).text);
        f.type_text = type_text;
        f.modifiers = mods;
        ++k;
        while (at(k, "[") && at(k + 1, "]")) {
          f.type_text += "[]";
          k += 2;
        }
        if (at(k, "=")) {
          std::size_t init_start = k + 1;
          k = skip_initializer(init_start);
          if (k > init_start) f.initializer = TokenRange{init_start, k - 1};
        }
        declared.push_back(std::move(f));
        if (at(k, ",")) {
          ++k;
          continue;
        }
        expect(k, ";");
        break;
      }
      auto doc = find_doc(start);
      Span decl{doc ? doc->begin : tok(start).begin, tok(k).end};
      for (auto& f : declared) {
        f.decl = decl;
        t.fields.push_back(std::move(f));
      }
      i = k + 1;
    }
    return i;
  }

  std::string_view src_;
  CompilationUnit& cu_;
  const std::vector<Token>& toks_;
};

}  // namespace

std::size_t skip_type_arguments(const std::vector<Token>& tokens, std::size_t open) {
  if (open >= tokens.size() || !tokens[open].is("<")) return open;
  int depth = 0;
  for (std::size_t i = open; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.is("<")) {
      ++depth;
    } else if (t.is(">")) {
      if (--depth == 0) return i + 1;
    } else if (t.is_identifier() || t.is(",") || t.is(".") || t.is("?") || t.is("[") || t.is("]") ||
               t.is("&") || t.is("@") || t.is("extends") || t.is("super") ||
               (t.kind == TokenKind::Keyword && is_primitive_type(t.text))) {
      continue;
    } else {
      return open;
    }
  }
  return open;
}

std::size_t match_bracket(const std::vector<Token>& tokens, std::size_t open) {
  std::string_view o = tokens.at(open).text;
  std::string_view c = o == "(" ? ")" : o == "[" ? "]" : "}";
  int depth = 0;
  for (std::size_t i = open; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::Punct) continue;
    if (tokens[i].text == o) {
      ++depth;
    } else if (tokens[i].text == c) {
      if (--depth == 0) return i;
    }
  }
  throw SyntaxError(tokens[open].begin, "unbalanced '" + std::string(o) + "'");
}

std::string render_tokens(const std::vector<Token>& tokens, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t i = first; i < last && i < tokens.size(); ++i) {
    if (i > first) {
      const Token& prev = tokens[i - 1];
      const Token& cur = tokens[i];
      bool space = (word_like(prev) && word_like(cur)) || prev.is(",") || (prev.is("?") && word_like(cur)) ||
                   cur.is("&") || prev.is("&");
      if (space) out.push_back(' ');
    }
    out += tokens[i].text;
  }
  return out;
}

CompilationUnit parse(std::string_view source) {
  CompilationUnit cu;
  cu.lexed = lex(source);
  for (const auto& e : cu.lexed.errors) {
    cu.errors.push_back(ParseError{e.offset, e.message});
  }
  if (!cu.errors.empty()) return cu;
  try {
    Parser parser(source, cu);
    parser.run();
  } catch (const SyntaxError& e) {
    cu.errors.push_back(ParseError{e.offset, e.what()});
  }
  return cu;
}

}  // namespace mover::java
