#include "mover/body_analysis.hpp"

#include <algorithm>
#include <set>

#include "mover/text.hpp"

namespace mover {

using java::Token;
using java::TokenKind;
using java::TokenRange;

namespace {

std::vector<const ClassInfo*> lookup_order(const ProjectIndex& index, const ClassInfo& context) {
  std::vector<const ClassInfo*> order;
  const ClassInfo* cur = &context;
  while (cur != nullptr) {
    order.push_back(cur);
    for (const ClassInfo* s : super_type_closure(index, *cur)) {
      order.push_back(s);
    }
    cur = cur->enclosing.empty() ? nullptr : index.find_class(cur->enclosing);
  }
  return order;
}

bool is_assignment_after(const std::vector<Token>& tokens, std::size_t i, std::size_t last) {
  if (i + 1 > last) return false;
  const Token& next = tokens[i + 1];
  if (next.is("=") || next.is("+=") || next.is("++") || next.is("--")) return true;
  // compound operators lex as two tokens: `-` `=`, `*` `=`, `<` `<` `=` ...
  std::size_t k = i + 1;
  while (k <= last && tokens[k].kind == TokenKind::Punct && tokens[k].text.size() == 1 &&
         std::string_view("-*/%&|^<>").find(tokens[k].text[0]) != std::string_view::npos &&
         tokens[k].end == (k + 1 <= last ? tokens[k + 1].begin : tokens[k].end)) {
    ++k;
  }
  if (k > i + 1 && k <= last && tokens[k].is("=") && tokens[k - 1].end == tokens[k].begin) return true;
  if (i >= 1 && (tokens[i - 1].is("++") || tokens[i - 1].is("--"))) return true;
  return false;
}

std::size_t match_backward(const std::vector<Token>& tokens, std::size_t close, std::size_t floor) {
  std::string_view c = tokens[close].text;
  std::string_view o = c == ")" ? "(" : c == "]" ? "[" : c == "}" ? "{" : "<";
  int depth = 0;
  for (std::size_t i = close + 1; i-- > floor;) {
    if (tokens[i].kind != TokenKind::Punct) continue;
    if (tokens[i].text == c) ++depth;
    if (tokens[i].text == o && --depth == 0) return i;
  }
  return floor;
}

/// Type text of a declaration whose name token is at `name_idx`.
std::optional<std::string> declared_type_before(const std::vector<Token>& tokens, std::size_t name_idx,
                                                std::size_t floor) {
  if (name_idx == 0 || name_idx - 1 < floor) return std::nullopt;
  std::size_t end = name_idx;  // exclusive
  std::size_t k = name_idx - 1;
  while (k > floor && tokens[k].is("]") && tokens[k - 1].is("[")) {
    if (k < 2) return std::nullopt;
    k -= 2;
  }
  if (tokens[k].is(">")) {
    // walk back over generic arguments
    int depth = 0;
    std::size_t j = k + 1;
    bool found = false;
    while (j-- > floor) {
      if (tokens[j].is(">")) ++depth;
      if (tokens[j].is("<") && --depth == 0) {
        found = true;
        break;
      }
      if (!(tokens[j].is_identifier() || tokens[j].is(",") || tokens[j].is(".") || tokens[j].is("?") ||
            tokens[j].is("<") || tokens[j].is(">") || tokens[j].is("[") || tokens[j].is("]") ||
            tokens[j].is("extends") || tokens[j].is("super") ||
            (tokens[j].kind == TokenKind::Keyword && java::is_primitive_type(tokens[j].text)))) {
        return std::nullopt;
      }
    }
    if (!found || j == floor) return std::nullopt;
    k = j - 1;
  }
  const Token& t = tokens[k];
  bool typeish = (t.is_identifier() && t.text != "yield") ||
                 (t.kind == TokenKind::Keyword && java::is_primitive_type(t.text) && t.text != "void");
  if (!typeish) return std::nullopt;
  std::size_t start = k;
  while (start >= floor + 2 && tokens[start - 1].is(".") && tokens[start - 2].is_identifier()) {
    start -= 2;
  }
  if (start > floor && (tokens[start - 1].is(".") || tokens[start - 1].is("new") || tokens[start - 1].is("@"))) {
    return std::nullopt;
  }
  return java::render_tokens(tokens, start, end);
}

}  // namespace

std::optional<std::pair<const ClassInfo*, const FieldInfo*>> lookup_field(const ProjectIndex& index,
                                                                          const ClassInfo& context,
                                                                          std::string_view name) {
  for (const ClassInfo* c : lookup_order(index, context)) {
    if (const FieldInfo* f = c->find_field(name)) {
      return std::make_pair(c, f);
    }
  }
  return std::nullopt;
}

std::optional<std::pair<const ClassInfo*, const MethodInfo*>> lookup_method(const ProjectIndex& index,
                                                                            const ClassInfo& context,
                                                                            std::string_view name, int arg_count) {
  std::optional<std::pair<const ClassInfo*, const MethodInfo*>> by_name;
  for (const ClassInfo* c : lookup_order(index, context)) {
    for (const MethodInfo& m : c->methods) {
      if (m.is_constructor || m.name != name) continue;
      bool varargs = !m.parameters.empty() && text::ends_with(m.parameters.back().type_text, "...");
      int n = static_cast<int>(m.parameters.size());
      if (arg_count < 0 || n == arg_count || (varargs && arg_count >= n - 1)) {
        return std::make_pair(c, &m);
      }
      if (!by_name) by_name = std::make_pair(c, &m);
    }
  }
  return by_name;
}

std::size_t receiver_start(const std::vector<Token>& tokens, std::size_t last, std::size_t floor) {
  std::size_t k = last;
  while (true) {
    const Token& t = tokens[k];
    if (t.is(")") || t.is("]")) {
      std::size_t open = match_backward(tokens, k, floor);
      k = open;
      if (t.is(")") && k > floor && tokens[k - 1].is_identifier()) {
        --k;  // call: name(...)
        if (k > floor && tokens[k - 1].is("new")) {
          return k - 1;
        }
        if (k >= floor + 1 && tokens[k - 1].is(">")) {
          // explicit generic call `this.<T>foo()` or `new Foo<>()`
          std::size_t lt = match_backward(tokens, k - 1, floor);
          if (lt > floor && tokens[lt - 1].is(".")) {
            k = lt;
          } else if (lt > floor && tokens[lt - 1].is_identifier()) {
            k = lt - 1;
            if (k > floor && tokens[k - 1].is("new")) return k - 1;
          }
        }
      } else if (t.is("]") && k > floor) {
        // array access: a[i]
        if (tokens[k - 1].is_identifier() || tokens[k - 1].is(")") || tokens[k - 1].is("]")) {
          k = k - 1;
          continue;
        }
      }
    } else if (!(t.is_identifier() || t.is("this") || t.is("super") || t.kind == TokenKind::String ||
                 t.kind == TokenKind::Number || t.kind == TokenKind::Char)) {
      return last + 1;
    }
    if (k >= floor + 2 && tokens[k - 1].is(".")) {
      k -= 2;
      continue;
    }
    return k;
  }
}

int count_arguments(const std::vector<Token>& tokens, std::size_t open, std::size_t close) {
  return static_cast<int>(split_arguments(tokens, open, close).size());
}

std::vector<TokenRange> split_arguments(const std::vector<Token>& tokens, std::size_t open, std::size_t close) {
  std::vector<TokenRange> out;
  if (close == open + 1) return out;
  std::size_t start = open + 1;
  std::size_t i = open + 1;
  while (i < close) {
    const Token& t = tokens[i];
    if (t.is("(") || t.is("[") || t.is("{")) {
      i = java::match_bracket(tokens, i) + 1;
      continue;
    }
    if (t.is("<") && i > 0 && tokens[i - 1].is_identifier()) {
      std::size_t j = java::skip_type_arguments(tokens, i);
      if (j != i && j <= close) {
        i = j;
        continue;
      }
    }
    if (t.is(",")) {
      out.push_back(TokenRange{start, i - 1});
      start = i + 1;
    }
    ++i;
  }
  out.push_back(TokenRange{start, close - 1});
  return out;
}

namespace {

class Analyzer {
 public:
  Analyzer(const ProjectIndex& index, const ClassInfo& context, const std::vector<Token>& tokens, TokenRange range)
      : index_(index), ctx_(context), toks_(tokens), range_(range) {}

  BodyAnalysis run(const std::vector<Parameter>& params) {
    for (const Parameter& p : params) {
      out_.locals[p.name] = p.type_text;
    }
    collect_locals();
    scan();
    return std::move(out_);
  }

 private:
  bool at(std::size_t i, std::string_view s) const { return i >= range_.first && i <= range_.last && toks_[i].is(s); }

  void declare(std::size_t i, std::string type) {
    out_.locals[std::string(toks_[i].text)] = std::move(type);
    declarations_.insert(i);
  }

  void collect_locals() {
    for (std::size_t i = range_.first; i <= range_.last; ++i) {
      const Token& t = toks_[i];
      if (!t.is_identifier()) continue;
      if (i + 1 <= range_.last && toks_[i + 1].is("->") && !(i > range_.first && toks_[i - 1].is("."))) {
        declare(i, "");
        continue;
      }
      if (i + 1 > range_.last) continue;
      const Token& next = toks_[i + 1];
      bool decl_follow = next.is("=") || next.is(";") || next.is(",") || next.is(":") || next.is(")") ||
                         next.is("&&") || next.is("||") || next.is("?") || (next.is("[") && at(i + 2, "]"));
      if (!decl_follow) continue;
      if (next.is("=") && i + 2 <= range_.last && toks_[i + 2].is("=")) continue;
      auto type = declared_type_before(toks_, i, range_.first);
      if (!type) continue;
      if (*type == "var") {
        type = infer_var_type(i);
      }
      declare(i, *type);
      if (next.is("=") || next.is(",")) {
        declare_following_declarators(i + 1, *type);
      }
    }
    // untyped lambda parameter lists: (a, b) ->
    for (std::size_t i = range_.first; i <= range_.last; ++i) {
      if (!toks_[i].is("->") || i == 0 || !toks_[i - 1].is(")")) continue;
      std::size_t open = match_backward(toks_, i - 1, range_.first);
      bool simple = true;
      for (std::size_t k = open + 1; k < i - 1; ++k) {
        if (!(toks_[k].is_identifier() || toks_[k].is(","))) simple = false;
      }
      if (!simple) continue;
      for (std::size_t k = open + 1; k < i - 1; ++k) {
        if (toks_[k].is_identifier()) declare(k, "");
      }
    }
  }

  std::string infer_var_type(std::size_t name_idx) {
    std::size_t k = name_idx + 1;
    if (at(k, "=") && at(k + 1, "new") && k + 2 <= range_.last && toks_[k + 2].is_identifier()) {
      std::size_t s = k + 2;
      std::size_t e = s + 1;
      while (at(e, ".") && e + 1 <= range_.last && toks_[e + 1].is_identifier()) e += 2;
      return java::render_tokens(toks_, s, e);
    }
    return "";
  }

  void declare_following_declarators(std::size_t i, const std::string& type) {
    // i is at '=' or ',' after a declarator; find `, name` pairs up to ';'
    while (i <= range_.last) {
      const Token& t = toks_[i];
      if (t.is("(") || t.is("[") || t.is("{")) {
        i = java::match_bracket(toks_, i) + 1;
        continue;
      }
      if (t.is(";") || t.is(")") || t.is("}") || t.is(":")) return;
      if (t.is(",") && i + 2 <= range_.last && toks_[i + 1].is_identifier() &&
          (toks_[i + 2].is("=") || toks_[i + 2].is(",") || toks_[i + 2].is(";"))) {
        declare(i + 1, type);
        i += 2;
        continue;
      }
      if (t.is("<") && i > 0 && toks_[i - 1].is_identifier()) {
        std::size_t j = java::skip_type_arguments(toks_, i);
        if (j != i) {
          i = j;
          continue;
        }
      }
      ++i;
    }
  }

  bool is_local(std::string_view name) const { return out_.locals.count(std::string(name)) > 0; }

  const ClassInfo* class_of_type_text(const std::string& type_text) const {
    if (type_text.empty() || type_text.find('[') != std::string::npos || type_text.find("...") != std::string::npos) {
      return nullptr;
    }
    auto resolved = resolve_type(index_, ctx_, text::base_type_name(type_text));
    return resolved ? index_.find_class(*resolved) : nullptr;
  }

  const ClassInfo* class_of_field(const FieldInfo& f) const {
    if (f.type_text.find('[') != std::string::npos) return nullptr;
    return index_.find_class(f.declared_type);
  }

  struct Receiver {
    const ClassInfo* type = nullptr;
    ReceiverKind kind = ReceiverKind::Expression;
  };

  Receiver resolve_receiver(std::size_t first, std::size_t last) const {
    Receiver r;
    // only identifier chains (optionally rooted at this/super) are typed
    for (std::size_t k = first; k <= last; ++k) {
      bool expect_name = (k - first) % 2 == 0;
      if (expect_name ? !(toks_[k].is_identifier() || (k == first && (toks_[k].is("this") || toks_[k].is("super"))))
                      : !toks_[k].is(".")) {
        return r;
      }
    }
    const Token& head = toks_[first];
    const ClassInfo* cur = nullptr;
    ReceiverKind kind = ReceiverKind::Expression;
    std::size_t k = first;
    if (head.is("this")) {
      cur = &ctx_;
      kind = ReceiverKind::This;
    } else if (head.is("super")) {
      auto supers = super_type_closure(index_, ctx_);
      for (const ClassInfo* s : supers) {
        if (!s->is_interface) {
          cur = s;
          break;
        }
      }
      kind = ReceiverKind::Super;
    } else if (is_local(head.text)) {
      cur = class_of_type_text(out_.locals.at(std::string(head.text)));
      kind = ReceiverKind::Variable;
    } else if (auto field = lookup_field(index_, ctx_, head.text)) {
      cur = class_of_field(*field->second);
      kind = ReceiverKind::Variable;
    } else {
      // longest dotted prefix naming a class
      std::string dotted;
      const ClassInfo* best = nullptr;
      std::size_t best_end = first;
      for (std::size_t j = first; j <= last; j += 2) {
        if (!dotted.empty()) dotted += ".";
        dotted += toks_[j].text;
        if (auto q = resolve_type(index_, ctx_, dotted)) {
          best = index_.find_class(*q);
          best_end = j;
        }
      }
      if (best == nullptr) {
        r.kind = ReceiverKind::Expression;
        return r;
      }
      cur = best;
      kind = ReceiverKind::Type;
      k = best_end;
    }
    for (k += 2; k <= last && cur != nullptr; k += 2) {
      auto field = lookup_field(index_, *cur, toks_[k].text);
      cur = field ? class_of_field(*field->second) : nullptr;
      kind = ReceiverKind::Expression;
    }
    r.type = cur;
    r.kind = kind;
    return r;
  }

  void record_member(std::size_t i, bool via_method_reference) {
    const Token& t = toks_[i];
    MemberRef ref;
    ref.name = std::string(t.text);
    ref.offset = t.begin;
    ref.is_method_reference = via_method_reference;
    bool is_call = !via_method_reference && at(i + 1, "(");
    ref.kind = (is_call || via_method_reference) ? MemberKind::Method : MemberKind::Field;
    if (is_call) {
      std::size_t close = java::match_bracket(toks_, i + 1);
      ref.args_span = Span{toks_[i + 1].begin, toks_[close].end};
      ref.arg_count = count_arguments(toks_, i + 1, close);
    } else if (!via_method_reference) {
      ref.is_write = is_assignment_after(toks_, i, range_.last);
    }
    std::size_t last = i - 2;
    std::size_t first = receiver_start(toks_, last, range_.first);
    if (first > last) return;
    ref.receiver_span = Span{toks_[first].begin, toks_[last].end};
    ref.receiver_text = java::render_tokens(toks_, first, last + 1);
    Receiver recv = resolve_receiver(first, last);
    ref.receiver = recv.kind;
    if (recv.type != nullptr) {
      if (ref.kind == MemberKind::Method) {
        auto m = lookup_method(index_, *recv.type, ref.name, ref.arg_count);
        ref.owner = m ? m->first->qualified_name : "";
      } else {
        auto f = lookup_field(index_, *recv.type, ref.name);
        ref.owner = f ? f->first->qualified_name : "";
      }
    }
    out_.references.push_back(std::move(ref));
  }

  void record_implicit(std::size_t i) {
    const Token& t = toks_[i];
    bool is_call = at(i + 1, "(");
    MemberRef ref;
    ref.name = std::string(t.text);
    ref.offset = t.begin;
    ref.receiver = ReceiverKind::Implicit;
    if (is_call) {
      std::size_t close = java::match_bracket(toks_, i + 1);
      ref.kind = MemberKind::Method;
      ref.args_span = Span{toks_[i + 1].begin, toks_[close].end};
      ref.arg_count = count_arguments(toks_, i + 1, close);
      auto m = lookup_method(index_, ctx_, ref.name, ref.arg_count);
      ref.owner = m ? m->first->qualified_name : "";
      out_.references.push_back(std::move(ref));
      return;
    }
    auto f = lookup_field(index_, ctx_, t.text);
    if (!f) return;
    ref.kind = MemberKind::Field;
    ref.owner = f->first->qualified_name;
    ref.is_write = is_assignment_after(toks_, i, range_.last);
    out_.references.push_back(std::move(ref));
  }

  void scan() {
    for (std::size_t i = range_.first; i <= range_.last; ++i) {
      const Token& t = toks_[i];
      const Token* prev = i > range_.first ? &toks_[i - 1] : nullptr;
      if (t.is("this")) {
        bool qualified_this = prev && prev->is(".");
        if (qualified_this || !(at(i + 1, ".") || at(i + 1, "(") || at(i + 1, "::"))) {
          std::size_t offset = t.begin;
          if (qualified_this && i >= range_.first + 2) {
            std::size_t start = receiver_start(toks_, i - 2, range_.first);
            if (start <= i - 2) offset = toks_[start].begin;
          }
          out_.bare_this_offsets.push_back(offset);
        }
        continue;
      }
      if (!t.is_identifier()) continue;
      if (prev && prev->is(".")) {
        if (i >= range_.first + 2) record_member(i, false);
        continue;
      }
      if (prev && prev->is("::")) {
        if (i >= range_.first + 2) record_member(i, true);
        continue;
      }
      if (prev && (prev->is("new") || prev->is("@") || prev->is("case") || prev->is("goto") ||
                   prev->is("break") || prev->is("continue"))) {
        continue;
      }
      bool call = at(i + 1, "(");
      if (call) {
        // a declaration inside an anonymous class body: `void run() {`
        if (prev && (prev->is_identifier() || prev->is(">") || prev->is("]") ||
                     (prev->kind == TokenKind::Keyword && java::is_primitive_type(prev->text)))) {
          continue;
        }
        record_implicit(i);
        continue;
      }
      if (declarations_.count(i)) {
        out_.local_uses.push_back(NameUse{std::string(t.text), t.begin, i, at(i + 1, "."), true, false});
        continue;
      }
      if (is_local(t.text)) {
        out_.local_uses.push_back(NameUse{std::string(t.text), t.begin, i, at(i + 1, "."), false,
                                          is_assignment_after(toks_, i, range_.last)});
        continue;
      }
      // type position of a declaration or cast: `Foo x`, `Foo.class`
      if (i + 1 <= range_.last && (toks_[i + 1].is_identifier() || at(i + 1, "::"))) continue;
      if (at(i + 1, ":") && prev && (prev->is("{") || prev->is(";") || prev->is("}"))) continue;  // label
      record_implicit(i);
    }
  }

  const ProjectIndex& index_;
  const ClassInfo& ctx_;
  const std::vector<Token>& toks_;
  TokenRange range_;
  BodyAnalysis out_;
  std::set<std::size_t> declarations_;
};

}  // namespace

BodyAnalysis analyze_body(const ProjectIndex& index, const ClassInfo& context, const std::vector<Token>& tokens,
                          TokenRange range, const std::vector<Parameter>& params) {
  if (tokens.empty() || range.last >= tokens.size() || range.first > range.last) {
    return {};
  }
  Analyzer analyzer(index, context, tokens, range);
  return analyzer.run(params);
}

}  // namespace mover
