#include "mover/executor.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <nlohmann/json.hpp>
#include <set>

#include "mover/error.hpp"
#include "mover/text.hpp"

namespace mover {

namespace fs = std::filesystem;
using java::Token;
using java::TokenKind;
using java::TokenRange;

namespace {

struct LocalEdit {
  std::size_t begin;
  std::size_t end;
  std::string text;
};

bool all_space(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; });
}

std::string leading_ws(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
  return std::string(line.substr(0, n));
}

std::string_view visibility_keyword(Visibility v) {
  switch (v) {
    case Visibility::Public: return "public";
    case Visibility::Protected: return "protected";
    case Visibility::Private: return "private";
    case Visibility::Package: return "";
  }
  return "";
}

std::size_t token_at(const std::vector<Token>& toks, std::size_t offset) {
  auto it = std::lower_bound(toks.begin(), toks.end(), offset,
                             [](const Token& t, std::size_t o) { return t.begin < o; });
  return static_cast<std::size_t>(it - toks.begin());
}

/// Applies non-overlapping edits to `base`, whose first byte sits at `origin`.
std::string apply_local(std::string_view base, std::size_t origin, std::vector<LocalEdit> edits) {
  std::sort(edits.begin(), edits.end(), [](const LocalEdit& a, const LocalEdit& b) {
    return a.begin != b.begin ? a.begin > b.begin : a.end > b.end;
  });
  std::string out(base);
  std::size_t floor = std::string::npos;
  for (const auto& e : edits) {
    if (e.end > floor) {
      throw Error(ErrorCode::PlanConflict, "overlapping edits inside the moved method");
    }
    out.replace(e.begin - origin, e.end - e.begin, e.text);
    floor = e.begin;
  }
  return out;
}

std::string convert_newlines(std::string_view s, std::string_view nl) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r' && i + 1 < s.size() && s[i + 1] == '\n') continue;
    if (s[i] == '\n') {
      out += nl;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

std::string reindent(std::string_view method_text, std::string_view old_indent, std::string_view new_indent) {
  std::string out;
  std::size_t pos = 0;
  bool first = true;
  while (pos <= method_text.size()) {
    std::size_t nl = method_text.find('\n', pos);
    std::string_view line = method_text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    std::string_view bare = line;
    if (!bare.empty() && bare.back() == '\r') bare.remove_suffix(1);
    if (first) {
      out += new_indent;
      out += line;
    } else if (all_space(bare)) {
      if (line.size() != bare.size()) out += "\r";
    } else if (text::starts_with(line, old_indent)) {
      out += new_indent;
      out += line.substr(old_indent.size());
    } else {
      out += line;
    }
    first = false;
    if (nl == std::string_view::npos) break;
    out += "\n";
    pos = nl + 1;
  }
  return out;
}

std::string import_block(const std::vector<std::string>& names, std::string_view nl) {
  std::string out;
  for (const auto& n : names) out += "import " + n + ";" + std::string(nl);
  return out;
}

/// Zero-width edit that adds `names` as import declarations to `content`.
LocalEdit import_insertion(std::string_view content, const SourceFile& file, const std::vector<std::string>& names,
                           std::optional<Span> package_span) {
  std::string nl(text::detect_newline(content));
  if (!file.imports.empty()) {
    std::size_t last_end = 0;
    for (const auto& imp : file.imports) last_end = std::max(last_end, imp.span.end);
    std::size_t at = text::line_end_inclusive(content, last_end - 1);
    std::string block = import_block(names, nl);
    if (at == content.size() && (content.empty() || content.back() != '\n')) block = nl + block;
    return LocalEdit{at, at, block};
  }
  if (package_span) {
    std::size_t at = text::line_end_inclusive(content, package_span->end - 1);
    std::string prefix = at == content.size() && (content.empty() || content.back() != '\n') ? nl : "";
    return LocalEdit{at, at, prefix + nl + import_block(names, nl)};
  }
  return LocalEdit{0, 0, import_block(names, nl) + nl};
}

class Planner {
 public:
  Planner(const ProjectIndex& index, const MoveAnalysis& analysis)
      : index_(index),
        a_(analysis),
        host_(index.class_at(analysis.method.class_name)),
        m_(find_method(index, analysis.method)),
        t_(index.class_at(analysis.target)) {}

  MovePlan run() {
    plan_.method = a_.method;
    plan_.target = a_.target;
    plan_.is_static = m_.is_static;
    plan_.route = a_.route;
    plan_.new_signature = a_.new_signature;
    plan_.host_param_added = a_.host_param_added;
    plan_.source_roots = index_.source_roots;
    plan_.project_method_count = index_.method_count();
    plan_.notes = a_.details;

    tokens_ = lex_method(index_, host_, m_);
    body_ = analyze_body(index_, host_, tokens_.lexed.tokens, tokens_.block, m_.parameters);
    std::string moved = moved_text();
    remove_from_host();
    insert_into_target(moved);
    rewrite_call_sites();
    rewrite_imports();
    finalize();
    return std::move(plan_);
  }

 private:
  std::string_view src(const std::string& file) const { return index_.file_content(file); }

  void add(const std::string& file, LocalEdit e) { per_file_[file].push_back(std::move(e)); }

  const java::LexResult& lexed(const std::string& file) {
    auto it = lex_cache_.find(file);
    if (it == lex_cache_.end()) it = lex_cache_.emplace(file, java::lex(src(file))).first;
    return it->second;
  }

  std::set<std::string> collision_names() const {
    std::set<std::string> names;
    for (const auto& [name, _] : body_.locals) names.insert(name);
    if (a_.host_param_added) names.insert(a_.host_param_name);
    if (a_.param_index) names.erase(m_.parameters[*a_.param_index].name);
    return names;
  }

  /// Edit removing `recv.` (or `this.recv.`) before a member access, keeping
  /// `this.` when the member name would be shadowed.
  void strip_receiver(std::vector<LocalEdit>& edits, std::size_t start, std::size_t name_token,
                      const std::set<std::string>& shadowed) {
    const auto& toks = tokens_.lexed.tokens;
    std::size_t dot = name_token + 1;
    if (dot + 1 >= toks.size() || !toks[dot].is(".")) return;
    const Token& member = toks[dot + 1];
    bool field_like = !(dot + 2 < toks.size() && toks[dot + 2].is("("));
    std::string keep = field_like && shadowed.count(std::string(member.text)) ? "this." : "";
    edits.push_back(LocalEdit{start, member.begin, keep});
  }

  std::string moved_text() {
    std::string_view file = src(host_.source_file);
    const auto& toks = tokens_.lexed.tokens;
    Span span = m_.body_span;
    std::vector<LocalEdit> edits;
    auto side = host_side_names();
    auto shadowed = collision_names();

    if (a_.route == MoveRoute::Parameter) {
      const Parameter& p = m_.parameters[*a_.param_index];
      std::vector<std::string> kept;
      for (std::size_t i = 0; i < m_.parameters.size(); ++i) {
        if (i == *a_.param_index) continue;
        kept.emplace_back(file.substr(m_.parameters[i].span.begin, m_.parameters[i].span.size()));
      }
      if (a_.host_param_added) kept.push_back(a_.host_type_text + " " + a_.host_param_name);
      edits.push_back(LocalEdit{m_.params_span.begin, m_.params_span.end, "(" + text::join(kept, ", ") + ")"});
      for (const NameUse& u : body_.local_uses) {
        if (u.name != p.name || u.is_declaration) continue;
        if (u.followed_by_dot) {
          strip_receiver(edits, u.offset, u.token, shadowed);
        } else {
          edits.push_back(LocalEdit{u.offset, u.offset + u.name.size(), "this"});
        }
      }
    }

    for (const MemberRef& r : body_.references) {
      bool implicit = r.receiver == ReceiverKind::Implicit;
      bool via_this = r.receiver == ReceiverKind::This;
      if (!(implicit || via_this) || r.owner.empty() || !side.count(r.owner)) continue;
      bool self_call = r.kind == MemberKind::Method && r.owner == host_.qualified_name && r.name == m_.name;
      if (self_call) continue;
      const ClassInfo& owner = index_.class_at(r.owner);
      bool is_static = member_is_static(owner, r);
      if (a_.route == MoveRoute::Field && !is_static) {
        if (r.kind != MemberKind::Field || r.name != a_.field_name) continue;
        std::size_t name_tok = token_at(toks, r.offset);
        std::size_t start = via_this ? r.receiver_span.begin : r.offset;
        if (name_tok + 1 < toks.size() && toks[name_tok + 1].is(".")) {
          strip_receiver(edits, start, name_tok, shadowed);
        } else {
          edits.push_back(LocalEdit{start, toks[name_tok].end, "this"});
        }
        continue;
      }
      std::string qualifier;
      if (is_static) {
        if (&owner == &t_) continue;
        auto q = a_.qualifier_text.find(owner.qualified_name);
        qualifier = q != a_.qualifier_text.end() ? q->second : owner.simple_name;
      } else {
        qualifier = a_.host_param_name;
      }
      if (via_this) {
        edits.push_back(LocalEdit{r.receiver_span.begin, r.receiver_span.end, qualifier});
      } else {
        edits.push_back(LocalEdit{r.offset, r.offset, qualifier + "."});
      }
    }

    if (a_.route == MoveRoute::Parameter) {
      for (std::size_t off : body_.bare_this_offsets) {
        std::size_t k = token_at(toks, off);
        while (k < toks.size() && !toks[k].is("this")) ++k;
        if (k < toks.size()) edits.push_back(LocalEdit{off, toks[k].end, a_.host_param_name});
      }
    }

    if (a_.route == MoveRoute::Static) {
      for (const CallSite& cs : a_.call_sites) {
        if (!cs.inside_moved || cs.ref.receiver != ReceiverKind::Type) continue;
        edits.push_back(LocalEdit{cs.ref.receiver_span.begin, cs.ref.receiver_span.end, t_.simple_name});
      }
    }

    if (a_.new_visibility != m_.visibility) visibility_edit(edits);

    std::string text = apply_local(file.substr(span.begin, span.size()), span.begin, std::move(edits));
    std::size_t ls = text::line_start(file, span.begin);
    std::string_view prefix = file.substr(ls, span.begin - ls);
    std::string old_indent = all_space(prefix) ? std::string(prefix) : std::string();
    std::string out = reindent(text, old_indent, member_indent());
    return convert_newlines(out, text::detect_newline(src(t_.source_file)));
  }

  std::set<std::string> host_side_names() const {
    std::set<std::string> out;
    for (const ClassInfo* c = &host_; c != nullptr;
         c = c->enclosing.empty() ? nullptr : index_.find_class(c->enclosing)) {
      out.insert(c->qualified_name);
      for (const ClassInfo* s : super_type_closure(index_, *c)) out.insert(s->qualified_name);
    }
    return out;
  }

  static bool member_is_static(const ClassInfo& owner, const MemberRef& r) {
    if (r.kind == MemberKind::Field) {
      const FieldInfo* f = owner.find_field(r.name);
      return f != nullptr && f->is_static;
    }
    for (const auto& m : owner.methods) {
      if (m.name == r.name && !m.is_constructor) return m.is_static;
    }
    return false;
  }

  void visibility_edit(std::vector<LocalEdit>& edits) {
    const auto& toks = tokens_.lexed.tokens;
    std::string_view kw = visibility_keyword(a_.new_visibility);
    std::optional<std::size_t> insert_at;
    for (std::size_t i = tokens_.decl.first; i <= tokens_.decl.last && toks[i].begin < m_.name_offset; ++i) {
      const Token& t = toks[i];
      if (t.is("@")) {
        std::size_t k = i + 1;
        while (k + 2 <= tokens_.decl.last && toks[k + 1].is(".") && toks[k + 2].is_identifier()) k += 2;
        if (k + 1 <= tokens_.decl.last && toks[k + 1].is("(")) k = java::match_bracket(toks, k + 1);
        i = k;
        continue;
      }
      if (t.is("public") || t.is("protected") || t.is("private")) {
        if (kw.empty()) {
          std::size_t end = i + 1 < toks.size() ? toks[i + 1].begin : t.end;
          edits.push_back(LocalEdit{t.begin, end, ""});
        } else {
          edits.push_back(LocalEdit{t.begin, t.end, std::string(kw)});
        }
        return;
      }
      if (!insert_at) insert_at = t.begin;
    }
    if (!kw.empty() && insert_at) edits.push_back(LocalEdit{*insert_at, *insert_at, std::string(kw) + " "});
  }

  std::string member_indent() const {
    std::string_view tsrc = src(t_.source_file);
    auto indent_of = [&](std::size_t offset) -> std::optional<std::string> {
      std::size_t ls = text::line_start(tsrc, offset);
      std::string_view prefix = tsrc.substr(ls, offset - ls);
      if (!all_space(prefix)) return std::nullopt;
      return std::string(prefix);
    };
    for (const auto& m : t_.methods) {
      if (auto i = indent_of(m.body_span.begin)) return *i;
    }
    for (const auto& f : t_.fields) {
      if (auto i = indent_of(f.decl_span.begin)) return *i;
    }
    std::string base = indent_of(t_.block_span.end - 1).value_or("");
    std::string_view hsrc = src(host_.source_file);
    std::size_t ls = text::line_start(hsrc, host_.block_span.end - 1);
    std::string host_brace = leading_ws(hsrc.substr(ls));
    std::size_t ms = text::line_start(hsrc, m_.body_span.begin);
    std::string host_member = leading_ws(hsrc.substr(ms));
    std::string unit = "    ";
    if (host_member.size() > host_brace.size() && text::starts_with(host_member, host_brace)) {
      unit = host_member.substr(host_brace.size());
    }
    return base + unit;
  }

  void remove_from_host() {
    std::string_view file = src(host_.source_file);
    std::size_t begin = m_.body_span.begin;
    std::size_t end = m_.body_span.end;
    std::size_t ls = text::line_start(file, begin);
    std::size_t le = text::line_end_inclusive(file, end - 1);
    if (all_space(file.substr(ls, begin - ls)) && all_space(file.substr(end, le - end))) {
      begin = ls;
      end = le;
      if (begin > 0) {
        std::size_t prev = text::line_start(file, begin - 1);
        if (all_space(file.substr(prev, begin - prev))) begin = prev;
      }
    }
    add(host_.source_file, LocalEdit{begin, end, ""});
  }

  void insert_into_target(const std::string& moved) {
    std::string_view file = src(t_.source_file);
    std::string nl(text::detect_newline(file));
    std::size_t brace = t_.block_span.end - 1;
    std::size_t ls = text::line_start(file, brace);
    if (all_space(file.substr(ls, brace - ls))) {
      bool opens_body = t_.block_span.begin >= text::line_start(file, ls > 0 ? ls - 1 : 0);
      std::string lead = opens_body ? "" : nl;
      add(t_.source_file, LocalEdit{ls, ls, lead + moved + nl});
    } else {
      add(t_.source_file, LocalEdit{brace, brace, nl + moved + nl});
    }
  }

  static bool simple_expression(const std::vector<Token>& toks, TokenRange r) {
    if (!(toks[r.first].is_identifier() || toks[r.first].is("this"))) return false;
    for (std::size_t k = r.first; k <= r.last; ++k) {
      const Token& t = toks[k];
      if (t.is("(") || t.is("[")) {
        k = java::match_bracket(toks, k);
        continue;
      }
      if (!(t.is_identifier() || t.is("this") || t.is("."))) return false;
    }
    return true;
  }

  void rewrite_call_sites() {
    for (const CallSite& cs : a_.call_sites) {
      if (cs.inside_moved) continue;
      const MemberRef& r = cs.ref;
      std::string_view file = src(cs.file);
      switch (a_.route) {
        case MoveRoute::Field:
          add(cs.file, LocalEdit{r.offset, r.offset, a_.field_name + "."});
          break;
        case MoveRoute::Static: {
          if (cs.via_static_import) continue;
          const TypeRef& tr = a_.target_refs_by_file.at(cs.file);
          if (r.receiver == ReceiverKind::Implicit) {
            add(cs.file, LocalEdit{r.offset, r.offset, tr.text + "."});
          } else {
            add(cs.file, LocalEdit{r.receiver_span.begin, r.receiver_span.end, tr.text});
          }
          if (!tr.import.empty()) file_imports_[cs.file].insert(tr.import);
          break;
        }
        case MoveRoute::Parameter: {
          const auto& toks = lexed(cs.file).tokens;
          std::size_t open = token_at(toks, r.args_span.begin);
          std::size_t close = token_at(toks, r.args_span.end - 1);
          auto args = split_arguments(toks, open, close);
          std::size_t pi = *a_.param_index;
          if (pi >= args.size()) {
            throw Error(ErrorCode::PlanConflict, "call in " + cs.caller + " passes too few arguments");
          }
          auto arg_text = [&](TokenRange ar) {
            return std::string(file.substr(toks[ar.first].begin, toks[ar.last].end - toks[ar.first].begin));
          };
          std::string receiver = arg_text(args[pi]);
          if (!simple_expression(toks, args[pi])) receiver = "(" + receiver + ")";
          std::vector<std::string> rest;
          for (std::size_t i = 0; i < args.size(); ++i) {
            if (i != pi) rest.push_back(arg_text(args[i]));
          }
          std::size_t start = r.offset;
          if (a_.host_param_added) {
            if (r.receiver == ReceiverKind::Implicit) {
              rest.emplace_back("this");
            } else {
              rest.emplace_back(file.substr(r.receiver_span.begin, r.receiver_span.size()));
            }
          }
          if (r.receiver != ReceiverKind::Implicit) start = r.receiver_span.begin;
          add(cs.file, LocalEdit{start, r.args_span.end, receiver + "." + m_.name + "(" + text::join(rest, ", ") + ")"});
          break;
        }
      }
      ++plan_.call_sites_rewritten;
    }
  }

  void rewrite_imports() {
    for (const auto& name : a_.target_imports) file_imports_[t_.source_file].insert(name);
    if (a_.route == MoveRoute::Static) {
      std::string old_single = host_.qualified_name + "." + m_.name;
      std::string new_single = "static " + t_.qualified_name + "." + m_.name;
      std::set<std::string> wildcard_users;
      for (const CallSite& cs : a_.call_sites) {
        if (cs.via_static_import) wildcard_users.insert(cs.file);
      }
      for (const auto& [path, f] : index_.files) {
        bool rewritten = false;
        for (const auto& imp : f.imports) {
          if (imp.is_static && !imp.is_wildcard && imp.name == old_single) {
            add(path, LocalEdit{imp.span.begin, imp.span.end, "import " + new_single + ";"});
            rewritten = true;
          }
        }
        if (!rewritten && wildcard_users.count(path)) file_imports_[path].insert(new_single);
      }
    }
    for (const auto& [path, names] : file_imports_) {
      if (names.empty()) continue;
      const SourceFile& f = index_.files.at(path);
      std::vector<std::string> sorted(names.begin(), names.end());
      auto unit = java::parse(src(path));
      add(path, import_insertion(src(path), f, sorted, unit.package_span));
    }
  }

  void finalize() {
    for (auto& [path, edits] : per_file_) {
      std::string_view content = src(path);
      auto disk = text::read_file(path);
      if (text::sha256_hex(disk) != index_.files.at(path).sha256) {
        throw Error(ErrorCode::StaleIndex, path + " changed since it was indexed");
      }
      // Zero-width inserts at the same offset are merged in the order they were added.
      std::stable_sort(edits.begin(), edits.end(), [](const LocalEdit& a, const LocalEdit& b) {
        return a.begin != b.begin ? a.begin > b.begin : a.end > b.end;
      });
      std::vector<LocalEdit> merged;
      for (auto& e : edits) {
        if (!merged.empty() && merged.back().begin == e.begin && merged.back().end == e.begin && e.end == e.begin) {
          merged.back().text = e.text + merged.back().text;
          continue;
        }
        if (!merged.empty() && e.end > merged.back().begin) {
          throw Error(ErrorCode::PlanConflict, "overlapping edits in " + path);
        }
        merged.push_back(std::move(e));
      }
      std::vector<TextEdit> file_edits;
      for (auto& e : merged) file_edits.push_back(TextEdit{path, e.begin, e.end, std::move(e.text)});
      plan_.file_hashes[path] = index_.files.at(path).sha256;
      plan_.diff += unified_diff(path, content, file_edits);
      plan_.edits.insert(plan_.edits.end(), file_edits.begin(), file_edits.end());
    }
  }

  const ProjectIndex& index_;
  const MoveAnalysis& a_;
  const ClassInfo& host_;
  const MethodInfo& m_;
  const ClassInfo& t_;
  MethodTokens tokens_;
  BodyAnalysis body_;
  MovePlan plan_;
  std::map<std::string, std::vector<LocalEdit>> per_file_;
  std::map<std::string, std::set<std::string>> file_imports_;
  std::map<std::string, java::LexResult> lex_cache_;
};

std::mutex& workspace_mutex() {
  static std::mutex m;
  return m;
}

/// Process-wide mutex plus an advisory file lock shared with other processes.
class WorkspaceLock {
 public:
  explicit WorkspaceLock(const std::vector<std::string>& roots) : guard_(workspace_mutex()) {
    std::string key = text::sha256_hex(text::join(roots, "\n")).substr(0, 16);
    fs::path path = fs::temp_directory_path() / ("mover-" + key + ".lock");
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ >= 0 && ::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }
  ~WorkspaceLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

 private:
  std::lock_guard<std::mutex> guard_;
  int fd_ = -1;
};

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t nl = s.find('\n', pos);
    if (nl == std::string_view::npos) {
      out.emplace_back(s.substr(pos));
      break;
    }
    std::string_view line = s.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.emplace_back(line);
    pos = nl + 1;
  }
  return out;
}

std::size_t line_number(std::string_view s, std::size_t offset) {
  return static_cast<std::size_t>(std::count(s.begin(), s.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace

std::string apply_edits(std::string_view content, const std::vector<TextEdit>& edits) {
  std::string out(content);
  std::size_t floor = std::string::npos;
  for (const auto& e : edits) {
    if (e.end > floor || e.end > out.size() || e.begin > e.end) {
      throw Error(ErrorCode::PlanConflict, "edits for " + e.file + " are not sorted, disjoint and in range");
    }
    out.replace(e.begin, e.end - e.begin, e.replacement);
    floor = e.begin;
  }
  return out;
}

std::string unified_diff(std::string_view path, std::string_view before, const std::vector<TextEdit>& edits,
                         int context) {
  if (edits.empty()) return "";
  std::vector<TextEdit> asc(edits.rbegin(), edits.rend());
  std::sort(asc.begin(), asc.end(), [](const TextEdit& a, const TextEdit& b) { return a.begin < b.begin; });
  // Expand each edit to whole lines and merge regions that share lines.
  struct Region {
    std::size_t a;
    std::size_t b;
    std::vector<TextEdit> edits;
  };
  std::vector<Region> regions;
  for (const auto& e : asc) {
    std::size_t a = text::line_start(before, e.begin);
    std::size_t b = e.end > e.begin ? text::line_end_inclusive(before, e.end - 1)
                                    : (e.begin == a ? a : text::line_end_inclusive(before, e.begin));
    if (!regions.empty() && a < regions.back().b) {
      regions.back().b = std::max(regions.back().b, b);
      regions.back().edits.push_back(e);
    } else {
      regions.push_back(Region{a, b, {e}});
    }
  }
  auto old_lines = split_lines(before);
  struct Change {
    std::size_t old_line;
    std::size_t old_count;
    std::vector<std::string> added;
  };
  std::vector<Change> changes;
  for (auto& r : regions) {
    std::string text(before.substr(r.a, r.b - r.a));
    for (auto it = r.edits.rbegin(); it != r.edits.rend(); ++it) {
      text.replace(it->begin - r.a, it->end - it->begin, it->replacement);
    }
    std::size_t first = line_number(before, r.a);
    std::size_t count = r.b > r.a ? line_number(before, r.b) - first : 0;
    if (r.b > r.a && before[r.b - 1] != '\n') ++count;
    changes.push_back(Change{first, count, split_lines(text)});
  }
  std::string out = "--- a/" + std::string(path) + "\n+++ b/" + std::string(path) + "\n";
  const std::size_t ctx = static_cast<std::size_t>(context);
  long delta = 0;
  std::size_t i = 0;
  while (i < changes.size()) {
    std::size_t j = i;
    while (j + 1 < changes.size() &&
           changes[j + 1].old_line <= changes[j].old_line + changes[j].old_count + 2 * ctx) {
      ++j;
    }
    std::size_t start = changes[i].old_line >= ctx ? changes[i].old_line - ctx : 0;
    std::size_t stop = std::min(old_lines.size(), changes[j].old_line + changes[j].old_count + ctx);
    std::string body;
    std::size_t old_n = 0;
    std::size_t new_n = 0;
    std::size_t line = start;
    long hunk_delta = 0;
    for (std::size_t k = i; k <= j; ++k) {
      for (; line < changes[k].old_line; ++line, ++old_n, ++new_n) body += " " + old_lines[line] + "\n";
      for (std::size_t c = 0; c < changes[k].old_count; ++c, ++line, ++old_n) body += "-" + old_lines[line] + "\n";
      for (const auto& add : changes[k].added) {
        body += "+" + add + "\n";
        ++new_n;
      }
      hunk_delta += static_cast<long>(changes[k].added.size()) - static_cast<long>(changes[k].old_count);
    }
    for (; line < stop; ++line, ++old_n, ++new_n) body += " " + old_lines[line] + "\n";
    std::size_t old_start = old_n == 0 ? start : start + 1;
    long new_start_l = static_cast<long>(start) + delta + (new_n == 0 ? 0 : 1);
    out += "@@ -" + std::to_string(old_start) + "," + std::to_string(old_n) + " +" + std::to_string(new_start_l) +
           "," + std::to_string(new_n) + " @@\n" + body;
    delta += hunk_delta;
    i = j + 1;
  }
  return out;
}

MovePlan plan_move(const ProjectIndex& index, const MethodRef& method, std::string_view target) {
  MoveAnalysis analysis = analyze_move(index, method, target);
  if (!analysis.feasible()) {
    std::vector<std::string> codes;
    for (auto r : analysis.reasons) codes.emplace_back(to_string(r));
    throw Error(ErrorCode::Infeasible, method.class_name + "#" + method.signature + " -> " + std::string(target) +
                                           ": " + text::join(codes, ", ") + " (" +
                                           text::join(analysis.details, "; ") + ")");
  }
  return Planner(index, analysis).run();
}

ApplyResult apply(const MovePlan& plan, const ApplyOptions& options) {
  WorkspaceLock lock(plan.source_roots);
  std::map<std::string, std::vector<TextEdit>> by_file;
  for (const auto& e : plan.edits) by_file[e.file].push_back(e);
  std::map<std::string, std::string> originals;
  std::map<std::string, std::string> updated;
  for (const auto& [path, edits] : by_file) {
    std::string content = text::read_file(path);
    auto it = plan.file_hashes.find(path);
    if (it == plan.file_hashes.end() || text::sha256_hex(content) != it->second) {
      throw Error(ErrorCode::StaleIndex, path + " no longer matches the plan");
    }
    updated[path] = apply_edits(content, edits);
    originals[path] = std::move(content);
  }
  std::vector<std::string> written;
  auto rollback = [&]() {
    for (const auto& path : written) text::write_file_atomic(path, originals.at(path));
  };
  try {
    for (const auto& [path, content] : updated) {
      text::write_file_atomic(path, content);
      written.push_back(path);
    }
  } catch (...) {
    rollback();
    throw;
  }
  ApplyResult result;
  result.files_changed = written;
  result.call_sites_rewritten = plan.call_sites_rewritten;
  std::string failure;
  try {
    std::vector<fs::path> roots(plan.source_roots.begin(), plan.source_roots.end());
    result.index_after = build_index(roots);
    const ProjectIndex& after = result.index_after;
    for (const auto& w : after.warnings) {
      if (updated.count(w.file)) failure = w.file + ": " + w.message;
    }
    if (failure.empty() && after.method_count() != plan.project_method_count) {
      failure = "method count changed from " + std::to_string(plan.project_method_count) + " to " +
                std::to_string(after.method_count());
    }
    if (failure.empty()) {
      const ClassInfo* t = after.find_class(plan.target);
      const ClassInfo* h = after.find_class(plan.method.class_name);
      std::size_t in_target = 0;
      if (t != nullptr) {
        in_target = static_cast<std::size_t>(std::count_if(t->methods.begin(), t->methods.end(), [&](const MethodInfo& m) {
          return m.signature == plan.new_signature;
        }));
      }
      if (in_target != 1) {
        failure = plan.new_signature + " appears " + std::to_string(in_target) + " times in " + plan.target;
      } else if (h != nullptr && h->find_method(plan.method.signature)) {
        failure = plan.method.signature + " is still declared in " + plan.method.class_name;
      }
    }
  } catch (const Error& e) {
    failure = e.what();
  }
  if (failure.empty() && options.inject_reparse_failure) failure = "injected failure";
  if (!failure.empty()) {
    rollback();
    throw Error(ErrorCode::ReparseFailed, failure);
  }
  result.reparse_ok = true;
  return result;
}

nlohmann::json to_json(const MovePlan& plan) {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : plan.edits) {
    edits.push_back({{"file", e.file}, {"begin", e.begin}, {"end", e.end}, {"replacement", e.replacement}});
  }
  return {{"method", plan.method.signature},
          {"host", plan.method.class_name},
          {"target", plan.target},
          {"is_static", plan.is_static},
          {"route", to_string(plan.route)},
          {"new_signature", plan.new_signature},
          {"host_param_added", plan.host_param_added},
          {"edits", edits},
          {"file_hashes", plan.file_hashes},
          {"source_roots", plan.source_roots},
          {"project_method_count", plan.project_method_count},
          {"call_sites_rewritten", plan.call_sites_rewritten},
          {"notes", plan.notes},
          {"diff", plan.diff}};
}

MovePlan plan_from_json(const nlohmann::json& j) {
  MovePlan p;
  p.method = MethodRef{j.at("host").get<std::string>(), j.at("method").get<std::string>()};
  p.target = j.at("target").get<std::string>();
  p.is_static = j.at("is_static").get<bool>();
  std::string route = j.at("route").get<std::string>();
  p.route = route == "parameter" ? MoveRoute::Parameter : route == "field" ? MoveRoute::Field : MoveRoute::Static;
  p.new_signature = j.at("new_signature").get<std::string>();
  p.host_param_added = j.at("host_param_added").get<bool>();
  for (const auto& e : j.at("edits")) {
    p.edits.push_back(TextEdit{e.at("file").get<std::string>(), e.at("begin").get<std::size_t>(),
                               e.at("end").get<std::size_t>(), e.at("replacement").get<std::string>()});
  }
  p.file_hashes = j.at("file_hashes").get<std::map<std::string, std::string>>();
  p.source_roots = j.at("source_roots").get<std::vector<std::string>>();
  p.project_method_count = j.at("project_method_count").get<std::size_t>();
  p.call_sites_rewritten = j.at("call_sites_rewritten").get<std::size_t>();
  p.notes = j.at("notes").get<std::vector<std::string>>();
  p.diff = j.at("diff").get<std::string>();
  return p;
}

}  // namespace mover
