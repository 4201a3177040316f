#include "mover/move_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "mover/error.hpp"
#include "mover/text.hpp"

namespace mover {

using java::Token;
using java::TokenKind;
using java::TokenRange;

std::string_view to_string(MoveRoute r) {
  switch (r) {
    case MoveRoute::Parameter: return "parameter";
    case MoveRoute::Field: return "field";
    case MoveRoute::Static: return "static";
  }
  return "static";
}

std::string make_signature(std::string_view name, const std::vector<std::string>& type_texts) {
  std::vector<std::string> erased;
  erased.reserve(type_texts.size());
  for (const auto& t : type_texts) erased.push_back(text::erase_type(t));
  return std::string(name) + "(" + text::join(erased, ",") + ")";
}

namespace {

const ClassInfo& top_level(const ProjectIndex& index, const ClassInfo& c) {
  const ClassInfo* cur = &c;
  while (!cur->enclosing.empty()) {
    const ClassInfo* e = index.find_class(cur->enclosing);
    if (e == nullptr) break;
    cur = e;
  }
  return *cur;
}

bool same_top_level(const ProjectIndex& index, const ClassInfo& a, const ClassInfo& b) {
  return &top_level(index, a) == &top_level(index, b);
}

int rank(Visibility v) {
  switch (v) {
    case Visibility::Private: return 0;
    case Visibility::Package: return 1;
    case Visibility::Protected: return 2;
    case Visibility::Public: return 3;
  }
  return 1;
}

std::string last_segment(std::string_view dotted) {
  auto dot = dotted.rfind('.');
  return std::string(dot == std::string_view::npos ? dotted : dotted.substr(dot + 1));
}

/// Whether code in `from` may name the class `cls` at all.
bool class_accessible(const ProjectIndex& index, const ClassInfo& cls, const ClassInfo& from) {
  for (const ClassInfo* c = &cls; c != nullptr; c = c->enclosing.empty() ? nullptr : index.find_class(c->enclosing)) {
    switch (c->visibility) {
      case Visibility::Public:
        break;
      case Visibility::Private:
        if (!same_top_level(index, *c, from)) return false;
        break;
      case Visibility::Package:
      case Visibility::Protected:
        if (c->package_name() != from.package_name()) return false;
        break;
    }
  }
  return true;
}

bool arity_matches(const MethodInfo& m, int args) {
  if (args < 0) return true;
  int n = static_cast<int>(m.parameters.size());
  bool varargs = !m.parameters.empty() && text::ends_with(m.parameters.back().type_text, "...");
  return n == args || (varargs && args >= n - 1);
}

bool arities_overlap(const MethodInfo& a, const MethodInfo& b) {
  bool va = !a.parameters.empty() && text::ends_with(a.parameters.back().type_text, "...");
  bool vb = !b.parameters.empty() && text::ends_with(b.parameters.back().type_text, "...");
  if (va || vb) return true;
  return a.parameters.size() == b.parameters.size();
}

std::string lower_camel(std::string_view simple) {
  std::string s = last_segment(simple);
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  if (java::is_keyword(s)) s += "Ref";
  return s;
}

const MethodInfo* member_method(const ClassInfo& owner, std::string_view name, int arg_count) {
  const MethodInfo* by_name = nullptr;
  for (const auto& m : owner.methods) {
    if (m.is_constructor || m.name != name) continue;
    if (arity_matches(m, arg_count)) return &m;
    if (by_name == nullptr) by_name = &m;
  }
  return by_name;
}

struct MemberFacts {
  Visibility visibility = Visibility::Public;
  bool is_static = false;
  bool found = false;
};

MemberFacts member_facts(const ClassInfo& owner, const MemberRef& r) {
  MemberFacts f;
  if (r.kind == MemberKind::Field) {
    if (const FieldInfo* fi = owner.find_field(r.name)) {
      f.visibility = fi->visibility;
      f.is_static = fi->is_static;
      f.found = true;
    }
  } else if (const MethodInfo* mi = member_method(owner, r.name, r.arg_count)) {
    f.visibility = mi->visibility;
    f.is_static = mi->is_static;
    f.found = true;
  }
  return f;
}

const SourceFile* file_of(const ProjectIndex& index, const ClassInfo& c) {
  auto it = index.files.find(c.source_file);
  return it == index.files.end() ? nullptr : &it->second;
}

bool has_import(const SourceFile* f, std::string_view name, bool is_static, bool is_wildcard) {
  if (f == nullptr) return false;
  return std::any_of(f->imports.begin(), f->imports.end(), [&](const ImportInfo& i) {
    return i.name == name && i.is_static == is_static && i.is_wildcard == is_wildcard;
  });
}

std::set<std::string> host_side(const ProjectIndex& index, const ClassInfo& host) {
  std::set<std::string> out;
  for (const ClassInfo* c = &host; c != nullptr; c = c->enclosing.empty() ? nullptr : index.find_class(c->enclosing)) {
    out.insert(c->qualified_name);
    for (const ClassInfo* s : super_type_closure(index, *c)) out.insert(s->qualified_name);
  }
  return out;
}

class Analyzer {
 public:
  Analyzer(const ProjectIndex& index, const ClassInfo& host, const MethodInfo& method, MoveAnalysis& out)
      : index_(index), host_(host), m_(method), a_(out) {}

  void run() {
    const ClassInfo* target = index_.find_class(a_.target);
    if (target == nullptr) {
      fail(FeasibilityReason::TargetNotFound, a_.target + " is not a class of the project");
      return;
    }
    t_ = target;
    a_.route = m_.is_static ? MoveRoute::Static : MoveRoute::Parameter;
    a_.new_signature = m_.signature;
    a_.new_visibility = m_.visibility;
    if (!basic_checks()) return;
    tokens_ = lex_method(index_, host_, m_);
    if (!tokens_.has_block) {
      fail(FeasibilityReason::LosesReferences, "method has no body");
      return;
    }
    body_ = analyze_body(index_, host_, tokens_.lexed.tokens, tokens_.block, m_.parameters);
    a_.call_sites = find_call_sites(index_, host_, m_);
    check_overloads();
    if (m_.is_static) {
      check_static_body();
      check_static_call_sites();
    } else {
      check_instance_body();
      check_instance_call_sites();
      decide_host_param();
    }
    check_signature();
    check_visibility();
    check_type_dependencies();
    std::sort(a_.target_imports.begin(), a_.target_imports.end());
    a_.target_imports.erase(std::unique(a_.target_imports.begin(), a_.target_imports.end()), a_.target_imports.end());
  }

 private:
  void fail(FeasibilityReason r, std::string detail) {
    if (std::find(a_.reasons.begin(), a_.reasons.end(), r) == a_.reasons.end()) a_.reasons.push_back(r);
    a_.details.push_back(std::move(detail));
  }

  void need_import(const std::string& name) {
    const SourceFile* tf = file_of(index_, *t_);
    bool is_static = text::starts_with(name, "static ");
    std::string bare = is_static ? name.substr(7) : name;
    bool wildcard = text::ends_with(bare, ".*");
    if (wildcard) bare = bare.substr(0, bare.size() - 2);
    if (has_import(tf, bare, is_static, wildcard)) return;
    a_.target_imports.push_back(name);
  }

  bool basic_checks() {
    bool ok = true;
    if (t_ == &host_) {
      fail(FeasibilityReason::TargetNotReachable, "target is the host class itself");
      ok = false;
    }
    if (t_->is_interface) {
      fail(FeasibilityReason::TargetNotReachable, t_->qualified_name + " is an interface");
      ok = false;
    }
    if (m_.is_constructor) {
      fail(FeasibilityReason::LosesReferences, "constructors cannot move");
      ok = false;
    }
    if (!m_.is_static) {
      if (t_->is_enum) {
        fail(FeasibilityReason::TargetNotReachable, t_->qualified_name + " is an enum");
        ok = false;
      }
      if (host_.is_interface) {
        fail(FeasibilityReason::HierarchyConflict, "host is an interface");
        ok = false;
      }
      if (m_.is_override || m_.is_overridden) {
        fail(FeasibilityReason::HierarchyConflict, m_.signature + " takes part in an override chain");
        ok = false;
      }
      if (!ok) return false;
      for (std::size_t i = 0; i < m_.parameters.size(); ++i) {
        const Parameter& p = m_.parameters[i];
        if (p.declared_type == t_->qualified_name) {
          a_.route = MoveRoute::Parameter;
          a_.param_index = i;
          return true;
        }
      }
      for (const FieldInfo& f : host_.fields) {
        if (!f.is_static && f.declared_type == t_->qualified_name) {
          a_.route = MoveRoute::Field;
          a_.field_name = f.name;
          return true;
        }
      }
      fail(FeasibilityReason::TargetNotReachable,
           t_->qualified_name + " is neither a host field type nor a parameter type of " + m_.signature);
      return false;
    }
    return ok;
  }

  void check_overloads() {
    for (const MethodInfo& other : host_.methods) {
      if (&other == &m_ || other.name != m_.name || other.is_constructor) continue;
      if (arities_overlap(other, m_)) {
        fail(FeasibilityReason::LosesReferences, "overload " + other.signature + " makes call sites ambiguous");
      }
    }
  }

  bool is_self_call(const MemberRef& r) const {
    return r.kind == MemberKind::Method && r.owner == host_.qualified_name && r.name == m_.name &&
           arity_matches(m_, r.arg_count);
  }

  const Parameter* moved_param() const { return a_.param_index ? &m_.parameters[*a_.param_index] : nullptr; }

  bool host_static_import_matches(std::string_view name) const {
    const SourceFile* hf = file_of(index_, host_);
    if (hf == nullptr) return false;
    for (const auto& imp : hf->imports) {
      if (!imp.is_static) continue;
      if (imp.is_wildcard || last_segment(imp.name) == name) return true;
    }
    return false;
  }

  void check_reachable_from_target(const ClassInfo& owner, const MemberRef& r) {
    MemberFacts facts = member_facts(owner, r);
    if (!facts.found) return;
    if (!is_accessible(owner, facts.visibility, *t_) || !class_accessible(index_, owner, *t_)) {
      fail(FeasibilityReason::LosesReferences, std::string(to_string(facts.visibility)) + " member " +
                                                   owner.simple_name + "." + r.name + " is not accessible from " +
                                                   t_->qualified_name);
    }
  }

  void qualify_owner(const ClassInfo& owner) {
    if (&owner == t_ || a_.qualifier_text.count(owner.qualified_name)) return;
    auto tr = type_ref(index_, *t_, owner);
    if (!tr) {
      fail(FeasibilityReason::LosesReferences, owner.qualified_name + " cannot be named from " + t_->qualified_name);
      return;
    }
    a_.qualifier_text[owner.qualified_name] = tr->text;
    if (!tr->import.empty()) need_import(tr->import);
  }

  void check_static_body() {
    auto side = host_side(index_, host_);
    for (const MemberRef& r : body_.references) {
      if (r.receiver == ReceiverKind::Super) {
        fail(FeasibilityReason::LosesReferences, "super." + r.name + " cannot be reached after the move");
        continue;
      }
      if (is_self_call(r)) continue;
      const ClassInfo* owner = r.owner.empty() ? nullptr : index_.find_class(r.owner);
      bool implicit = r.receiver == ReceiverKind::Implicit || r.receiver == ReceiverKind::This;
      if (owner == nullptr) {
        if (implicit && r.kind == MemberKind::Method) {
          if (host_static_import_matches(r.name)) {
            uses_static_wildcard_ = true;
          } else {
            fail(FeasibilityReason::LosesReferences, "call to " + r.name + " resolves outside the project");
          }
        }
        continue;
      }
      check_reachable_from_target(*owner, r);
      if (implicit && side.count(owner->qualified_name)) qualify_owner(*owner);
    }
  }

  void check_instance_body() {
    auto side = host_side(index_, host_);
    const Parameter* p = moved_param();
    for (const MemberRef& r : body_.references) {
      if (r.receiver == ReceiverKind::Super) {
        fail(FeasibilityReason::LosesReferences, "super." + r.name + " cannot be reached after the move");
        continue;
      }
      if (is_self_call(r)) {
        fail(FeasibilityReason::LosesReferences, m_.signature + " is recursive");
        continue;
      }
      const ClassInfo* owner = r.owner.empty() ? nullptr : index_.find_class(r.owner);
      bool implicit = r.receiver == ReceiverKind::Implicit || r.receiver == ReceiverKind::This;
      if (owner == nullptr) {
        if (implicit && r.kind == MemberKind::Method) {
          if (host_static_import_matches(r.name)) {
            uses_static_wildcard_ = true;
          } else {
            fail(FeasibilityReason::LosesReferences, "call to " + r.name + " resolves outside the project");
          }
        }
        continue;
      }
      if (!implicit) {
        bool via_moved_receiver =
            (p != nullptr && r.receiver_text == p->name) ||
            (a_.route == MoveRoute::Field &&
             (r.receiver_text == a_.field_name || r.receiver_text == "this." + a_.field_name));
        if (!via_moved_receiver) check_reachable_from_target(*owner, r);
        continue;
      }
      if (!side.count(owner->qualified_name)) continue;
      MemberFacts facts = member_facts(*owner, r);
      if (facts.is_static) {
        check_reachable_from_target(*owner, r);
        qualify_owner(*owner);
        continue;
      }
      if (a_.route == MoveRoute::Field) {
        bool is_field = r.kind == MemberKind::Field && r.name == a_.field_name && owner == &host_;
        if (!is_field) {
          fail(FeasibilityReason::LosesReferences,
               "uses host member " + r.name + " besides field " + a_.field_name);
        } else if (r.is_write) {
          fail(FeasibilityReason::LosesReferences, "assigns field " + a_.field_name);
        }
        continue;
      }
      uses_host_ = true;
      check_reachable_from_target(*owner, r);
    }
    if (!body_.bare_this_offsets.empty()) {
      if (a_.route == MoveRoute::Field) {
        fail(FeasibilityReason::LosesReferences, "uses `this` as a value");
      } else {
        uses_host_ = true;
      }
    }
    if (p != nullptr) {
      for (const NameUse& u : body_.local_uses) {
        if (u.name == p->name && u.is_assigned) {
          fail(FeasibilityReason::LosesReferences, "parameter " + p->name + " is reassigned");
        }
        if (u.name == p->name && u.is_declaration) {
          fail(FeasibilityReason::LosesReferences, "parameter " + p->name + " is shadowed");
        }
      }
      if (text::ends_with(p->type_text, "...")) {
        fail(FeasibilityReason::TargetNotReachable, "varargs parameter cannot become the receiver");
      }
    }
  }

  void check_instance_call_sites() {
    bool varargs = !m_.parameters.empty() && text::ends_with(m_.parameters.back().type_text, "...");
    const FieldInfo* field = a_.route == MoveRoute::Field ? host_.find_field(a_.field_name) : nullptr;
    for (const CallSite& cs : a_.call_sites) {
      if (cs.inside_moved) continue;
      if (cs.ref.is_method_reference) {
        fail(FeasibilityReason::LosesReferences, "method reference to " + m_.name + " in " + cs.caller);
        continue;
      }
      if (cs.ref.receiver == ReceiverKind::Super) {
        fail(FeasibilityReason::LosesReferences, "super call to " + m_.name + " in " + cs.caller);
        continue;
      }
      if (a_.route == MoveRoute::Parameter && varargs &&
          cs.ref.arg_count != static_cast<int>(m_.parameters.size())) {
        fail(FeasibilityReason::LosesReferences, "varargs call in " + cs.caller + " cannot be rewritten");
      }
      if (field != nullptr) {
        const ClassInfo* caller = index_.find_class(cs.caller);
        if (caller != nullptr && !is_accessible(host_, field->visibility, *caller)) {
          fail(FeasibilityReason::LosesReferences,
               "field " + field->name + " is not accessible at the call site in " + cs.caller);
        }
      }
    }
  }

  void check_static_call_sites() {
    for (const CallSite& cs : a_.call_sites) {
      if (cs.inside_moved || cs.via_static_import) continue;
      if (cs.ref.receiver == ReceiverKind::Super) {
        fail(FeasibilityReason::LosesReferences, "super call to " + m_.name + " in " + cs.caller);
        continue;
      }
      if (a_.target_refs_by_file.count(cs.file)) continue;
      const ClassInfo* caller = index_.find_class(cs.caller);
      if (caller == nullptr) continue;
      auto tr = type_ref(index_, *caller, *t_);
      if (!tr || !class_accessible(index_, *t_, *caller)) {
        fail(FeasibilityReason::LosesReferences, t_->qualified_name + " cannot be named from " + cs.caller);
        continue;
      }
      a_.target_refs_by_file[cs.file] = *tr;
    }
  }

  void decide_host_param() {
    if (a_.route != MoveRoute::Parameter || !uses_host_) return;
    a_.host_param_added = true;
    auto tr = type_ref(index_, *t_, host_);
    if (!tr || !class_accessible(index_, host_, *t_)) {
      fail(FeasibilityReason::LosesReferences, host_.qualified_name + " cannot be named from " + t_->qualified_name);
      return;
    }
    a_.host_type_text = tr->text;
    if (!tr->import.empty()) need_import(tr->import);
    std::set<std::string> taken;
    for (const auto& p : m_.parameters) taken.insert(p.name);
    for (const auto& [name, _] : body_.locals) taken.insert(name);
    for (const auto& f : t_->fields) taken.insert(f.name);
    std::string base = lower_camel(host_.simple_name);
    std::string name = base;
    for (int n = 2; taken.count(name); ++n) name = base + std::to_string(n);
    a_.host_param_name = name;
  }

  void check_signature() {
    if (a_.route == MoveRoute::Parameter && a_.param_index) {
      std::vector<std::string> types;
      for (std::size_t i = 0; i < m_.parameters.size(); ++i) {
        if (i != *a_.param_index) types.push_back(m_.parameters[i].type_text);
      }
      if (a_.host_param_added) types.push_back(host_.simple_name);
      a_.new_signature = make_signature(m_.name, types);
    }
    if (t_->find_method(a_.new_signature)) {
      fail(FeasibilityReason::DuplicateSignature, t_->qualified_name + " already declares " + a_.new_signature);
    }
    auto related = super_type_closure(index_, *t_);
    auto subs = sub_type_closure(index_, *t_);
    related.insert(related.end(), subs.begin(), subs.end());
    for (const ClassInfo* c : related) {
      if (c->find_method(a_.new_signature)) {
        fail(FeasibilityReason::HierarchyConflict, c->qualified_name + " declares " + a_.new_signature);
      }
    }
  }

  void check_visibility() {
    Visibility needed = Visibility::Private;
    for (const CallSite& cs : a_.call_sites) {
      if (cs.inside_moved) continue;
      const ClassInfo* caller = index_.find_class(cs.caller);
      if (caller == nullptr) continue;
      Visibility v = Visibility::Private;
      if (same_top_level(index_, *caller, *t_)) {
        v = Visibility::Private;
      } else if (caller->package_name() == t_->package_name()) {
        v = Visibility::Package;
      } else {
        v = Visibility::Public;
      }
      if (rank(v) > rank(needed)) needed = v;
    }
    if (rank(needed) > rank(m_.visibility)) {
      a_.new_visibility = needed;
      a_.details.push_back("visibility widened from " + std::string(to_string(m_.visibility)) + " to " +
                           std::string(to_string(needed)));
    }
  }

  void check_type_dependencies() {
    const auto& toks = tokens_.lexed.tokens;
    const SourceFile* hf = file_of(index_, host_);
    const SourceFile* tf = file_of(index_, *t_);
    bool unaccounted = false;
    std::set<std::string> seen;
    for (std::size_t i = tokens_.decl.first; i <= tokens_.decl.last && i < toks.size(); ++i) {
      const Token& tok = toks[i];
      if (!tok.is_identifier()) continue;
      if (i > 0 && (toks[i - 1].is(".") || toks[i - 1].is("::"))) continue;
      std::string name(tok.text);
      if (!seen.insert(name).second) continue;
      bool upper = std::isupper(static_cast<unsigned char>(name[0])) != 0;
      if (upper) {
        if (auto q = resolve_type(index_, host_, name)) {
          check_project_type(name, index_.class_at(*q), tf);
          continue;
        }
      }
      if (hf != nullptr) {
        bool matched = false;
        for (const auto& imp : hf->imports) {
          if (imp.is_wildcard || last_segment(imp.name) != name) continue;
          matched = true;
          copy_import(imp, tf);
        }
        if (matched) continue;
      }
      if (upper) unaccounted = true;
    }
    if ((unaccounted || uses_static_wildcard_) && hf != nullptr) {
      for (const auto& imp : hf->imports) {
        if (!imp.is_wildcard || imp.name == t_->package_name()) continue;
        need_import((imp.is_static ? "static " : "") + imp.name + ".*");
      }
    }
  }

  void check_project_type(const std::string& name, const ClassInfo& c, const SourceFile* tf) {
    if (&c == t_) return;
    if (!class_accessible(index_, c, *t_)) {
      fail(FeasibilityReason::LosesReferences, c.qualified_name + " is not accessible from " + t_->qualified_name);
      return;
    }
    auto there = resolve_type(index_, *t_, name);
    if (there && *there == c.qualified_name) return;
    if (there) {
      fail(FeasibilityReason::LosesReferences, name + " means " + *there + " in " + t_->qualified_name);
      return;
    }
    if (tf != nullptr) {
      for (const auto& imp : tf->imports) {
        if (!imp.is_static && !imp.is_wildcard && last_segment(imp.name) == name) {
          fail(FeasibilityReason::LosesReferences, name + " is imported differently in " + t_->qualified_name);
          return;
        }
      }
    }
    if (c.package_path.empty()) {
      fail(FeasibilityReason::LosesReferences, c.qualified_name + " is in the default package");
      return;
    }
    need_import(c.qualified_name);
  }

  void copy_import(const ImportInfo& imp, const SourceFile* tf) {
    if (imp.is_static) {
      need_import("static " + imp.name);
      return;
    }
    std::string name = last_segment(imp.name);
    if (tf != nullptr) {
      for (const auto& other : tf->imports) {
        if (!other.is_static && !other.is_wildcard && last_segment(other.name) == name && other.name != imp.name) {
          fail(FeasibilityReason::LosesReferences, name + " is imported differently in " + t_->qualified_name);
          return;
        }
      }
    }
    if (auto there = resolve_type(index_, *t_, name); there && *there != imp.name) {
      fail(FeasibilityReason::LosesReferences, name + " means " + *there + " in " + t_->qualified_name);
      return;
    }
    need_import(imp.name);
  }

  const ProjectIndex& index_;
  const ClassInfo& host_;
  const MethodInfo& m_;
  MoveAnalysis& a_;
  const ClassInfo* t_ = nullptr;
  MethodTokens tokens_;
  BodyAnalysis body_;
  bool uses_host_ = false;
  bool uses_static_wildcard_ = false;
};

}  // namespace

MethodTokens lex_method(const ProjectIndex& index, const ClassInfo& cls, const MethodInfo& method) {
  MethodTokens mt;
  std::string_view src = index.file_content(cls.source_file);
  mt.lexed = java::lex(src);
  const auto& toks = mt.lexed.tokens;
  auto at_or_after = [&](std::size_t offset) {
    return static_cast<std::size_t>(
        std::lower_bound(toks.begin(), toks.end(), offset, [](const Token& t, std::size_t o) { return t.begin < o; }) -
        toks.begin());
  };
  std::size_t first = at_or_after(method.body_span.begin);
  std::size_t past = at_or_after(method.body_span.end);
  if (first >= past) return mt;
  mt.decl = TokenRange{first, past - 1};
  if (method.block_span) {
    std::size_t open = at_or_after(method.block_span->begin);
    std::size_t close = at_or_after(method.block_span->end);
    if (open < close && toks[open].is("{") && toks[close - 1].is("}")) {
      mt.block = TokenRange{open, close - 1};
      mt.has_block = true;
    }
  }
  return mt;
}

std::vector<CallSite> find_call_sites(const ProjectIndex& index, const ClassInfo& host, const MethodInfo& method) {
  std::vector<CallSite> out;
  std::string static_single = host.qualified_name + "." + method.name;
  for (const auto& [name, c] : index.classes) {
    const SourceFile* f = file_of(index, c);
    bool static_imported = false;
    if (method.is_static && f != nullptr) {
      for (const auto& imp : f->imports) {
        if (!imp.is_static) continue;
        if ((!imp.is_wildcard && imp.name == static_single) || (imp.is_wildcard && imp.name == host.qualified_name)) {
          static_imported = true;
        }
      }
    }
    auto consider = [&](const MemberRef& r, bool inside) {
      if (r.kind != MemberKind::Method || r.name != method.name) return;
      if (r.owner == host.qualified_name && arity_matches(method, r.arg_count)) {
        out.push_back(CallSite{name, c.source_file, r, inside, false});
      } else if (static_imported && r.owner.empty() && r.receiver == ReceiverKind::Implicit) {
        out.push_back(CallSite{name, c.source_file, r, inside, true});
      }
    };
    for (const auto& m : c.methods) {
      bool inside = &c == &host && m.signature == method.signature;
      for (const auto& r : m.referenced_members) consider(r, inside);
    }
    for (const auto& r : c.initializer_references) consider(r, false);
  }
  std::sort(out.begin(), out.end(), [](const CallSite& a, const CallSite& b) {
    return std::tie(a.file, a.ref.offset) < std::tie(b.file, b.ref.offset);
  });
  return out;
}

std::optional<TypeRef> type_ref(const ProjectIndex& index, const ClassInfo& from, const ClassInfo& cls) {
  const ClassInfo& top = top_level(index, cls);
  std::string suffix = cls.qualified_name.substr(top.qualified_name.size());
  if (same_top_level(index, from, cls)) return TypeRef{cls.simple_name, ""};
  auto resolved = resolve_type(index, from, top.simple_name);
  if (resolved && *resolved == top.qualified_name) return TypeRef{top.simple_name + suffix, ""};
  if (top.package_path.empty()) return std::nullopt;
  if (resolved) return TypeRef{cls.qualified_name, ""};
  if (const SourceFile* f = file_of(index, from)) {
    for (const auto& imp : f->imports) {
      if (!imp.is_static && !imp.is_wildcard && last_segment(imp.name) == top.simple_name) {
        return TypeRef{cls.qualified_name, ""};
      }
    }
  }
  return TypeRef{top.simple_name + suffix, top.qualified_name};
}

MoveAnalysis analyze_move(const ProjectIndex& index, const MethodRef& method, std::string_view target) {
  const ClassInfo& host = index.class_at(method.class_name);
  const MethodInfo& m = find_method(index, method);
  MoveAnalysis a;
  a.method = method;
  a.target = std::string(target);
  Analyzer(index, host, m, a).run();
  return a;
}

}  // namespace mover
