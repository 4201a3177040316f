#include "mover/code_model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <nlohmann/json.hpp>
#include <system_error>

#include "mover/body_analysis.hpp"
#include "mover/error.hpp"
#include "mover/text.hpp"

namespace mover {

namespace fs = std::filesystem;
using java::MethodDecl;
using java::TokenRange;
using java::TypeDecl;
using java::TypeKind;

std::string ClassInfo::package_name() const { return text::join(package_path, "."); }

const MethodInfo* ClassInfo::find_method(std::string_view signature) const {
  for (const auto& m : methods) {
    if (m.signature == signature) return &m;
  }
  return nullptr;
}

const FieldInfo* ClassInfo::find_field(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

const ClassInfo* ProjectIndex::find_class(std::string_view qualified) const {
  auto it = classes.find(std::string(qualified));
  return it == classes.end() ? nullptr : &it->second;
}

const ClassInfo& ProjectIndex::class_at(std::string_view qualified) const {
  const ClassInfo* c = find_class(qualified);
  if (c == nullptr) {
    throw Error(ErrorCode::UnknownClass, std::string(qualified));
  }
  return *c;
}

std::string_view ProjectIndex::file_content(const std::string& path) const {
  auto it = contents.find(path);
  if (it == contents.end()) {
    throw Error(ErrorCode::IoError, "no content loaded for " + path);
  }
  return it->second;
}

std::size_t ProjectIndex::method_count() const {
  std::size_t n = 0;
  for (const auto& [_, c] : classes) n += c.methods.size();
  return n;
}

std::string_view to_string(Visibility v) {
  switch (v) {
    case Visibility::Private: return "private";
    case Visibility::Package: return "package";
    case Visibility::Protected: return "protected";
    case Visibility::Public: return "public";
  }
  return "package";
}

std::string_view to_string(MemberKind k) { return k == MemberKind::Field ? "field" : "method"; }

std::string_view to_string(ReceiverKind k) {
  switch (k) {
    case ReceiverKind::Implicit: return "implicit";
    case ReceiverKind::This: return "this";
    case ReceiverKind::Super: return "super";
    case ReceiverKind::Variable: return "variable";
    case ReceiverKind::Type: return "type";
    case ReceiverKind::Expression: return "expression";
  }
  return "expression";
}

namespace {

Visibility visibility_of(const java::Modifiers& mods, bool in_interface) {
  if (mods.has("public")) return Visibility::Public;
  if (mods.has("protected")) return Visibility::Protected;
  if (mods.has("private")) return Visibility::Private;
  return in_interface ? Visibility::Public : Visibility::Package;
}

bool is_test_annotation(std::string_view a) {
  return a == "Test" || a == "ParameterizedTest" || a == "RepeatedTest" || a == "TestFactory" ||
         a == "TestTemplate" || a == "BeforeEach" || a == "AfterEach" || a == "BeforeAll" || a == "AfterAll" ||
         a == "Before" || a == "After";
}

bool has_prefix_word(std::string_view name, std::string_view prefix) {
  if (!text::starts_with(name, prefix) || name.size() == prefix.size()) return false;
  char c = name[prefix.size()];
  return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
}

bool path_under_test_root(const fs::path& root, const fs::path& file) {
  auto is_test_dir = [](const std::string& s) { return s == "test" || s == "tests"; };
  fs::path rel = file.lexically_relative(root);
  for (const auto& part : rel.parent_path()) {
    if (is_test_dir(part.string())) return true;
  }
  fs::path r = root.lexically_normal();
  std::string last = r.filename().string();
  if (last.empty()) last = r.parent_path().filename().string();
  if (is_test_dir(last)) return true;
  return last == "java" && is_test_dir(r.parent_path().filename().string());
}

struct PendingClass {
  std::string qualified;
  const TypeDecl* decl;
  std::string file;
};

struct ParsedFile {
  java::CompilationUnit unit;
};

class IndexBuilder {
 public:
  explicit IndexBuilder(ProjectIndex& index) : index_(index) {}

  void add_root(const fs::path& root) {
    std::error_code ec;
    if (!fs::exists(root, ec) || ec) {
      throw Error(ErrorCode::IoError, "source root does not exist: " + root.string());
    }
    std::vector<fs::path> files;
    if (fs::is_regular_file(root, ec)) {
      files.push_back(root);
    } else {
      fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
      if (ec) {
        throw Error(ErrorCode::IoError, "cannot read source root " + root.string() + ": " + ec.message());
      }
      for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        const auto& entry = *it;
        if (entry.is_directory() && entry.path().filename().string().starts_with(".")) {
          it.disable_recursion_pending();
          continue;
        }
        if (entry.is_regular_file() && entry.path().extension() == ".java") {
          files.push_back(entry.path());
        }
      }
    }
    std::sort(files.begin(), files.end());
    index_.source_roots.push_back(root.generic_string());
    for (const auto& f : files) {
      add_file(root, f);
    }
  }

  void finish() {
    resolve_declarations();
    analyze_bodies();
    detect_overrides();
    detect_getters_setters();
  }

 private:
  void add_file(const fs::path& root, const fs::path& file) {
    std::string path = file.generic_string();
    std::string content;
    try {
      content = text::read_file(file);
    } catch (const Error& e) {
      index_.warnings.push_back({path, e.what()});
      return;
    }
    auto [it, inserted] = index_.contents.emplace(path, std::move(content));
    if (!inserted) return;
    std::string_view src = it->second;
    auto& parsed = parsed_[path];
    parsed.unit = java::parse(src);
    if (!parsed.unit.ok()) {
      const auto& err = parsed.unit.errors.front();
      std::size_t line = 1 + static_cast<std::size_t>(std::count(src.begin(), src.begin() + static_cast<long>(
                                                                                      std::min(err.offset, src.size())),
                                                                  '\n'));
      index_.warnings.push_back({path, "line " + std::to_string(line) + ": " + err.message});
      parsed_.erase(path);
      index_.contents.erase(it);
      return;
    }
    SourceFile sf;
    sf.path = path;
    sf.root = root.generic_string();
    sf.package_name = parsed.unit.package_name;
    sf.sha256 = text::sha256_hex(src);
    sf.under_test_root = path_under_test_root(root, file);
    for (const auto& imp : parsed.unit.imports) {
      sf.imports.push_back(ImportInfo{imp.name, imp.is_static, imp.is_wildcard, imp.span});
    }
    for (const auto& t : parsed.unit.types) {
      register_type(sf, t, "", "");
    }
    index_.packages.insert(sf.package_name);
    index_.files[path] = std::move(sf);
  }

  void register_type(SourceFile& sf, const TypeDecl& t, const std::string& outer_qualified,
                     const std::string& outer_simple) {
    if (t.is_inner) return;
    std::string simple = outer_simple.empty() ? t.name : outer_simple + "." + t.name;
    std::string qualified = sf.package_name.empty() ? simple : sf.package_name + "." + simple;
    if (index_.classes.count(qualified)) {
      index_.warnings.push_back({sf.path, "duplicate class " + qualified + " ignored"});
      return;
    }
    ClassInfo c;
    c.qualified_name = qualified;
    c.simple_name = simple;
    if (!sf.package_name.empty()) c.package_path = text::split(sf.package_name, '.');
    c.source_file = sf.path;
    c.body_span = t.decl;
    c.block_span = t.body;
    c.is_interface = t.kind == TypeKind::Interface || t.kind == TypeKind::Annotation;
    c.is_enum = t.kind == TypeKind::Enum;
    c.is_record = t.kind == TypeKind::Record;
    c.is_abstract = t.modifiers.has("abstract");
    c.visibility = visibility_of(t.modifiers, false);
    c.enclosing = outer_qualified;
    std::string_view src = index_.contents.at(sf.path);
    if (t.doc) c.docstring = std::string(src.substr(t.doc->begin, t.doc->size()));
    bool in_interface = c.is_interface;
    for (const auto& p : t.record_components) {
      FieldInfo f;
      f.name = p.name;
      f.type_text = p.type_text;
      f.declared_type = p.type_text;
      f.is_final = true;
      f.visibility = Visibility::Private;
      f.decl_span = p.span;
      c.fields.push_back(std::move(f));
    }
    for (const auto& fd : t.fields) {
      if (c.find_field(fd.name)) continue;
      FieldInfo f;
      f.name = fd.name;
      f.type_text = fd.type_text;
      f.declared_type = fd.type_text;
      f.is_static = fd.modifiers.has("static") || in_interface || fd.is_enum_constant;
      f.is_final = fd.modifiers.has("final") || in_interface || fd.is_enum_constant;
      f.visibility = fd.is_enum_constant ? Visibility::Public : visibility_of(fd.modifiers, in_interface);
      f.decl_span = fd.decl;
      c.fields.push_back(std::move(f));
    }
    for (const auto& md : t.methods) {
      MethodInfo m;
      m.name = md.name;
      m.return_type = md.return_type;
      m.is_constructor = md.is_constructor;
      m.modifiers = md.modifiers.keywords;
      m.annotations = md.modifiers.annotations;
      m.is_static = md.modifiers.has("static");
      m.visibility = visibility_of(md.modifiers, in_interface);
      m.is_abstract = md.modifiers.has("abstract") ||
                      (in_interface && !md.body && !md.modifiers.has("static") && !md.modifiers.has("default"));
      m.body_span = md.decl;
      m.block_span = md.body;
      m.params_span = md.params_span;
      m.name_offset = md.name_offset;
      for (const auto& p : md.params) {
        m.parameters.push_back(Parameter{p.name, p.type_text, p.type_text, p.span});
      }
      if (c.is_record && md.is_constructor && md.params.empty() && md.params_span.size() == 0) {
        for (const auto& p : t.record_components) {
          m.parameters.push_back(Parameter{p.name, p.type_text, p.type_text, p.span});
        }
      }
      std::vector<std::string> erased;
      for (const auto& p : m.parameters) erased.push_back(text::erase_type(p.type_text));
      m.signature = m.name + "(" + text::join(erased, ",") + ")";
      m.is_test = sf.under_test_root ||
                  std::any_of(m.annotations.begin(), m.annotations.end(), is_test_annotation) ||
                  (has_prefix_word(m.name, "test") &&
                   (text::ends_with(t.name, "Test") || text::ends_with(t.name, "Tests")));
      m.is_empty_or_comment_only = !md.body_tokens || md.body_tokens->last == md.body_tokens->first + 1;
      c.methods.push_back(std::move(m));
      decls_[qualified].push_back(&md);
    }
    sf.classes.push_back(qualified);
    pending_.push_back(PendingClass{qualified, &t, sf.path});
    index_.classes.emplace(qualified, std::move(c));
    for (const auto& n : t.nested) {
      register_type(sf, n, qualified, simple);
    }
  }

  std::string resolve_declared(const ClassInfo& ctx, const std::string& type_text) {
    if (type_text.find('[') != std::string::npos || type_text.find("...") != std::string::npos) {
      return type_text;
    }
    std::string base = text::base_type_name(type_text);
    if (base.empty()) return type_text;
    auto q = resolve_type(index_, ctx, base);
    if (q) {
      index_.name_resolution[{ctx.qualified_name, base}] = *q;
      return *q;
    }
    return type_text;
  }

  void resolve_declarations() {
    for (const auto& p : pending_) {
      ClassInfo& c = index_.classes.at(p.qualified);
      std::vector<std::string> supers;
      for (const auto& s : p.decl->extends) supers.push_back(s);
      for (const auto& s : p.decl->implements) supers.push_back(s);
      for (const auto& s : supers) {
        std::string base = text::base_type_name(s);
        auto q = resolve_type(index_, c, base);
        if (q) index_.name_resolution[{c.qualified_name, base}] = *q;
        c.super_types.push_back(q ? *q : base);
      }
    }
    for (const auto& p : pending_) {
      ClassInfo& c = index_.classes.at(p.qualified);
      for (auto& f : c.fields) f.declared_type = resolve_declared(c, f.type_text);
      for (auto& m : c.methods) {
        for (auto& param : m.parameters) param.declared_type = resolve_declared(c, param.type_text);
      }
    }
  }

  void analyze_bodies() {
    // Computed against the read-only index, then written back in one pass.
    std::map<std::string, std::vector<BodyAnalysis>> per_method;
    std::map<std::string, std::vector<MemberRef>> per_class_init;
    for (const auto& p : pending_) {
      const ClassInfo& c = index_.classes.at(p.qualified);
      const auto& tokens = parsed_.at(p.file).unit.lexed.tokens;
      auto& results = per_method[p.qualified];
      const auto& decls = decls_[p.qualified];
      for (std::size_t i = 0; i < c.methods.size(); ++i) {
        const MethodDecl* md = decls[i];
        if (md->body_tokens) {
          results.push_back(analyze_body(index_, c, tokens, *md->body_tokens, c.methods[i].parameters));
        } else {
          results.emplace_back();
        }
      }
      auto& init_refs = per_class_init[p.qualified];
      auto add_range = [&](TokenRange r) {
        auto a = analyze_body(index_, c, tokens, r, {});
        init_refs.insert(init_refs.end(), a.references.begin(), a.references.end());
      };
      for (const auto& f : p.decl->fields) {
        if (f.initializer) add_range(*f.initializer);
      }
      for (const auto& r : p.decl->initializer_blocks) add_range(r);
    }
    for (auto& [name, results] : per_method) {
      ClassInfo& c = index_.classes.at(name);
      for (std::size_t i = 0; i < c.methods.size(); ++i) {
        c.methods[i].referenced_members = std::move(results[i].references);
        c.methods[i].uses_bare_this = !results[i].bare_this_offsets.empty();
      }
      c.initializer_references = std::move(per_class_init[name]);
    }
  }

  void detect_overrides() {
    for (auto& [name, c] : index_.classes) {
      auto supers = super_type_closure(index_, c);
      auto subs = sub_type_closure(index_, c);
      for (auto& m : c.methods) {
        if (m.is_constructor || m.is_static) continue;
        if (std::find(m.annotations.begin(), m.annotations.end(), "Override") != m.annotations.end()) {
          m.is_override = true;
        }
        for (const ClassInfo* s : supers) {
          const MethodInfo* other = s->find_method(m.signature);
          if (other && !other->is_static && !other->is_constructor) m.is_override = true;
        }
        for (const ClassInfo* s : subs) {
          const MethodInfo* other = s->find_method(m.signature);
          if (other && !other->is_static && !other->is_constructor) m.is_overridden = true;
        }
      }
    }
  }

  void detect_getters_setters() {
    for (const auto& p : pending_) {
      ClassInfo& c = index_.classes.at(p.qualified);
      const auto& tokens = parsed_.at(p.file).unit.lexed.tokens;
      const auto& decls = decls_[p.qualified];
      for (std::size_t i = 0; i < c.methods.size(); ++i) {
        MethodInfo& m = c.methods[i];
        const MethodDecl* md = decls[i];
        if (m.is_constructor || !md->body_tokens) continue;
        bool named = has_prefix_word(m.name, "get") || has_prefix_word(m.name, "set") || has_prefix_word(m.name, "is");
        if (!named) continue;
        m.is_getter_setter = single_field_access(c, tokens, *md->body_tokens);
      }
    }
  }

  bool is_own_field(const ClassInfo& c, std::string_view name) const {
    if (c.find_field(name)) return true;
    for (const ClassInfo* s : super_type_closure(index_, c)) {
      if (s->find_field(name)) return true;
    }
    return false;
  }

  /// Body is exactly `return [this.]f;` or `[this.]f = <expr>;` for a host field f.
  bool single_field_access(const ClassInfo& c, const std::vector<java::Token>& toks, TokenRange body) const {
    std::size_t i = body.first + 1;
    std::size_t end = body.last;  // '}'
    if (i >= end) return false;
    // exactly one top-level statement
    std::size_t semis = 0;
    int depth = 0;
    for (std::size_t k = i; k < end; ++k) {
      if (toks[k].is("(") || toks[k].is("{") || toks[k].is("[")) ++depth;
      if (toks[k].is(")") || toks[k].is("}") || toks[k].is("]")) --depth;
      if (depth == 0 && toks[k].is(";")) ++semis;
    }
    if (semis != 1 || !toks[end - 1].is(";")) return false;
    auto field_at = [&](std::size_t k) -> std::optional<std::size_t> {
      if (toks[k].is("this") && k + 2 < end && toks[k + 1].is(".") && toks[k + 2].is_identifier()) {
        return is_own_field(c, toks[k + 2].text) ? std::optional<std::size_t>(k + 3) : std::nullopt;
      }
      if (toks[k].is_identifier() && is_own_field(c, toks[k].text)) return k + 1;
      return std::nullopt;
    };
    if (toks[i].is("return")) {
      auto after = field_at(i + 1);
      return after && *after == end - 1;
    }
    auto after = field_at(i);
    return after && toks[*after].is("=") && *after + 1 < end - 1;
  }

  ProjectIndex& index_;
  std::map<std::string, ParsedFile> parsed_;
  std::vector<PendingClass> pending_;
  std::map<std::string, std::vector<const MethodDecl*>> decls_;
};

}  // namespace

ProjectIndex build_index(const std::vector<fs::path>& source_roots) {
  ProjectIndex index;
  IndexBuilder builder(index);
  for (const auto& root : source_roots) {
    builder.add_root(root);
  }
  builder.finish();
  if (index.classes.empty()) {
    throw Error(ErrorCode::EmptyProject, "no Java classes found under the given source roots");
  }
  return index;
}

std::optional<std::string> resolve_type(const ProjectIndex& index, const ClassInfo& context,
                                        std::string_view simple_name) {
  std::string name(simple_name);
  if (name.empty()) return std::nullopt;
  if (name.find('.') != std::string::npos) {
    if (index.find_class(name)) return name;
    auto dot = name.find('.');
    auto head = resolve_type(index, context, name.substr(0, dot));
    if (head) {
      std::string candidate = *head + name.substr(dot);
      if (index.find_class(candidate)) return candidate;
    }
    return std::nullopt;
  }
  // self, then member types of this class and its enclosing classes
  for (const ClassInfo* c = &context; c != nullptr;
       c = c->enclosing.empty() ? nullptr : index.find_class(c->enclosing)) {
    auto last_dot = c->qualified_name.rfind('.');
    std::string last = last_dot == std::string::npos ? c->qualified_name : c->qualified_name.substr(last_dot + 1);
    if (last == name) return c->qualified_name;
    std::string member = c->qualified_name + "." + name;
    if (index.find_class(member)) return member;
    for (const ClassInfo* s : super_type_closure(index, *c)) {
      std::string inherited = s->qualified_name + "." + name;
      if (index.find_class(inherited)) return inherited;
    }
  }
  auto file_it = index.files.find(context.source_file);
  const std::vector<ImportInfo>* imports = file_it == index.files.end() ? nullptr : &file_it->second.imports;
  if (imports) {
    for (const auto& imp : *imports) {
      if (imp.is_static || imp.is_wildcard) continue;
      auto dot = imp.name.rfind('.');
      std::string last = dot == std::string::npos ? imp.name : imp.name.substr(dot + 1);
      if (last == name) {
        if (index.find_class(imp.name)) return imp.name;
        return std::nullopt;  // imported from outside the project
      }
    }
  }
  std::string pkg = context.package_name();
  std::string same_package = pkg.empty() ? name : pkg + "." + name;
  if (index.find_class(same_package)) return same_package;
  if (imports) {
    for (const auto& imp : *imports) {
      if (imp.is_static || !imp.is_wildcard) continue;
      std::string candidate = imp.name + "." + name;
      if (index.find_class(candidate)) return candidate;
    }
  }
  return std::nullopt;
}

std::string_view class_text(const ProjectIndex& index, const ClassInfo& cls) {
  std::string_view src = index.file_content(cls.source_file);
  return src.substr(cls.body_span.begin, cls.body_span.size());
}

std::string_view method_text(const ProjectIndex& index, const ClassInfo& cls, const MethodInfo& method) {
  std::string_view src = index.file_content(cls.source_file);
  return src.substr(method.body_span.begin, method.body_span.size());
}

std::string class_text_without_method(const ProjectIndex& index, const ClassInfo& cls, const MethodInfo& method) {
  bool owned = std::any_of(cls.methods.begin(), cls.methods.end(),
                           [&](const MethodInfo& m) { return &m == &method || m.signature == method.signature; });
  if (!owned || !cls.body_span.contains(method.body_span)) {
    throw Error(ErrorCode::MethodNotInClass, method.signature + " is not declared in " + cls.qualified_name);
  }
  std::string_view src = index.file_content(cls.source_file);
  std::string out;
  out.reserve(cls.body_span.size() - method.body_span.size());
  out.append(src.substr(cls.body_span.begin, method.body_span.begin - cls.body_span.begin));
  out.append(src.substr(method.body_span.end, cls.body_span.end - method.body_span.end));
  return out;
}

const MethodInfo& find_method(const ProjectIndex& index, const MethodRef& ref) {
  const ClassInfo& c = index.class_at(ref.class_name);
  const MethodInfo* m = c.find_method(ref.signature);
  if (m == nullptr) {
    throw Error(ErrorCode::UnknownMethod, ref.class_name + "#" + ref.signature);
  }
  return *m;
}

std::vector<const ClassInfo*> super_type_closure(const ProjectIndex& index, const ClassInfo& cls) {
  std::vector<const ClassInfo*> out;
  std::set<std::string> seen{cls.qualified_name};
  std::deque<const ClassInfo*> queue{&cls};
  while (!queue.empty()) {
    const ClassInfo* cur = queue.front();
    queue.pop_front();
    for (const auto& s : cur->super_types) {
      const ClassInfo* sc = index.find_class(s);
      if (sc && seen.insert(sc->qualified_name).second) {
        out.push_back(sc);
        queue.push_back(sc);
      }
    }
  }
  return out;
}

bool is_subtype_of(const ProjectIndex& index, const ClassInfo& cls, std::string_view ancestor) {
  for (const ClassInfo* s : super_type_closure(index, cls)) {
    if (s->qualified_name == ancestor) return true;
  }
  return false;
}

std::vector<const ClassInfo*> sub_type_closure(const ProjectIndex& index, const ClassInfo& cls) {
  std::vector<const ClassInfo*> out;
  for (const auto& [name, c] : index.classes) {
    if (name != cls.qualified_name && is_subtype_of(index, c, cls.qualified_name)) out.push_back(&c);
  }
  return out;
}

bool is_accessible(const ClassInfo& owner, Visibility visibility, const ClassInfo& from) {
  switch (visibility) {
    case Visibility::Public:
      return true;
    case Visibility::Private: {
      if (owner.qualified_name == from.qualified_name) return true;
      // nested classes share private access with their top-level class
      auto top = [](const ClassInfo& c) {
        std::string s = c.simple_name;
        auto dot = s.find('.');
        return c.package_name() + "|" + (dot == std::string::npos ? s : s.substr(0, dot));
      };
      return top(owner) == top(from);
    }
    case Visibility::Package:
    case Visibility::Protected:
      return owner.package_name() == from.package_name();
  }
  return false;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json span_json(const Span& s) { return json::array({s.begin, s.end}); }
Span span_from(const json& j) { return Span{j.at(0).get<std::size_t>(), j.at(1).get<std::size_t>()}; }

Visibility visibility_from(const std::string& s) {
  if (s == "private") return Visibility::Private;
  if (s == "protected") return Visibility::Protected;
  if (s == "public") return Visibility::Public;
  return Visibility::Package;
}

ReceiverKind receiver_from(const std::string& s) {
  if (s == "implicit") return ReceiverKind::Implicit;
  if (s == "this") return ReceiverKind::This;
  if (s == "super") return ReceiverKind::Super;
  if (s == "variable") return ReceiverKind::Variable;
  if (s == "type") return ReceiverKind::Type;
  return ReceiverKind::Expression;
}

json ref_json(const MemberRef& r) {
  json j{{"kind", to_string(r.kind)},
         {"owner", r.owner},
         {"name", r.name},
         {"offset", r.offset},
         {"receiver", to_string(r.receiver)},
         {"receiver_span", span_json(r.receiver_span)},
         {"receiver_text", r.receiver_text},
         {"arg_count", r.arg_count},
         {"args_span", span_json(r.args_span)},
         {"is_method_reference", r.is_method_reference},
         {"is_write", r.is_write}};
  return j;
}

MemberRef ref_from(const json& j) {
  MemberRef r;
  r.kind = j.at("kind").get<std::string>() == "field" ? MemberKind::Field : MemberKind::Method;
  r.owner = j.at("owner").get<std::string>();
  r.name = j.at("name").get<std::string>();
  r.offset = j.at("offset").get<std::size_t>();
  r.receiver = receiver_from(j.at("receiver").get<std::string>());
  r.receiver_span = span_from(j.at("receiver_span"));
  r.receiver_text = j.at("receiver_text").get<std::string>();
  r.arg_count = j.at("arg_count").get<int>();
  r.args_span = span_from(j.at("args_span"));
  r.is_method_reference = j.at("is_method_reference").get<bool>();
  r.is_write = j.at("is_write").get<bool>();
  return r;
}

json method_json(const MethodInfo& m) {
  json params = json::array();
  for (const auto& p : m.parameters) {
    params.push_back({{"name", p.name}, {"declared_type", p.declared_type}, {"type_text", p.type_text},
                      {"span", span_json(p.span)}});
  }
  json refs = json::array();
  for (const auto& r : m.referenced_members) refs.push_back(ref_json(r));
  json j{{"name", m.name},
         {"signature", m.signature},
         {"return_type", m.return_type},
         {"parameters", params},
         {"visibility", to_string(m.visibility)},
         {"is_static", m.is_static},
         {"is_constructor", m.is_constructor},
         {"is_abstract", m.is_abstract},
         {"is_override", m.is_override},
         {"is_overridden", m.is_overridden},
         {"is_getter_setter", m.is_getter_setter},
         {"is_test", m.is_test},
         {"is_empty_or_comment_only", m.is_empty_or_comment_only},
         {"uses_bare_this", m.uses_bare_this},
         {"annotations", m.annotations},
         {"modifiers", m.modifiers},
         {"body_span", span_json(m.body_span)},
         {"block_span", m.block_span ? span_json(*m.block_span) : json(nullptr)},
         {"params_span", span_json(m.params_span)},
         {"name_offset", m.name_offset},
         {"referenced_members", refs}};
  return j;
}

MethodInfo method_from(const json& j) {
  MethodInfo m;
  m.name = j.at("name").get<std::string>();
  m.signature = j.at("signature").get<std::string>();
  m.return_type = j.at("return_type").get<std::string>();
  for (const auto& p : j.at("parameters")) {
    m.parameters.push_back(Parameter{p.at("name").get<std::string>(), p.at("declared_type").get<std::string>(),
                                     p.at("type_text").get<std::string>(), span_from(p.at("span"))});
  }
  m.visibility = visibility_from(j.at("visibility").get<std::string>());
  m.is_static = j.at("is_static").get<bool>();
  m.is_constructor = j.at("is_constructor").get<bool>();
  m.is_abstract = j.at("is_abstract").get<bool>();
  m.is_override = j.at("is_override").get<bool>();
  m.is_overridden = j.at("is_overridden").get<bool>();
  m.is_getter_setter = j.at("is_getter_setter").get<bool>();
  m.is_test = j.at("is_test").get<bool>();
  m.is_empty_or_comment_only = j.at("is_empty_or_comment_only").get<bool>();
  m.uses_bare_this = j.at("uses_bare_this").get<bool>();
  m.annotations = j.at("annotations").get<std::vector<std::string>>();
  m.modifiers = j.at("modifiers").get<std::vector<std::string>>();
  m.body_span = span_from(j.at("body_span"));
  if (!j.at("block_span").is_null()) m.block_span = span_from(j.at("block_span"));
  m.params_span = span_from(j.at("params_span"));
  m.name_offset = j.at("name_offset").get<std::size_t>();
  for (const auto& r : j.at("referenced_members")) m.referenced_members.push_back(ref_from(r));
  return m;
}

json class_json(const ClassInfo& c) {
  json fields = json::array();
  for (const auto& f : c.fields) {
    fields.push_back({{"name", f.name},
                      {"declared_type", f.declared_type},
                      {"type_text", f.type_text},
                      {"is_static", f.is_static},
                      {"is_final", f.is_final},
                      {"visibility", to_string(f.visibility)},
                      {"decl_span", span_json(f.decl_span)}});
  }
  json methods = json::array();
  for (const auto& m : c.methods) methods.push_back(method_json(m));
  json init_refs = json::array();
  for (const auto& r : c.initializer_references) init_refs.push_back(ref_json(r));
  return json{{"qualified_name", c.qualified_name},
              {"simple_name", c.simple_name},
              {"package_path", c.package_path},
              {"fields", fields},
              {"methods", methods},
              {"docstring", c.docstring ? json(*c.docstring) : json(nullptr)},
              {"source_file", c.source_file},
              {"body_span", span_json(c.body_span)},
              {"block_span", span_json(c.block_span)},
              {"is_interface", c.is_interface},
              {"is_enum", c.is_enum},
              {"is_record", c.is_record},
              {"is_abstract", c.is_abstract},
              {"visibility", to_string(c.visibility)},
              {"enclosing", c.enclosing},
              {"super_types", c.super_types},
              {"initializer_references", init_refs}};
}

ClassInfo class_from(const json& j) {
  ClassInfo c;
  c.qualified_name = j.at("qualified_name").get<std::string>();
  c.simple_name = j.at("simple_name").get<std::string>();
  c.package_path = j.at("package_path").get<std::vector<std::string>>();
  for (const auto& f : j.at("fields")) {
    FieldInfo fi;
    fi.name = f.at("name").get<std::string>();
    fi.declared_type = f.at("declared_type").get<std::string>();
    fi.type_text = f.at("type_text").get<std::string>();
    fi.is_static = f.at("is_static").get<bool>();
    fi.is_final = f.at("is_final").get<bool>();
    fi.visibility = visibility_from(f.at("visibility").get<std::string>());
    fi.decl_span = span_from(f.at("decl_span"));
    c.fields.push_back(std::move(fi));
  }
  for (const auto& m : j.at("methods")) c.methods.push_back(method_from(m));
  if (!j.at("docstring").is_null()) c.docstring = j.at("docstring").get<std::string>();
  c.source_file = j.at("source_file").get<std::string>();
  c.body_span = span_from(j.at("body_span"));
  c.block_span = span_from(j.at("block_span"));
  c.is_interface = j.at("is_interface").get<bool>();
  c.is_enum = j.at("is_enum").get<bool>();
  c.is_record = j.at("is_record").get<bool>();
  c.is_abstract = j.at("is_abstract").get<bool>();
  c.visibility = visibility_from(j.at("visibility").get<std::string>());
  c.enclosing = j.at("enclosing").get<std::string>();
  c.super_types = j.at("super_types").get<std::vector<std::string>>();
  for (const auto& r : j.at("initializer_references")) c.initializer_references.push_back(ref_from(r));
  return c;
}

}  // namespace

nlohmann::json to_json(const ProjectIndex& index) {
  json classes = json::object();
  for (const auto& [name, c] : index.classes) classes[name] = class_json(c);
  json files = json::object();
  for (const auto& [path, f] : index.files) {
    json imports = json::array();
    for (const auto& imp : f.imports) {
      imports.push_back({{"name", imp.name},
                         {"is_static", imp.is_static},
                         {"is_wildcard", imp.is_wildcard},
                         {"span", span_json(imp.span)}});
    }
    files[path] = {{"path", f.path},         {"root", f.root},       {"package_name", f.package_name},
                   {"imports", imports},      {"sha256", f.sha256},   {"classes", f.classes},
                   {"under_test_root", f.under_test_root}};
  }
  json resolution = json::array();
  for (const auto& [key, value] : index.name_resolution) {
    resolution.push_back({{"context", key.first}, {"name", key.second}, {"qualified", value}});
  }
  json warnings = json::array();
  for (const auto& w : index.warnings) warnings.push_back({{"file", w.file}, {"message", w.message}});
  return json{{"schema_version", ProjectIndex::kSchemaVersion},
              {"source_roots", index.source_roots},
              {"packages", index.packages},
              {"classes", classes},
              {"files", files},
              {"name_resolution", resolution},
              {"warnings", warnings}};
}

ProjectIndex index_from_json(const nlohmann::json& j) {
  if (j.value("schema_version", 0) != ProjectIndex::kSchemaVersion) {
    throw Error(ErrorCode::InvalidArgument, "unsupported index schema version");
  }
  ProjectIndex index;
  index.source_roots = j.at("source_roots").get<std::vector<std::string>>();
  index.packages = j.at("packages").get<std::set<std::string>>();
  for (const auto& [name, c] : j.at("classes").items()) index.classes.emplace(name, class_from(c));
  for (const auto& [path, f] : j.at("files").items()) {
    SourceFile sf;
    sf.path = f.at("path").get<std::string>();
    sf.root = f.at("root").get<std::string>();
    sf.package_name = f.at("package_name").get<std::string>();
    sf.sha256 = f.at("sha256").get<std::string>();
    sf.classes = f.at("classes").get<std::vector<std::string>>();
    sf.under_test_root = f.at("under_test_root").get<bool>();
    for (const auto& imp : f.at("imports")) {
      sf.imports.push_back(ImportInfo{imp.at("name").get<std::string>(), imp.at("is_static").get<bool>(),
                                      imp.at("is_wildcard").get<bool>(), span_from(imp.at("span"))});
    }
    index.files.emplace(path, std::move(sf));
  }
  for (const auto& r : j.at("name_resolution")) {
    index.name_resolution[{r.at("context").get<std::string>(), r.at("name").get<std::string>()}] =
        r.at("qualified").get<std::string>();
  }
  for (const auto& w : j.at("warnings")) {
    index.warnings.push_back({w.at("file").get<std::string>(), w.at("message").get<std::string>()});
  }
  for (const auto& [path, f] : index.files) {
    std::string content = text::read_file(path);
    if (text::sha256_hex(content) != f.sha256) {
      throw Error(ErrorCode::StaleIndex, path + " changed since the index was written");
    }
    index.contents.emplace(path, std::move(content));
  }
  return index;
}

}  // namespace mover
