#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mover/java_parser.hpp"

namespace mover {

using java::Span;

enum class Visibility { Private, Package, Protected, Public };

enum class MemberKind { Field, Method };

/// How a member access was qualified at the use site.
enum class ReceiverKind {
  Implicit,    // `x`, `foo()`
  This,        // `this.x`
  Super,       // `super.foo()`
  Variable,    // `param.x`, `local.foo()`, `field.foo()`
  Type,        // `Util.foo()`
  Expression,  // `a().b()`, `(cast).x`, chains through unresolved types
};

struct MemberRef {
  MemberKind kind = MemberKind::Field;
  /// Declaring class in the index; empty when the owner could not be resolved.
  std::string owner;
  std::string name;
  std::size_t offset = 0;  // byte offset of the member name
  ReceiverKind receiver = ReceiverKind::Implicit;
  Span receiver_span;  // empty for Implicit
  std::string receiver_text;
  int arg_count = -1;  // methods only
  Span args_span;      // '(' ... ')' of a call
  bool is_method_reference = false;
  bool is_write = false;
};

struct Parameter {
  std::string name;
  /// Qualified class name when the erased type resolves to a project class,
  /// otherwise the raw type text.
  std::string declared_type;
  std::string type_text;
  Span span;
};

struct MethodInfo {
  std::string name;
  /// `name(T1,T2)` with erased, unqualified parameter types.
  std::string signature;
  std::string return_type;
  std::vector<Parameter> parameters;
  Visibility visibility = Visibility::Package;
  bool is_static = false;
  bool is_constructor = false;
  bool is_abstract = false;
  bool is_override = false;
  bool is_overridden = false;
  bool is_getter_setter = false;
  bool is_test = false;
  bool is_empty_or_comment_only = false;
  bool uses_bare_this = false;
  std::vector<std::string> annotations;
  std::vector<std::string> modifiers;
  /// Whole declaration: doc comment (if any) through the closing brace.
  Span body_span;
  std::optional<Span> block_span;
  Span params_span;
  std::size_t name_offset = 0;
  std::vector<MemberRef> referenced_members;
};

struct FieldInfo {
  std::string name;
  /// Qualified class name if resolvable, else the raw type text.
  std::string declared_type;
  std::string type_text;
  bool is_static = false;
  bool is_final = false;
  Visibility visibility = Visibility::Package;
  Span decl_span;
};

struct ImportInfo {
  std::string name;
  bool is_static = false;
  bool is_wildcard = false;
  Span span;
};

struct ClassInfo {
  std::string qualified_name;
  std::string simple_name;
  std::vector<std::string> package_path;
  std::vector<FieldInfo> fields;
  std::vector<MethodInfo> methods;
  std::optional<std::string> docstring;
  std::string source_file;
  /// Whole declaration: doc comment (if any) through the closing brace.
  Span body_span;
  Span block_span;
  bool is_interface = false;
  bool is_enum = false;
  bool is_record = false;
  bool is_abstract = false;
  Visibility visibility = Visibility::Package;
  /// Qualified name of the enclosing class for static nested classes.
  std::string enclosing;
  std::vector<std::string> super_types;
  std::vector<MemberRef> initializer_references;

  std::string package_name() const;
  const MethodInfo* find_method(std::string_view signature) const;
  const FieldInfo* find_field(std::string_view name) const;
};

struct SourceFile {
  std::string path;
  std::string root;
  std::string package_name;
  std::vector<ImportInfo> imports;
  std::string sha256;
  std::vector<std::string> classes;
  bool under_test_root = false;
};

struct IndexWarning {
  std::string file;
  std::string message;
};

/// Resolved model of a Java project. Built once and treated as immutable;
/// changes to the project mean building a new index.
struct ProjectIndex {
  static constexpr int kSchemaVersion = 1;

  std::map<std::string, ClassInfo> classes;
  std::set<std::string> packages;
  std::vector<std::string> source_roots;
  /// (context class, simple name) -> qualified name, for every name the
  /// indexer resolved against a project class.
  std::map<std::pair<std::string, std::string>, std::string> name_resolution;
  std::map<std::string, SourceFile> files;
  std::vector<IndexWarning> warnings;
  /// File contents by path. Not part of the serialized form.
  std::map<std::string, std::string> contents;

  const ClassInfo* find_class(std::string_view qualified) const;
  const ClassInfo& class_at(std::string_view qualified) const;
  std::string_view file_content(const std::string& path) const;
  std::size_t method_count() const;
};

/// Identifies a method by declaring class and signature.
struct MethodRef {
  std::string class_name;
  std::string signature;

  friend bool operator==(const MethodRef&, const MethodRef&) = default;
  friend auto operator<=>(const MethodRef&, const MethodRef&) = default;
};

ProjectIndex build_index(const std::vector<std::filesystem::path>& source_roots);

/// Resolution order: nested member types and self, single-type imports,
/// same package, on-demand imports. Names outside the project (including
/// java.lang) resolve to nothing.
std::optional<std::string> resolve_type(const ProjectIndex& index, const ClassInfo& context,
                                        std::string_view simple_name);

std::string_view class_text(const ProjectIndex& index, const ClassInfo& cls);
std::string_view method_text(const ProjectIndex& index, const ClassInfo& cls, const MethodInfo& method);

/// The class source with the method's declaration span cut out; everything
/// else is preserved byte for byte.
std::string class_text_without_method(const ProjectIndex& index, const ClassInfo& cls, const MethodInfo& method);

const MethodInfo& find_method(const ProjectIndex& index, const MethodRef& ref);

/// Project classes reachable through extends/implements, nearest first.
std::vector<const ClassInfo*> super_type_closure(const ProjectIndex& index, const ClassInfo& cls);
std::vector<const ClassInfo*> sub_type_closure(const ProjectIndex& index, const ClassInfo& cls);
bool is_subtype_of(const ProjectIndex& index, const ClassInfo& cls, std::string_view ancestor);

/// Whether a member with `visibility` declared in `owner` is accessible from `from`.
bool is_accessible(const ClassInfo& owner, Visibility visibility, const ClassInfo& from);

std::string_view to_string(Visibility v);
std::string_view to_string(MemberKind k);
std::string_view to_string(ReceiverKind k);

nlohmann::json to_json(const ProjectIndex& index);
/// Restores a persisted index; file contents are re-read from disk.
ProjectIndex index_from_json(const nlohmann::json& j);

}  // namespace mover
