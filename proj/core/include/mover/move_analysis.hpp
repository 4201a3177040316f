#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mover/body_analysis.hpp"
#include "mover/candidate_filter.hpp"
#include "mover/code_model.hpp"

namespace mover {

enum class MoveRoute {
  Parameter,  // T is the type of one of m's parameters; that parameter becomes `this`
  Field,      // T is the type of a host field f; callers go through `f`
  Static,
};

std::string_view to_string(MoveRoute r);

/// A resolved invocation (or method reference) of the method being moved.
struct CallSite {
  std::string caller;  // qualified name of the class containing the call
  std::string file;
  MemberRef ref;
  bool inside_moved = false;
  bool via_static_import = false;
};

/// How one class is spelled from inside a given file, plus the import that
/// spelling requires (empty when none).
struct TypeRef {
  std::string text;
  std::string import;
};

/// Everything the feasibility check and the executor need to agree on.
struct MoveAnalysis {
  MethodRef method;
  std::string target;
  MoveRoute route = MoveRoute::Static;
  std::optional<std::size_t> param_index;
  std::string field_name;
  bool host_param_added = false;
  std::string host_param_name;
  std::string new_signature;
  Visibility new_visibility = Visibility::Package;
  std::vector<CallSite> call_sites;
  /// Imports the target's file needs, as written after `import ` (e.g.
  /// `x.y.D`, `static a.B.c`, `java.util.*`).
  std::vector<std::string> target_imports;
  /// Spelling of the host class inside the target (host parameter type).
  std::string host_type_text;
  /// Spelling, inside the target, of each class whose static members the
  /// moved body reaches implicitly.
  std::map<std::string, std::string> qualifier_text;
  /// Static moves: how each call-site file spells the target class.
  std::map<std::string, TypeRef> target_refs_by_file;
  std::vector<FeasibilityReason> reasons;
  std::vector<std::string> details;

  bool feasible() const { return reasons.empty(); }
};

/// Token view of a method body, re-lexed from the indexed file content.
struct MethodTokens {
  java::LexResult lexed;
  java::TokenRange decl;   // first..last token of the declaration
  java::TokenRange block;  // '{' .. '}'
  bool has_block = false;
};

MethodTokens lex_method(const ProjectIndex& index, const ClassInfo& cls, const MethodInfo& method);

/// Decides the route and checks every precondition for moving `method` to
/// `target`. Never throws for an absent target; reports TARGET_NOT_FOUND.
MoveAnalysis analyze_move(const ProjectIndex& index, const MethodRef& method, std::string_view target);

std::vector<CallSite> find_call_sites(const ProjectIndex& index, const ClassInfo& host, const MethodInfo& method);

/// Spelling of `cls` from code in `from` (a class declared in the file that
/// will contain the reference). Empty text when it cannot be referenced.
std::optional<TypeRef> type_ref(const ProjectIndex& index, const ClassInfo& from, const ClassInfo& cls);

/// Signature text `name(T1,T2)` from erased parameter type texts.
std::string make_signature(std::string_view name, const std::vector<std::string>& type_texts);

}  // namespace mover
