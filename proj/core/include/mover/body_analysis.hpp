#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mover/code_model.hpp"

namespace mover {

/// A use of a parameter or local variable inside a body.
struct NameUse {
  std::string name;
  std::size_t offset = 0;
  std::size_t token = 0;
  bool followed_by_dot = false;
  bool is_declaration = false;
  bool is_assigned = false;
};

struct BodyAnalysis {
  std::vector<MemberRef> references;
  std::vector<NameUse> local_uses;
  /// `this` used as a value (not `this.x` / `this(...)`), including `Outer.this`.
  std::vector<std::size_t> bare_this_offsets;
  /// name -> declared type text ("" when untyped, e.g. lambda parameters)
  std::map<std::string, std::string> locals;
};

/// Best-effort member-reference analysis of the tokens in `range` (typically
/// a method body including its braces). `params` seed the local scope.
BodyAnalysis analyze_body(const ProjectIndex& index, const ClassInfo& context,
                          const std::vector<java::Token>& tokens, java::TokenRange range,
                          const std::vector<Parameter>& params);

/// Declaring class of a field visible by simple name from `context`
/// (own hierarchy first, then enclosing classes).
std::optional<std::pair<const ClassInfo*, const FieldInfo*>> lookup_field(const ProjectIndex& index,
                                                                          const ClassInfo& context,
                                                                          std::string_view name);

/// Declaring class of a method callable by simple name from `context`.
std::optional<std::pair<const ClassInfo*, const MethodInfo*>> lookup_method(const ProjectIndex& index,
                                                                            const ClassInfo& context,
                                                                            std::string_view name, int arg_count);

/// Start of the receiver expression that ends at token `last` (the token
/// before a '.').
std::size_t receiver_start(const std::vector<java::Token>& tokens, std::size_t last, std::size_t floor);

/// Number of top-level arguments between '(' at `open` and its match.
int count_arguments(const std::vector<java::Token>& tokens, std::size_t open, std::size_t close);

/// Token index ranges of each top-level argument in a call.
std::vector<java::TokenRange> split_arguments(const std::vector<java::Token>& tokens, std::size_t open,
                                              std::size_t close);

}  // namespace mover
