#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mover/code_model.hpp"

namespace mover {

enum class FilterReason { Constructor, GetterSetter, Override, Test, EmptyBody };

enum class FeasibilityReason {
  TargetNotFound,
  TargetNotReachable,
  LosesReferences,
  HierarchyConflict,
  DuplicateSignature,
};

struct FilterVerdict {
  MethodRef method;
  bool passed = true;
  std::vector<FilterReason> reasons;
};

struct FeasibilityVerdict {
  MethodRef method;
  std::string host;
  std::string target;
  bool is_static = false;
  bool feasible = true;
  std::vector<FeasibilityReason> reasons;
  /// Human-readable evidence, one entry per failed or notable check.
  std::vector<std::string> details;
};

FilterVerdict sanity_check(const ClassInfo& cls, const MethodInfo& method);

/// One verdict per declared method, in declaration order.
std::vector<FilterVerdict> sanity_filter(const ClassInfo& cls);

FeasibilityVerdict check_instance_feasibility(const ProjectIndex& index, const MethodRef& method,
                                              std::string_view target);
FeasibilityVerdict check_static_feasibility(const ProjectIndex& index, const MethodRef& method,
                                            std::string_view target);

/// Dispatches on whether the method is static.
FeasibilityVerdict check_feasibility(const ProjectIndex& index, const MethodRef& method, std::string_view target);

std::string_view to_string(FilterReason r);
std::string_view to_string(FeasibilityReason r);

nlohmann::json to_json(const FilterVerdict& v);
nlohmann::json to_json(const FeasibilityVerdict& v);
FeasibilityVerdict feasibility_from_json(const nlohmann::json& j);

}  // namespace mover
