#include "mover/candidate_filter.hpp"

#include <nlohmann/json.hpp>

#include "mover/move_analysis.hpp"

namespace mover {

std::string_view to_string(FilterReason r) {
  switch (r) {
    case FilterReason::Constructor: return "CONSTRUCTOR";
    case FilterReason::GetterSetter: return "GETTER_SETTER";
    case FilterReason::Override: return "OVERRIDE";
    case FilterReason::Test: return "TEST";
    case FilterReason::EmptyBody: return "EMPTY_BODY";
  }
  return "EMPTY_BODY";
}

std::string_view to_string(FeasibilityReason r) {
  switch (r) {
    case FeasibilityReason::TargetNotFound: return "TARGET_NOT_FOUND";
    case FeasibilityReason::TargetNotReachable: return "TARGET_NOT_REACHABLE";
    case FeasibilityReason::LosesReferences: return "LOSES_REFERENCES";
    case FeasibilityReason::HierarchyConflict: return "HIERARCHY_CONFLICT";
    case FeasibilityReason::DuplicateSignature: return "DUPLICATE_SIGNATURE";
  }
  return "LOSES_REFERENCES";
}

FilterVerdict sanity_check(const ClassInfo& cls, const MethodInfo& method) {
  FilterVerdict v;
  v.method = MethodRef{cls.qualified_name, method.signature};
  if (method.is_constructor) v.reasons.push_back(FilterReason::Constructor);
  if (method.is_getter_setter) v.reasons.push_back(FilterReason::GetterSetter);
  if (method.is_override || method.is_overridden) v.reasons.push_back(FilterReason::Override);
  if (method.is_test) v.reasons.push_back(FilterReason::Test);
  if (method.is_empty_or_comment_only) v.reasons.push_back(FilterReason::EmptyBody);
  v.passed = v.reasons.empty();
  return v;
}

std::vector<FilterVerdict> sanity_filter(const ClassInfo& cls) {
  std::vector<FilterVerdict> out;
  out.reserve(cls.methods.size());
  for (const auto& m : cls.methods) out.push_back(sanity_check(cls, m));
  return out;
}

namespace {

FeasibilityVerdict verdict_from(const MoveAnalysis& a, bool is_static) {
  FeasibilityVerdict v;
  v.method = a.method;
  v.host = a.method.class_name;
  v.target = a.target;
  v.is_static = is_static;
  v.reasons = a.reasons;
  v.details = a.details;
  v.feasible = a.reasons.empty();
  return v;
}

FeasibilityVerdict wrong_kind(const MethodRef& method, std::string_view target, bool is_static) {
  FeasibilityVerdict v;
  v.method = method;
  v.host = method.class_name;
  v.target = std::string(target);
  v.is_static = is_static;
  v.feasible = false;
  v.reasons.push_back(FeasibilityReason::TargetNotReachable);
  v.details.push_back(is_static ? "method is not static" : "method is static");
  return v;
}

}  // namespace

FeasibilityVerdict check_instance_feasibility(const ProjectIndex& index, const MethodRef& method,
                                              std::string_view target) {
  const MethodInfo& m = find_method(index, method);
  if (m.is_static) return wrong_kind(method, target, false);
  return verdict_from(analyze_move(index, method, target), false);
}

FeasibilityVerdict check_static_feasibility(const ProjectIndex& index, const MethodRef& method,
                                            std::string_view target) {
  const MethodInfo& m = find_method(index, method);
  if (!m.is_static) return wrong_kind(method, target, true);
  return verdict_from(analyze_move(index, method, target), true);
}

FeasibilityVerdict check_feasibility(const ProjectIndex& index, const MethodRef& method, std::string_view target) {
  const MethodInfo& m = find_method(index, method);
  return m.is_static ? check_static_feasibility(index, method, target)
                     : check_instance_feasibility(index, method, target);
}

nlohmann::json to_json(const FilterVerdict& v) {
  nlohmann::json reasons = nlohmann::json::array();
  for (auto r : v.reasons) reasons.push_back(to_string(r));
  return {{"class", v.method.class_name}, {"method", v.method.signature}, {"passed", v.passed}, {"reasons", reasons}};
}

nlohmann::json to_json(const FeasibilityVerdict& v) {
  nlohmann::json reasons = nlohmann::json::array();
  for (auto r : v.reasons) reasons.push_back(to_string(r));
  return {{"method", v.method.signature}, {"host", v.host},         {"target", v.target},
          {"is_static", v.is_static},      {"feasible", v.feasible}, {"reasons", reasons},
          {"details", v.details}};
}

FeasibilityVerdict feasibility_from_json(const nlohmann::json& j) {
  static const FeasibilityReason all[] = {FeasibilityReason::TargetNotFound, FeasibilityReason::TargetNotReachable,
                                          FeasibilityReason::LosesReferences, FeasibilityReason::HierarchyConflict,
                                          FeasibilityReason::DuplicateSignature};
  FeasibilityVerdict v;
  v.host = j.at("host").get<std::string>();
  v.method = MethodRef{v.host, j.at("method").get<std::string>()};
  v.target = j.at("target").get<std::string>();
  v.is_static = j.at("is_static").get<bool>();
  v.feasible = j.at("feasible").get<bool>();
  for (const auto& r : j.at("reasons")) {
    for (auto code : all) {
      if (to_string(code) == r.get<std::string>()) v.reasons.push_back(code);
    }
  }
  v.details = j.at("details").get<std::vector<std::string>>();
  return v;
}

}  // namespace mover
