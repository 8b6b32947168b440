#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "localfeat/dsl.hpp"
#include "localfeat/multimodel.hpp"
#include "localfeat/spl_definition.hpp"

namespace localfeat {

enum class Severity { error, warning };
std::string_view to_string(Severity severity);

/// Semantic finding. Errors block emission; warnings do not.
struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  Span span;
};

enum class Origin {
  local_binding,
  global_default,
  closure_parent,
  closure_mandatory,
  closure_requires,
};
std::string_view to_string(Origin origin);

struct Provenance {
  std::string feature;
  std::string local_model;
  Origin origin = Origin::local_binding;
  Span span;
};

struct ResolvedProduct {
  dsl::ProductSpec spec;
  Multimodel multimodel;
  /// One entry per element covered by an AppliedTo declaration.
  std::map<ElementKey, Configuration> effective;
  /// Sorted.
  std::vector<std::string> included;
  /// Ordered by (line, column, code).
  std::vector<Diagnostic> diagnostics;
  std::map<ElementKey, std::vector<Provenance>> provenance;

  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool has_errors() const { return error_count() > 0; }

  /// Union of the element's effective configurations over every local
  /// model applied to it.
  Configuration effective_of(std::string_view qname) const;
};

/// Element naming used when lowering a product spec.
namespace elements {
inline constexpr std::string_view data = "data";
inline constexpr std::string_view visualization = "visualization";
std::string entity(std::string_view name);
std::string layer(std::string_view name);
std::string map(std::string_view name);
std::string layer_in_map(std::string_view map, std::string_view layer);
}  // namespace elements

/// Lowers `spec` against the product line into a multimodel, binds every
/// WITH FEATURES clause to the local model applied to the element's
/// metaclass, and computes effective configurations and the included
/// feature set. Semantic problems become diagnostics; resolution carries on
/// past them.
ResolvedProduct resolve(const dsl::ProductSpec& spec, const spl::SplDefinition& spl);

/// Origin of each feature in the element's effective configurations.
/// Elements no local model applies to yield an empty list. Throws
/// Error(UnknownElement).
std::vector<Provenance> explain(const ResolvedProduct& resolved, std::string_view qname);

}  // namespace localfeat
