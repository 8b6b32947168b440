#pragma once

// Product-line definition files (.spl): viewpoint metamodels, the global
// feature model, local feature models, AppliedTo declarations and global
// defaults. See docs/grammar.md.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "localfeat/dsl.hpp"
#include "localfeat/feature_model.hpp"
#include "localfeat/multimodel.hpp"

namespace localfeat::spl {

using dsl::SourceRange;

struct ViewpointDecl {
  std::string name;
  std::vector<std::string> metaclasses;
  SourceRange span;

  bool operator==(const ViewpointDecl&) const = default;
};

struct FeatureModelDecl {
  FeatureDecl root;
  std::vector<CrossTreeConstraint> constraints;
  SourceRange span;

  bool operator==(const FeatureModelDecl&) const = default;
};

struct LocalDecl {
  std::string root;
  std::string viewpoint;
  std::string metaclass;
  SourceRange span;

  bool operator==(const LocalDecl&) const = default;
};

struct SplAst {
  std::vector<ViewpointDecl> viewpoints;
  std::vector<FeatureModelDecl> models;
  std::vector<LocalDecl> locals;
  std::optional<std::vector<std::string>> defaults;
  SourceRange defaults_span;

  bool operator==(const SplAst&) const = default;
};

/// Throws ParseError(SyntaxError).
SplAst parse_ast(std::string_view source);

/// Canonical text: viewpoints, feature models, LOCAL lines, DEFAULTS, in
/// that order and separated by blank lines. Grouped children carry no kind
/// marker; every other feature has an explicit MANDATORY or OPTIONAL.
std::string print(const SplAst& ast);

struct SplDefinition {
  FunctionalModel functional;
  std::vector<ViewpointModel> viewpoints;
  std::vector<AppliedToDeclaration> applied_to;
  Configuration defaults;
};

/// Builds and checks the definition. The global model is the single
/// feature model not named by a LOCAL declaration. Errors are reported as
/// ParseError positioned at the responsible declaration, with the feature
/// model codes (DuplicateFeatureName, GroupTooSmall, ...), TwinMismatch,
/// UnknownViewpoint, UnknownMetaclass, UnknownLocalModel, UnknownFeature or
/// InvalidDeclaration.
SplDefinition build(const SplAst& ast);

SplDefinition parse_spl_definition(std::string_view source);

/// An empty multimodel over the definition: viewpoints without elements,
/// AppliedTo declared, global selection = closure of the defaults.
Multimodel make_multimodel(const SplDefinition& definition);

}  // namespace localfeat::spl
