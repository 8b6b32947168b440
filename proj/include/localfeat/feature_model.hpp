#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "localfeat/error.hpp"

namespace localfeat {

enum class FeatureKind { mandatory, optional };
enum class GroupKind { none, xor_group, or_group };
enum class ConstraintKind { implies, excludes };
enum class ModelKind { global, local };

std::string_view to_string(FeatureKind kind);
std::string_view to_string(GroupKind kind);
std::string_view to_string(ConstraintKind kind);

/// Declarative form of a feature subtree, used to build a FeatureModel.
struct FeatureDecl {
  std::string name;
  FeatureKind kind = FeatureKind::optional;
  GroupKind group = GroupKind::none;
  bool abstract = false;
  std::vector<FeatureDecl> children;

  bool operator==(const FeatureDecl&) const = default;
};

struct CrossTreeConstraint {
  ConstraintKind kind = ConstraintKind::implies;
  std::string lhs;
  std::string rhs;

  auto operator<=>(const CrossTreeConstraint&) const = default;
};

/// A set of selected feature names over one model. Ordered, so two equal
/// configurations always iterate identically.
using Configuration = std::set<std::string>;

/// Feature names: a letter, then letters, digits or underscores, with
/// optional interior hyphens ("GIS-SPL").
bool is_valid_feature_name(std::string_view name);

struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::optional;
  GroupKind group = GroupKind::none;
  bool abstract = false;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
};

/// Immutable rooted feature tree plus binary cross-tree constraints.
/// Features are stored in preorder; index 0 is the root.
class FeatureModel {
 public:
  /// Validates the declaration and builds the model. Throws Error with
  /// DuplicateFeatureName, DanglingConstraintEndpoint, GroupTooSmall,
  /// GroupChildMandatory, SelfConstraint or InvalidFeatureName.
  static FeatureModel build(const FeatureDecl& root,
                            std::vector<CrossTreeConstraint> constraints,
                            ModelKind kind);

  const std::string& name() const { return features_.front().name; }
  ModelKind kind() const { return kind_; }
  std::size_t size() const { return features_.size(); }

  std::span<const Feature> features() const { return features_; }
  const Feature& root() const { return features_.front(); }
  const std::vector<CrossTreeConstraint>& constraints() const { return constraints_; }

  bool contains(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Throws Error(UnknownFeature).
  const Feature& feature(std::string_view name) const;
  const Feature& at(std::size_t index) const { return features_[index]; }

  /// Names of the subtree rooted at `name`, preorder, including `name`.
  std::vector<std::string> subtree(std::string_view name) const;
  /// Reconstructs the declaration of the subtree rooted at `name`.
  FeatureDecl declaration(std::string_view name) const;
  FeatureDecl declaration() const { return declaration(name()); }

 private:
  FeatureModel() = default;
  void append(const FeatureDecl& decl, std::optional<std::size_t> parent);

  std::vector<Feature> features_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<CrossTreeConstraint> constraints_;
  ModelKind kind_ = ModelKind::global;
};

enum class Rule {
  root_missing,
  parent_missing,
  mandatory_missing,
  xor_violation,
  or_violation,
  requires_violation,
  excludes_violation,
};

std::string_view to_string(Rule rule);

struct Violation {
  Rule rule;
  std::vector<std::string> features;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

/// Checks every well-formedness rule and reports all violations. Throws
/// Error(UnknownFeature) when the configuration names a feature that is
/// not part of the model.
ValidationReport validate_configuration(const FeatureModel& model,
                                        const Configuration& config);

/// Every valid configuration of `model`, by exhaustive subset enumeration,
/// sorted lexicographically. Throws Error(ModelTooLarge) when the model has
/// more than `max_features` features.
std::vector<Configuration> enumerate_configurations(const FeatureModel& model,
                                                    std::size_t max_features = 20);

enum class ClosureReason { seed, root, parent, mandatory, implied };

std::string_view to_string(ClosureReason reason);

/// Smallest superset of `seeds` (plus the root) closed under parent
/// inclusion, mandatory children and `requires` constraints. Groups and
/// excludes are not solved; validate the result.
Configuration close_selection(const FeatureModel& model, const Configuration& seeds);

/// Same closure, recording why each feature was added. The first reason
/// found wins; seeds always report `seed`.
std::map<std::string, ClosureReason> close_selection_traced(const FeatureModel& model,
                                                            const Configuration& seeds);

}  // namespace localfeat
