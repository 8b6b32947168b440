#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "localfeat/feature_model.hpp"

namespace localfeat {

using Attributes = std::map<std::string, std::string>;

/// An element of a viewpoint model (an instance of one of its metaclasses).
struct ModelEntity {
  std::string name;
  std::string kind;
  Attributes attributes;
};

/// Relationship between two elements, referenced by qualified name.
struct ModelRelationship {
  std::string name;
  std::string source;
  std::string target;
  Attributes attributes;
};

/// `viewpoint.element`. Element names may themselves contain dots
/// (`visualization.hotelsMap.hotelsLayer`); the viewpoint never does.
std::string qualified_name(std::string_view viewpoint, std::string_view element);
std::pair<std::string, std::string> split_qualified_name(std::string_view qname);

class ViewpointModel {
 public:
  ViewpointModel(std::string name, std::set<std::string> metaclasses);

  const std::string& name() const { return name_; }
  const std::set<std::string>& metaclasses() const { return metaclasses_; }
  bool has_metaclass(std::string_view kind) const { return metaclasses_.contains(std::string(kind)); }

  /// Throws UnknownMetaclass or DuplicateElement.
  const ModelEntity& add_entity(std::string name, std::string kind, Attributes attributes = {});
  const ModelEntity* find(std::string_view name) const;
  const std::map<std::string, ModelEntity>& entities() const { return entities_; }

  void add_relationship(ModelRelationship relationship);
  const std::vector<ModelRelationship>& relationships() const { return relationships_; }

 private:
  std::string name_;
  std::set<std::string> metaclasses_;
  std::map<std::string, ModelEntity> entities_;
  std::vector<ModelRelationship> relationships_;
};

/// One global feature model plus the local models whose roots are repeated
/// inside it. Each local tree must be a structural twin of its copy in the
/// global model.
class FunctionalModel {
 public:
  /// Throws TwinMismatch when a local root is missing from the global
  /// model or the subtrees differ, UnknownLocalModel on duplicate locals.
  static FunctionalModel create(FeatureModel global, std::vector<FeatureModel> locals);

  const FeatureModel& global() const { return global_; }
  const std::map<std::string, FeatureModel>& locals() const { return locals_; }
  bool has_local(std::string_view name) const { return locals_.contains(std::string(name)); }
  /// Throws UnknownLocalModel.
  const FeatureModel& local(std::string_view name) const;

 private:
  FunctionalModel(FeatureModel global) : global_(std::move(global)) {}

  FeatureModel global_;
  std::map<std::string, FeatureModel> locals_;
};

/// Throws TwinMismatch describing the first difference between the global
/// copy rooted at `local.name()` and `local`.
void check_structural_twin(const FeatureModel& global, const FeatureModel& local);

struct AppliedToDeclaration {
  std::string local_model;
  std::string viewpoint;
  std::string metaclass;

  auto operator<=>(const AppliedToDeclaration&) const = default;
};

struct LocalBinding {
  std::string element;  // qualified name
  std::string local_model;
  Configuration selection;
  Attributes attributes;
};

struct ElementKey {
  std::string element;
  std::string local_model;

  auto operator<=>(const ElementKey&) const = default;
};

class Multimodel {
 public:
  explicit Multimodel(FunctionalModel functional);

  const FunctionalModel& functional() const { return functional_; }

  /// Throws DuplicateElement when a viewpoint of that name exists.
  void add_viewpoint(ViewpointModel viewpoint);
  const std::map<std::string, ViewpointModel>& viewpoints() const { return viewpoints_; }
  /// Throws UnknownViewpoint.
  ViewpointModel& viewpoint(std::string_view name);
  const ViewpointModel& viewpoint(std::string_view name) const;

  const ModelEntity* find_element(std::string_view qname) const;
  /// Throws UnknownElement.
  const ModelEntity& element(std::string_view qname) const;
  /// Relationship endpoints are qualified names; throws UnknownElement.
  void add_relationship(std::string_view viewpoint, ModelRelationship relationship);

  /// Idempotent for identical declarations. Throws UnknownLocalModel,
  /// UnknownViewpoint or UnknownMetaclass.
  void declare_applied_to(std::string_view local_model, std::string_view viewpoint,
                          std::string_view metaclass);
  const std::set<AppliedToDeclaration>& applied_to() const { return applied_to_; }
  bool applies(std::string_view local_model, std::string_view qname) const;
  /// Local models applicable to the element, sorted by name.
  std::vector<std::string> applicable_locals(std::string_view qname) const;
  /// Every (element, local model) pair covered by some declaration, sorted.
  std::vector<ElementKey> covered_elements() const;

  /// Closes `seeds` over the global model and stores the result. Throws
  /// UnknownFeature or InvalidSelection (the stored selection is unchanged).
  void set_global_selection(const Configuration& seeds);
  const Configuration& global_selection() const { return global_selection_; }

  /// Stores close(seeds ∪ {local root}) for the element. Throws
  /// UnknownElement, UnknownLocalModel, KindMismatch, UnknownFeature,
  /// InvalidSelection or DuplicateBinding.
  const LocalBinding& bind_local(std::string_view qname, std::string_view local_model,
                                 const Configuration& seeds, Attributes attributes = {});
  /// Returns true when a binding was removed.
  bool unbind_local(std::string_view qname, std::string_view local_model);
  const LocalBinding* binding(std::string_view qname, std::string_view local_model) const;
  const std::map<ElementKey, LocalBinding>& bindings() const { return bindings_; }

  /// The configuration an unbound element falls back to: the global
  /// selection restricted to the repeated subtree, re-rooted onto the local
  /// model and closed there.
  Configuration global_default(std::string_view local_model) const;

  /// Binding if present, otherwise the global default. Throws
  /// UnknownElement, UnknownLocalModel or NotApplicable.
  Configuration effective_configuration(std::string_view qname, std::string_view local_model) const;

  /// Global selection plus every covered element's effective configuration.
  Configuration included_features() const;

 private:
  FunctionalModel functional_;
  std::map<std::string, ViewpointModel> viewpoints_;
  std::set<AppliedToDeclaration> applied_to_;
  std::map<ElementKey, LocalBinding> bindings_;
  Configuration global_selection_;
};

}  // namespace localfeat
