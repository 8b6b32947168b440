#include "localfeat/multimodel.hpp"

#include <algorithm>

namespace localfeat {

std::string qualified_name(std::string_view viewpoint, std::string_view element) {
  std::string out(viewpoint);
  out += '.';
  out += element;
  return out;
}

std::pair<std::string, std::string> split_qualified_name(std::string_view qname) {
  auto dot = qname.find('.');
  if (dot == std::string_view::npos) return {std::string(qname), {}};
  return {std::string(qname.substr(0, dot)), std::string(qname.substr(dot + 1))};
}

ViewpointModel::ViewpointModel(std::string name, std::set<std::string> metaclasses)
    : name_(std::move(name)), metaclasses_(std::move(metaclasses)) {}

const ModelEntity& ViewpointModel::add_entity(std::string name, std::string kind, Attributes attributes) {
  if (!has_metaclass(kind)) {
    throw Error(ErrorCode::UnknownMetaclass, "viewpoint '" + name_ + "' has no metaclass '" + kind + "'");
  }
  if (entities_.contains(name)) {
    throw Error(ErrorCode::DuplicateElement, "duplicate element '" + qualified_name(name_, name) + "'");
  }
  auto key = name;
  auto [it, _] = entities_.emplace(std::move(key), ModelEntity{std::move(name), std::move(kind), std::move(attributes)});
  return it->second;
}

const ModelEntity* ViewpointModel::find(std::string_view name) const {
  auto it = entities_.find(std::string(name));
  return it == entities_.end() ? nullptr : &it->second;
}

void ViewpointModel::add_relationship(ModelRelationship relationship) {
  relationships_.push_back(std::move(relationship));
}

void check_structural_twin(const FeatureModel& global, const FeatureModel& local) {
  auto mismatch = [&](const std::string& what) {
    throw Error(ErrorCode::TwinMismatch,
                "local model '" + local.name() + "' differs from its copy in '" + global.name() + "': " + what);
  };
  if (!global.contains(local.name())) mismatch("root is not a feature of the global model");

  // Walk both trees in lockstep; the roots' own kinds are not compared since
  // a local root has no parent.
  struct Pair {
    const Feature* g;
    const Feature* l;
  };
  std::vector<Pair> stack{{&global.feature(local.name()), &local.root()}};
  while (!stack.empty()) {
    auto [g, l] = stack.back();
    stack.pop_back();
    if (g->name != l->name) mismatch("'" + g->name + "' vs '" + l->name + "'");
    if (g->group != l->group) mismatch("group of '" + g->name + "'");
    if (g->children.size() != l->children.size()) mismatch("children of '" + g->name + "'");
    for (std::size_t i = 0; i < g->children.size(); ++i) {
      const Feature& gc = global.at(g->children[i]);
      const Feature& lc = local.at(l->children[i]);
      if (gc.name != lc.name) mismatch("child '" + gc.name + "' vs '" + lc.name + "' under '" + g->name + "'");
      if (gc.kind != lc.kind) mismatch("kind of '" + gc.name + "'");
      stack.push_back({&gc, &lc});
    }
  }

  const auto names = global.subtree(local.name());
  const std::set<std::string> inside(names.begin(), names.end());
  std::set<CrossTreeConstraint> restricted;
  for (const auto& c : global.constraints()) {
    if (inside.contains(c.lhs) && inside.contains(c.rhs)) restricted.insert(c);
  }
  const std::set<CrossTreeConstraint> own(local.constraints().begin(), local.constraints().end());
  if (restricted != own) mismatch("cross-tree constraints");
}

FunctionalModel FunctionalModel::create(FeatureModel global, std::vector<FeatureModel> locals) {
  FunctionalModel fm(std::move(global));
  for (auto& local : locals) {
    check_structural_twin(fm.global_, local);
    auto name = local.name();
    if (!fm.locals_.emplace(name, std::move(local)).second) {
      throw Error(ErrorCode::UnknownLocalModel, "local model '" + name + "' declared twice");
    }
  }
  return fm;
}

const FeatureModel& FunctionalModel::local(std::string_view name) const {
  auto it = locals_.find(std::string(name));
  if (it == locals_.end()) {
    throw Error(ErrorCode::UnknownLocalModel, "unknown local feature model '" + std::string(name) + "'");
  }
  return it->second;
}

Multimodel::Multimodel(FunctionalModel functional)
    : functional_(std::move(functional)),
      global_selection_(close_selection(functional_.global(), {})) {}

void Multimodel::add_viewpoint(ViewpointModel viewpoint) {
  auto name = viewpoint.name();
  if (!viewpoints_.emplace(name, std::move(viewpoint)).second) {
    throw Error(ErrorCode::DuplicateElement, "duplicate viewpoint '" + name + "'");
  }
}

ViewpointModel& Multimodel::viewpoint(std::string_view name) {
  auto it = viewpoints_.find(std::string(name));
  if (it == viewpoints_.end()) throw Error(ErrorCode::UnknownViewpoint, "unknown viewpoint '" + std::string(name) + "'");
  return it->second;
}

const ViewpointModel& Multimodel::viewpoint(std::string_view name) const {
  return const_cast<Multimodel*>(this)->viewpoint(name);
}

const ModelEntity* Multimodel::find_element(std::string_view qname) const {
  auto [vp, name] = split_qualified_name(qname);
  auto it = viewpoints_.find(vp);
  if (it == viewpoints_.end()) return nullptr;
  return it->second.find(name);
}

const ModelEntity& Multimodel::element(std::string_view qname) const {
  const ModelEntity* e = find_element(qname);
  if (!e) throw Error(ErrorCode::UnknownElement, "unknown element '" + std::string(qname) + "'");
  return *e;
}

void Multimodel::add_relationship(std::string_view vp, ModelRelationship relationship) {
  element(relationship.source);
  element(relationship.target);
  viewpoint(vp).add_relationship(std::move(relationship));
}

void Multimodel::declare_applied_to(std::string_view local_model, std::string_view vp, std::string_view metaclass) {
  functional_.local(local_model);
  if (!viewpoint(vp).has_metaclass(metaclass)) {
    throw Error(ErrorCode::UnknownMetaclass,
                "viewpoint '" + std::string(vp) + "' has no metaclass '" + std::string(metaclass) + "'");
  }
  applied_to_.insert({std::string(local_model), std::string(vp), std::string(metaclass)});
}

bool Multimodel::applies(std::string_view local_model, std::string_view qname) const {
  const ModelEntity* e = find_element(qname);
  if (!e) return false;
  const auto vp = split_qualified_name(qname).first;
  return std::any_of(applied_to_.begin(), applied_to_.end(), [&](const AppliedToDeclaration& d) {
    return d.local_model == local_model && d.viewpoint == vp && d.metaclass == e->kind;
  });
}

std::vector<std::string> Multimodel::applicable_locals(std::string_view qname) const {
  std::set<std::string> out;
  const ModelEntity* e = find_element(qname);
  if (!e) return {};
  const auto vp = split_qualified_name(qname).first;
  for (const auto& d : applied_to_) {
    if (d.viewpoint == vp && d.metaclass == e->kind) out.insert(d.local_model);
  }
  return {out.begin(), out.end()};
}

std::vector<ElementKey> Multimodel::covered_elements() const {
  std::vector<ElementKey> out;
  for (const auto& [vp_name, vp] : viewpoints_) {
    for (const auto& [name, entity] : vp.entities()) {
      for (const auto& d : applied_to_) {
        if (d.viewpoint == vp_name && d.metaclass == entity.kind) {
          out.push_back({qualified_name(vp_name, name), d.local_model});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Multimodel::set_global_selection(const Configuration& seeds) {
  const FeatureModel& global = functional_.global();
  auto closed = close_selection(global, seeds);
  auto report = validate_configuration(global, closed);
  if (!report.valid()) {
    throw Error(ErrorCode::InvalidSelection,
                "global selection is invalid: " + report.violations.front().message);
  }
  global_selection_ = std::move(closed);
}

const LocalBinding& Multimodel::bind_local(std::string_view qname, std::string_view local_model,
                                           const Configuration& seeds, Attributes attributes) {
  const ModelEntity& e = element(qname);
  const FeatureModel& local = functional_.local(local_model);
  if (!applies(local_model, qname)) {
    throw Error(ErrorCode::KindMismatch, "'" + local.name() + "' is not applied to elements of kind '" + e.kind +
                                             "' (element '" + std::string(qname) + "')");
  }
  ElementKey key{std::string(qname), std::string(local_model)};
  if (bindings_.contains(key)) {
    throw Error(ErrorCode::DuplicateBinding,
                "'" + key.element + "' is already bound to '" + key.local_model + "'");
  }
  Configuration with_root = seeds;
  with_root.insert(local.name());
  auto closed = close_selection(local, with_root);
  auto report = validate_configuration(local, closed);
  if (!report.valid()) {
    throw Error(ErrorCode::InvalidSelection,
                "selection for '" + key.element + "' is invalid: " + report.violations.front().message);
  }
  auto [it, _] = bindings_.emplace(key, LocalBinding{key.element, key.local_model, std::move(closed),
                                                     std::move(attributes)});
  return it->second;
}

bool Multimodel::unbind_local(std::string_view qname, std::string_view local_model) {
  return bindings_.erase({std::string(qname), std::string(local_model)}) > 0;
}

const LocalBinding* Multimodel::binding(std::string_view qname, std::string_view local_model) const {
  auto it = bindings_.find({std::string(qname), std::string(local_model)});
  return it == bindings_.end() ? nullptr : &it->second;
}

Configuration Multimodel::global_default(std::string_view local_model) const {
  const FeatureModel& local = functional_.local(local_model);
  Configuration seeds{local.name()};
  for (const auto& name : functional_.global().subtree(local.name())) {
    if (global_selection_.contains(name)) seeds.insert(name);
  }
  return close_selection(local, seeds);
}

Configuration Multimodel::effective_configuration(std::string_view qname, std::string_view local_model) const {
  element(qname);
  functional_.local(local_model);
  if (!applies(local_model, qname)) {
    throw Error(ErrorCode::NotApplicable,
                "'" + std::string(local_model) + "' does not apply to '" + std::string(qname) + "'");
  }
  if (const LocalBinding* b = binding(qname, local_model)) return b->selection;
  return global_default(local_model);
}

Configuration Multimodel::included_features() const {
  Configuration out = global_selection_;
  for (const auto& key : covered_elements()) {
    auto cfg = effective_configuration(key.element, key.local_model);
    out.insert(cfg.begin(), cfg.end());
  }
  return out;
}

}  // namespace localfeat
