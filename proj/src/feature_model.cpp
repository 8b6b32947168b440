#include "localfeat/feature_model.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <sstream>

namespace localfeat {

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::mandatory ? "mandatory" : "optional";
}

std::string_view to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::none: return "none";
    case GroupKind::xor_group: return "xor";
    case GroupKind::or_group: return "or";
  }
  return "none";
}

std::string_view to_string(ConstraintKind kind) {
  return kind == ConstraintKind::implies ? "requires" : "excludes";
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::root_missing: return "root";
    case Rule::parent_missing: return "parent";
    case Rule::mandatory_missing: return "mandatory";
    case Rule::xor_violation: return "xor";
    case Rule::or_violation: return "or";
    case Rule::requires_violation: return "requires";
    case Rule::excludes_violation: return "excludes";
  }
  return "?";
}

std::string_view to_string(ClosureReason reason) {
  switch (reason) {
    case ClosureReason::seed: return "seed";
    case ClosureReason::root: return "root";
    case ClosureReason::parent: return "parent";
    case ClosureReason::mandatory: return "mandatory";
    case ClosureReason::implied: return "requires";
  }
  return "?";
}

bool is_valid_feature_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto word = [&](char c) { return alpha(c) || (c >= '0' && c <= '9') || c == '_'; };
  if (!alpha(name.front())) return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (name[i] == '-') {
      if (i + 1 == name.size() || !word(name[i + 1])) return false;
      continue;
    }
    if (!word(name[i])) return false;
  }
  return true;
}

void FeatureModel::append(const FeatureDecl& decl, std::optional<std::size_t> parent) {
  if (!is_valid_feature_name(decl.name)) {
    throw Error(ErrorCode::InvalidFeatureName, "invalid feature name '" + decl.name + "'");
  }
  if (index_.contains(decl.name)) {
    throw Error(ErrorCode::DuplicateFeatureName, "duplicate feature name '" + decl.name + "'");
  }
  if (decl.group != GroupKind::none) {
    if (decl.children.size() < 2) {
      throw Error(ErrorCode::GroupTooSmall, "group of '" + decl.name + "' has fewer than 2 children");
    }
    for (const auto& child : decl.children) {
      if (child.kind == FeatureKind::mandatory) {
        throw Error(ErrorCode::GroupChildMandatory,
                    "grouped child '" + child.name + "' of '" + decl.name + "' must be optional");
      }
    }
  }
  const std::size_t self = features_.size();
  features_.push_back(Feature{decl.name, decl.kind, decl.group, decl.abstract, parent, {}});
  index_.emplace(decl.name, self);
  if (parent) features_[*parent].children.push_back(self);
  for (const auto& child : decl.children) append(child, self);
}

FeatureModel FeatureModel::build(const FeatureDecl& root,
                                 std::vector<CrossTreeConstraint> constraints,
                                 ModelKind kind) {
  FeatureModel model;
  model.kind_ = kind;
  model.append(root, std::nullopt);
  for (const auto& c : constraints) {
    for (const auto* end : {&c.lhs, &c.rhs}) {
      if (!model.contains(*end)) {
        throw Error(ErrorCode::DanglingConstraintEndpoint,
                    "constraint endpoint '" + *end + "' is not a feature of '" + model.name() + "'");
      }
    }
    if (c.lhs == c.rhs) {
      throw Error(ErrorCode::SelfConstraint, "constraint relates '" + c.lhs + "' to itself");
    }
  }
  model.constraints_ = std::move(constraints);
  return model;
}

bool FeatureModel::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

std::optional<std::size_t> FeatureModel::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Feature& FeatureModel::feature(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) {
    throw Error(ErrorCode::UnknownFeature,
                "unknown feature '" + std::string(name) + "' in model '" + this->name() + "'");
  }
  return features_[*idx];
}

std::vector<std::string> FeatureModel::subtree(std::string_view name) const {
  std::vector<std::string> out;
  std::vector<std::size_t> stack{*index_of(feature(name).name)};
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    out.push_back(features_[i].name);
    const auto& ch = features_[i].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

FeatureDecl FeatureModel::declaration(std::string_view name) const {
  const Feature& f = feature(name);
  FeatureDecl decl{f.name, f.kind, f.group, f.abstract, {}};
  for (auto c : f.children) decl.children.push_back(declaration(features_[c].name));
  return decl;
}

namespace {

void check_known(const FeatureModel& model, const Configuration& config) {
  for (const auto& name : config) model.feature(name);
}

}  // namespace

ValidationReport validate_configuration(const FeatureModel& model, const Configuration& config) {
  check_known(model, config);
  ValidationReport report;
  auto add = [&](Rule rule, std::vector<std::string> names, std::string message) {
    report.violations.push_back({rule, std::move(names), std::move(message)});
  };
  auto selected = [&](const std::string& n) { return config.contains(n); };

  if (!selected(model.name())) add(Rule::root_missing, {model.name()}, "root '" + model.name() + "' is not selected");

  for (const Feature& f : model.features()) {
    if (!selected(f.name)) continue;
    if (f.parent && !selected(model.at(*f.parent).name)) {
      const auto& p = model.at(*f.parent).name;
      add(Rule::parent_missing, {f.name, p}, "'" + f.name + "' is selected but its parent '" + p + "' is not");
    }
    std::vector<std::string> chosen;
    for (auto c : f.children) {
      const Feature& child = model.at(c);
      if (f.group == GroupKind::none && child.kind == FeatureKind::mandatory && !selected(child.name)) {
        add(Rule::mandatory_missing, {f.name, child.name},
            "mandatory child '" + child.name + "' of '" + f.name + "' is not selected");
      }
      if (selected(child.name)) chosen.push_back(child.name);
    }
    if (f.group == GroupKind::xor_group && chosen.size() != 1) {
      std::vector<std::string> names{f.name};
      names.insert(names.end(), chosen.begin(), chosen.end());
      add(Rule::xor_violation, std::move(names),
          "alternative group of '" + f.name + "' needs exactly one selected child, found " +
              std::to_string(chosen.size()));
    }
    if (f.group == GroupKind::or_group && chosen.empty()) {
      add(Rule::or_violation, {f.name}, "or group of '" + f.name + "' needs at least one selected child");
    }
  }

  for (const auto& c : model.constraints()) {
    if (c.kind == ConstraintKind::implies && selected(c.lhs) && !selected(c.rhs)) {
      add(Rule::requires_violation, {c.lhs, c.rhs}, c.lhs + " requires " + c.rhs);
    }
    if (c.kind == ConstraintKind::excludes && selected(c.lhs) && selected(c.rhs)) {
      add(Rule::excludes_violation, {c.lhs, c.rhs}, c.lhs + " excludes " + c.rhs);
    }
  }
  return report;
}

namespace {

// Propositional reading of a feature model over a bit mask of selected
// features. Kept separate from validate_configuration so the two can be
// checked against each other.
struct Formula {
  using Mask = std::uint64_t;
  struct Implication {
    Mask premise;
    Mask conclusion;  // all bits required
  };
  struct Group {
    Mask parent;
    Mask members;
    bool exactly_one;
  };
  std::vector<Implication> implications;
  std::vector<Group> groups;
  std::vector<Mask> forbidden_pairs;
  Mask root = 0;

  bool holds(Mask m) const {
    if (!(m & root)) return false;
    for (const auto& i : implications) {
      if ((m & i.premise) && (m & i.conclusion) != i.conclusion) return false;
    }
    for (const auto& g : groups) {
      if (!(m & g.parent)) continue;
      const int n = __builtin_popcountll(m & g.members);
      if (g.exactly_one ? n != 1 : n < 1) return false;
    }
    for (auto pair : forbidden_pairs) {
      if ((m & pair) == pair) return false;
    }
    return true;
  }
};

Formula encode(const FeatureModel& model) {
  Formula f;
  auto bit = [](std::size_t i) { return Formula::Mask{1} << i; };
  f.root = bit(0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    const Feature& feat = model.at(i);
    if (feat.parent) f.implications.push_back({bit(i), bit(*feat.parent)});
    Formula::Mask members = 0;
    for (auto c : feat.children) {
      members |= bit(c);
      if (feat.group == GroupKind::none && model.at(c).kind == FeatureKind::mandatory) {
        f.implications.push_back({bit(i), bit(c)});
      }
    }
    if (feat.group != GroupKind::none) {
      f.groups.push_back({bit(i), members, feat.group == GroupKind::xor_group});
    }
  }
  for (const auto& c : model.constraints()) {
    auto l = bit(*model.index_of(c.lhs));
    auto r = bit(*model.index_of(c.rhs));
    if (c.kind == ConstraintKind::implies) {
      f.implications.push_back({l, r});
    } else {
      f.forbidden_pairs.push_back(l | r);
    }
  }
  return f;
}

}  // namespace

std::vector<Configuration> enumerate_configurations(const FeatureModel& model, std::size_t max_features) {
  constexpr std::size_t hard_limit = 30;
  if (model.size() > max_features || model.size() > hard_limit) {
    throw Error(ErrorCode::ModelTooLarge, "model '" + model.name() + "' has " + std::to_string(model.size()) +
                                              " features, limit is " +
                                              std::to_string(std::min(max_features, hard_limit)));
  }
  const Formula formula = encode(model);
  std::vector<Configuration> out;
  const Formula::Mask end = Formula::Mask{1} << model.size();
  for (Formula::Mask m = 0; m < end; ++m) {
    if (!formula.holds(m)) continue;
    Configuration cfg;
    for (std::size_t i = 0; i < model.size(); ++i) {
      if (m & (Formula::Mask{1} << i)) cfg.insert(model.at(i).name);
    }
    out.push_back(std::move(cfg));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, ClosureReason> close_selection_traced(const FeatureModel& model,
                                                            const Configuration& seeds) {
  check_known(model, seeds);
  std::map<std::string, ClosureReason> out;
  std::deque<std::size_t> work;
  auto add = [&](std::size_t i, ClosureReason why) {
    if (out.emplace(model.at(i).name, why).second) work.push_back(i);
  };
  for (const auto& s : seeds) add(*model.index_of(s), ClosureReason::seed);
  add(0, ClosureReason::root);

  while (!work.empty()) {
    const std::size_t i = work.front();
    work.pop_front();
    const Feature& f = model.at(i);
    if (f.parent) add(*f.parent, ClosureReason::parent);
    if (f.group == GroupKind::none) {
      for (auto c : f.children) {
        if (model.at(c).kind == FeatureKind::mandatory) add(c, ClosureReason::mandatory);
      }
    }
    for (const auto& c : model.constraints()) {
      if (c.kind == ConstraintKind::implies && c.lhs == f.name) {
        add(*model.index_of(c.rhs), ClosureReason::implied);
      }
    }
  }
  return out;
}

Configuration close_selection(const FeatureModel& model, const Configuration& seeds) {
  Configuration out;
  for (const auto& [name, _] : close_selection_traced(model, seeds)) out.insert(name);
  return out;
}

}  // namespace localfeat
