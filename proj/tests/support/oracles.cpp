#include "support/oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace testsupport {

using namespace localfeat;

namespace {

using Configs = std::vector<Configuration>;

Configs product(const Configs& a, const Configs& b) {
  Configs out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      Configuration z = x;
      z.insert(y.begin(), y.end());
      out.push_back(std::move(z));
    }
  }
  return out;
}

// Configurations of the subtree rooted at `f`, given that `f` is selected.
Configs selected(const FeatureDecl& f) {
  Configs acc{{f.name}};
  if (f.group == GroupKind::xor_group) {
    Configs choices;
    for (const auto& c : f.children) {
      auto sub = selected(c);
      choices.insert(choices.end(), sub.begin(), sub.end());
    }
    return product(acc, choices);
  }
  if (f.group == GroupKind::or_group) {
    // Each child independently off or on, then drop the all-off choice.
    Configs choices{{}};
    for (const auto& c : f.children) {
      Configs with_c = product(choices, selected(c));
      choices.insert(choices.end(), with_c.begin(), with_c.end());
    }
    choices.erase(std::remove_if(choices.begin(), choices.end(),
                                 [&](const Configuration& cfg) {
                                   return std::none_of(f.children.begin(), f.children.end(),
                                                       [&](const FeatureDecl& c) { return cfg.contains(c.name); });
                                 }),
                  choices.end());
    return product(acc, choices);
  }
  for (const auto& c : f.children) {
    Configs options = selected(c);
    if (c.kind == FeatureKind::optional) options.push_back({});
    acc = product(acc, options);
  }
  return acc;
}

bool constraints_hold(const std::vector<CrossTreeConstraint>& constraints, const Configuration& cfg) {
  for (const auto& c : constraints) {
    const bool l = cfg.contains(c.lhs);
    const bool r = cfg.contains(c.rhs);
    if (c.kind == ConstraintKind::implies && l && !r) return false;
    if (c.kind == ConstraintKind::excludes && l && r) return false;
  }
  return true;
}

void walk(const FeatureDecl& f, const FeatureDecl* parent,
          const std::function<void(const FeatureDecl&, const FeatureDecl*)>& visit) {
  visit(f, parent);
  for (const auto& c : f.children) walk(c, &f, visit);
}

}  // namespace

std::vector<Configuration> generate_configurations(const FeatureDecl& root,
                                                   const std::vector<CrossTreeConstraint>& constraints) {
  Configs out;
  for (auto& cfg : selected(root)) {
    if (constraints_hold(constraints, cfg)) out.push_back(std::move(cfg));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool satisfies_rules(const FeatureDecl& root, const std::vector<CrossTreeConstraint>& constraints,
                     const Configuration& config) {
  if (!config.contains(root.name)) return false;
  bool ok = true;
  walk(root, nullptr, [&](const FeatureDecl& f, const FeatureDecl* parent) {
    if (!config.contains(f.name)) return;
    if (parent && !config.contains(parent->name)) ok = false;
    const auto picked = std::count_if(f.children.begin(), f.children.end(),
                                      [&](const FeatureDecl& c) { return config.contains(c.name); });
    switch (f.group) {
      case GroupKind::xor_group:
        if (picked != 1) ok = false;
        break;
      case GroupKind::or_group:
        if (picked < 1) ok = false;
        break;
      case GroupKind::none:
        for (const auto& c : f.children) {
          if (c.kind == FeatureKind::mandatory && !config.contains(c.name)) ok = false;
        }
        break;
    }
  });
  return ok && constraints_hold(constraints, config);
}

Configuration naive_closure(const FeatureDecl& root, const std::vector<CrossTreeConstraint>& constraints,
                            Configuration seeds) {
  seeds.insert(root.name);
  for (bool changed = true; changed;) {
    const auto before = seeds.size();
    walk(root, nullptr, [&](const FeatureDecl& f, const FeatureDecl* parent) {
      if (!seeds.contains(f.name)) return;
      if (parent) seeds.insert(parent->name);
      if (f.group != GroupKind::none) return;
      for (const auto& c : f.children) {
        if (c.kind == FeatureKind::mandatory) seeds.insert(c.name);
      }
    });
    for (const auto& c : constraints) {
      if (c.kind == ConstraintKind::implies && seeds.contains(c.lhs)) seeds.insert(c.rhs);
    }
    changed = seeds.size() != before;
  }
  return seeds;
}

std::vector<std::string> feature_names(const FeatureDecl& root) {
  std::vector<std::string> out;
  walk(root, nullptr, [&](const FeatureDecl& f, const FeatureDecl*) { out.push_back(f.name); });
  return out;
}

}  // namespace testsupport
