#include "localfeat/resolver.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace localfeat {

std::string_view to_string(Severity severity) { return severity == Severity::error ? "error" : "warning"; }

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::local_binding: return "local";
    case Origin::global_default: return "global-default";
    case Origin::closure_parent: return "closure(parent)";
    case Origin::closure_mandatory: return "closure(mandatory)";
    case Origin::closure_requires: return "closure(requires)";
  }
  return "?";
}

std::size_t ResolvedProduct::error_count() const {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                [](const Diagnostic& d) { return d.severity == Severity::error; }));
}

std::size_t ResolvedProduct::warning_count() const { return diagnostics.size() - error_count(); }

Configuration ResolvedProduct::effective_of(std::string_view qname) const {
  Configuration out;
  for (const auto& [key, cfg] : effective) {
    if (key.element == qname) out.insert(cfg.begin(), cfg.end());
  }
  return out;
}

namespace elements {
std::string entity(std::string_view name) { return qualified_name(data, name); }
std::string layer(std::string_view name) { return qualified_name(visualization, name); }
std::string map(std::string_view name) { return qualified_name(visualization, name); }
std::string layer_in_map(std::string_view map, std::string_view layer) {
  std::string local(map);
  local += '.';
  local += layer;
  return qualified_name(visualization, local);
}
}  // namespace elements

namespace {

// Ancestors plus mandatory descendants, without requires propagation.
Configuration structural_closure(const FeatureModel& model, const Configuration& seeds) {
  Configuration out;
  std::deque<std::size_t> work;
  auto add = [&](std::size_t i) {
    if (out.insert(model.at(i).name).second) work.push_back(i);
  };
  add(0);
  for (const auto& s : seeds) add(*model.index_of(s));
  while (!work.empty()) {
    const Feature& f = model.at(work.front());
    work.pop_front();
    if (f.parent) add(*f.parent);
    if (f.group != GroupKind::none) continue;
    for (auto c : f.children) {
      if (model.at(c).kind == FeatureKind::mandatory) add(c);
    }
  }
  return out;
}

std::optional<std::size_t> lowest_common_ancestor(const FeatureModel& model, std::size_t a, std::size_t b) {
  std::set<std::size_t> ancestors;
  for (std::optional<std::size_t> i = a; i; i = model.at(*i).parent) ancestors.insert(*i);
  for (std::optional<std::size_t> i = b; i; i = model.at(*i).parent) {
    if (ancestors.contains(*i)) return i;
  }
  return std::nullopt;
}

// A default is overridden when a product seed picks a different alternative
// of the same xor group.
bool overridden(const FeatureModel& model, const std::string& def, const Configuration& seeds) {
  const std::size_t d = *model.index_of(def);
  for (const auto& s : seeds) {
    const std::size_t si = *model.index_of(s);
    auto lca = lowest_common_ancestor(model, d, si);
    if (lca && *lca != d && *lca != si && model.at(*lca).group == GroupKind::xor_group) return true;
  }
  return false;
}

Origin origin_of(ClosureReason reason, Origin seeded) {
  switch (reason) {
    case ClosureReason::seed:
    case ClosureReason::root: return seeded;
    case ClosureReason::parent: return Origin::closure_parent;
    case ClosureReason::mandatory: return Origin::closure_mandatory;
    case ClosureReason::implied: return Origin::closure_requires;
  }
  return seeded;
}

class Resolver {
 public:
  Resolver(const dsl::ProductSpec& spec, const spl::SplDefinition& spl)
      : spec_(spec), spl_(spl), mm_(spl.functional) {}

  ResolvedProduct run() {
    for (const auto& v : spl_.viewpoints) mm_.add_viewpoint(v);
    for (const auto& d : spl_.applied_to) mm_.declare_applied_to(d.local_model, d.viewpoint, d.metaclass);

    populate();
    check_names();
    select_global();
    bind_all();
    check_defaults();

    ResolvedProduct out{spec_, mm_, {}, {}, {}, {}};
    for (const auto& key : mm_.covered_elements()) {
      out.effective.emplace(key, mm_.effective_configuration(key.element, key.local_model));
      out.provenance.emplace(key, trace(key));
    }
    auto included = mm_.included_features();
    out.included.assign(included.begin(), included.end());
    std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return std::tie(a.span.line, a.span.column, a.code) < std::tie(b.span.line, b.span.column, b.code);
    });
    out.diagnostics = std::move(diags_);
    return out;
  }

 private:
  void error(std::string code, std::string message, const Span& at) {
    diags_.push_back({Severity::error, std::move(code), std::move(message), at});
  }
  void warning(std::string code, std::string message, const Span& at) {
    diags_.push_back({Severity::warning, std::move(code), std::move(message), at});
  }

  ViewpointModel* viewpoint_with(std::string_view name, std::string_view metaclass, const Span& at) {
    auto it = mm_.viewpoints().find(std::string(name));
    if (it == mm_.viewpoints().end() || !it->second.has_metaclass(metaclass)) {
      if (reported_missing_.insert(std::string(name) + "." + std::string(metaclass)).second) {
        error("UnknownMetaclass",
              "product line has no metaclass '" + std::string(metaclass) + "' in viewpoint '" + std::string(name) + "'",
              at);
      }
      return nullptr;
    }
    return &mm_.viewpoint(name);
  }

  void add(std::string_view vp_name, std::string_view metaclass, const std::string& name, const Span& at,
           Attributes attributes = {}) {
    ViewpointModel* vp = viewpoint_with(vp_name, metaclass, at);
    if (!vp) return;
    if (vp->find(name)) {
      error("DuplicateName", "'" + qualified_name(vp_name, name) + "' is declared more than once", at);
      return;
    }
    vp->add_entity(name, std::string(metaclass), std::move(attributes));
  }

  void populate() {
    for (const auto& e : spec_.entities) add(elements::data, "Entity", e.name.text, e.name.span);
    for (const auto& l : spec_.layers) {
      add(elements::visualization, "Layer", l.name.text, l.name.span,
          {{"displayName", l.display_name}, {"entity", l.entity.text}, {"source", l.source_kind}});
    }
    for (const auto& m : spec_.maps) {
      add(elements::visualization, "Map", m.name.text, m.name.span, {{"displayName", m.display_name}});
      for (const auto& r : m.layers) {
        add(elements::visualization, "LayerInMap", m.name.text + "." + r.layer.text, r.layer.span);
      }
    }
  }

  const dsl::EntityDecl* entity(std::string_view name) const {
    for (const auto& e : spec_.entities) {
      if (e.name.text == name) return &e;
    }
    return nullptr;
  }

  void check_names() {
    for (const auto& e : spec_.entities) {
      std::set<std::string> seen;
      for (const auto& p : e.properties) {
        if (!seen.insert(p.name.text).second) {
          error("DuplicateName", "property '" + p.name.text + "' repeated in entity '" + e.name.text + "'",
                p.name.span);
        }
        if (!p.relationship) continue;
        const dsl::EntityDecl* target = entity(p.type.text);
        if (!target) {
          error("UnknownEntity", "relationship target '" + p.type.text + "' is not a declared entity", p.type.span);
          continue;
        }
        if (mm_.find_element(elements::entity(e.name.text)) && mm_.find_element(elements::entity(target->name.text))) {
          mm_.add_relationship(elements::data, {e.name.text + "." + p.name.text, elements::entity(e.name.text),
                                                elements::entity(target->name.text), {}});
        }
        if (p.relationship->mapped_by) check_mapped_by(e, p, *target);
      }
    }

    for (const auto& l : spec_.layers) {
      if (!entity(l.entity.text)) {
        error("UnknownEntity", "layer '" + l.name.text + "' is FOR undeclared entity '" + l.entity.text + "'",
              l.entity.span);
      }
      std::set<std::string> styles;
      for (const auto& s : l.styles) {
        if (!styles.insert(s.name.text).second) {
          error("DuplicateStyle", "style '" + s.name.text + "' repeated in layer '" + l.name.text + "'", s.name.span);
        }
      }
    }

    std::set<std::string> layer_names;
    for (const auto& l : spec_.layers) layer_names.insert(l.name.text);
    for (const auto& m : spec_.maps) {
      for (const auto& r : m.layers) {
        // Base layers are background tile sources, not declared layers.
        if (r.has_flag(dsl::LayerFlag::is_base_layer)) continue;
        if (!layer_names.contains(r.layer.text)) {
          error("UnknownLayer", "map '" + m.name.text + "' references undeclared layer '" + r.layer.text + "'",
                r.layer.span);
        }
      }
    }
  }

  void check_mapped_by(const dsl::EntityDecl& owner, const dsl::PropertyDecl& p, const dsl::EntityDecl& target) {
    const auto& other_name = p.relationship->mapped_by->text;
    const auto at = p.relationship->mapped_by->span;
    auto it = std::find_if(target.properties.begin(), target.properties.end(),
                           [&](const dsl::PropertyDecl& q) { return q.name.text == other_name; });
    if (it == target.properties.end()) {
      error("BadMappedBy", "MAPPED_BY '" + other_name + "': entity '" + target.name.text + "' has no such property",
            at);
      return;
    }
    const dsl::PropertyDecl& q = *it;
    if (!q.relationship || q.relationship->mapped_by || !q.relationship->bidirectional) {
      error("BadMappedBy", "MAPPED_BY '" + other_name + "': '" + target.name.text + "." + other_name +
                               "' is not a BIDIRECTIONAL relationship",
            at);
      return;
    }
    if (q.type.text != owner.name.text) {
      error("BadMappedBy", "MAPPED_BY '" + other_name + "': '" + target.name.text + "." + other_name +
                               "' targets '" + q.type.text + "', not '" + owner.name.text + "'",
            at);
    }
  }

  // Every seed must belong to `model`; reports the others and drops them.
  Configuration seeds_in(const FeatureModel& model, const dsl::FeatureClause& clause, const std::string& element) {
    Configuration seeds;
    for (const auto& f : clause.features) {
      if (model.contains(f.text)) {
        seeds.insert(f.text);
        continue;
      }
      std::string where;
      for (const auto& [name, local] : mm_.functional().locals()) {
        if (local.contains(f.text)) where = name;
      }
      std::string msg = "'" + f.text + "' is not a feature of '" + model.name() + "'";
      if (!where.empty()) msg += " (it belongs to local model '" + where + "')";
      else if (mm_.functional().global().contains(f.text)) msg += " (it is a global feature)";
      if (!element.empty()) msg += " in the clause of '" + element + "'";
      error("UnknownFeature", msg, f.span);
    }
    return seeds;
  }

  void select_global() {
    const FeatureModel& global = mm_.functional().global();
    Configuration seeds;
    Span at = spec_.product.span;
    if (spec_.product.features) {
      seeds = seeds_in(global, *spec_.product.features, "");
      at = spec_.product.features->span;
    }
    for (const auto& d : spl_.defaults) {
      if (!overridden(global, d, seeds)) seeds.insert(d);
    }
    auto closed = close_selection(global, seeds);
    auto report = validate_configuration(global, closed);
    for (const auto& v : report.violations) {
      error("InvalidSelection", "global selection of product '" + spec_.product.name.text + "': " + v.message, at);
    }
    if (report.valid()) mm_.set_global_selection(closed);
  }

  void bind(const std::string& qname, const dsl::FeatureClause& clause) {
    if (!mm_.find_element(qname)) return;
    // A repeated declaration was already reported; its clause is not bound.
    if (!bound_.insert(qname).second) return;
    auto locals = mm_.applicable_locals(qname);
    if (locals.empty()) {
      error("NotApplicable", "no local feature model is applied to '" + qname + "'", clause.span);
      return;
    }
    if (locals.size() > 1) {
      error("AmbiguousLocalModel", "several local feature models apply to '" + qname + "'", clause.span);
      return;
    }
    const FeatureModel& local = mm_.functional().local(locals.front());
    Configuration seeds = seeds_in(local, clause, qname);

    const auto structural = structural_closure(local, seeds);
    for (const auto& c : local.constraints()) {
      if (c.kind == ConstraintKind::implies && seeds.contains(c.lhs) && !structural.contains(c.rhs)) {
        error("RequiresViolation", "'" + qname + "': " + c.lhs + " requires " + c.rhs + ", which is not selected",
              clause.span);
      }
    }

    seeds.insert(local.name());
    auto report = validate_configuration(local, close_selection(local, seeds));
    for (const auto& v : report.violations) {
      error("InvalidSelection", "'" + qname + "': " + v.message, clause.span);
    }
    if (!report.valid()) return;
    mm_.bind_local(qname, local.name(), seeds);
    clause_of_[{qname, local.name()}] = clause.span;
    seeds_of_[{qname, local.name()}] = seeds;
  }

  void bind_all() {
    for (const auto& e : spec_.entities) {
      if (e.features) bind(elements::entity(e.name.text), *e.features);
    }
    for (const auto& m : spec_.maps) {
      if (m.features) bind(elements::map(m.name.text), *m.features);
      for (const auto& r : m.layers) {
        if (r.features) bind(elements::layer_in_map(m.name.text, r.layer.text), *r.features);
      }
    }
  }

  void check_defaults() {
    const auto covered = mm_.covered_elements();
    for (const auto& [name, local] : mm_.functional().locals()) {
      bool used = false;
      bool applies = false;
      for (const auto& key : covered) {
        if (key.local_model != name) continue;
        applies = true;
        if (!mm_.binding(key.element, name)) used = true;
      }
      if (!applies) continue;
      auto report = validate_configuration(local, mm_.global_default(name));
      for (const auto& v : report.violations) {
        std::string msg = "global default for '" + name + "' is invalid: " + v.message;
        if (used) error("InvalidDefault", msg, spec_.product.span);
        else warning("InvalidDefault", msg + " (no element falls back to it)", spec_.product.span);
      }
    }
  }

  std::vector<Provenance> trace(const ElementKey& key) const {
    const FeatureModel& local = mm_.functional().local(key.local_model);
    std::vector<Provenance> out;
    Configuration seeds;
    Origin seeded;
    Span at;
    if (auto it = seeds_of_.find(key); it != seeds_of_.end()) {
      seeds = it->second;
      seeded = Origin::local_binding;
      at = clause_of_.at(key);
    } else {
      seeds.insert(local.name());
      for (const auto& n : mm_.functional().global().subtree(local.name())) {
        if (mm_.global_selection().contains(n)) seeds.insert(n);
      }
      seeded = Origin::global_default;
      at = spec_.product.span;
    }
    for (const auto& [feature, reason] : close_selection_traced(local, seeds)) {
      out.push_back({feature, key.local_model, origin_of(reason, seeded), at});
    }
    return out;
  }

  const dsl::ProductSpec& spec_;
  const spl::SplDefinition& spl_;
  Multimodel mm_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> reported_missing_;
  std::set<std::string> bound_;
  std::map<ElementKey, Span> clause_of_;
  std::map<ElementKey, Configuration> seeds_of_;
};

}  // namespace

ResolvedProduct resolve(const dsl::ProductSpec& spec, const spl::SplDefinition& spl) {
  return Resolver(spec, spl).run();
}

std::vector<Provenance> explain(const ResolvedProduct& resolved, std::string_view qname) {
  resolved.multimodel.element(qname);
  std::vector<Provenance> out;
  for (const auto& [key, rows] : resolved.provenance) {
    if (key.element == qname) out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

}  // namespace localfeat
