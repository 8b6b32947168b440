#include "localfeat/emitter.hpp"

#include <regex>

namespace localfeat {

using nlohmann::json;

namespace {

json feature_list(const Configuration& cfg) { return json(std::vector<std::string>(cfg.begin(), cfg.end())); }

json entity_json(const dsl::EntityDecl& e) {
  json props = json::array();
  for (const auto& p : e.properties) {
    json flags = json::array();
    for (auto f : p.flags) flags.push_back(std::string(dsl::to_string(f)));
    json prop{{"name", p.name.text}, {"type", p.type.text}, {"flags", std::move(flags)}};
    if (p.relationship) {
      const auto& r = *p.relationship;
      if (r.mapped_by) {
        prop["relationship"] = {{"mappedBy", r.mapped_by->text}};
      } else {
        prop["relationship"] = {{"source", r.source->min + ".." + r.source->max},
                                {"target", r.target->min + ".." + r.target->max},
                                {"bidirectional", r.bidirectional}};
      }
    }
    props.push_back(std::move(prop));
  }
  return {{"name", e.name.text}, {"properties", std::move(props)}};
}

json layer_json(const dsl::LayerDecl& l) {
  json styles = json::array();
  for (const auto& s : l.styles) styles.push_back({{"name", s.name.text}, {"default", s.is_default}});
  return {{"name", l.name.text},
          {"displayName", l.display_name},
          {"entity", l.entity.text},
          {"source", l.source_kind},
          {"styles", std::move(styles)}};
}

json map_json(const dsl::MapDecl& m) {
  json refs = json::array();
  for (const auto& r : m.layers) {
    json flags = json::array();
    for (auto f : r.flags) flags.push_back(std::string(dsl::to_string(f)));
    refs.push_back({{"layer", r.layer.text}, {"flags", std::move(flags)}});
  }
  json out{{"name", m.name.text}, {"displayName", m.display_name}, {"layers", std::move(refs)}};
  if (m.center) {
    const auto& b = *m.center;
    out["center"] = json::array({json::array({b.first.lat, b.first.lon}), json::array({b.second.lat, b.second.lon})});
  }
  return out;
}

}  // namespace

json derivation_config(const ResolvedProduct& resolved) {
  if (resolved.has_errors()) {
    throw Error(ErrorCode::UnresolvedErrors, "cannot emit '" + resolved.spec.product.name.text + "': " +
                                                 std::to_string(resolved.error_count()) + " unresolved error(s)");
  }
  const auto& spec = resolved.spec;
  json entities = json::array();
  for (const auto& e : spec.entities) entities.push_back(entity_json(e));
  json layers = json::array();
  for (const auto& l : spec.layers) layers.push_back(layer_json(l));
  json maps = json::array();
  for (const auto& m : spec.maps) maps.push_back(map_json(m));

  json bindings = json::object();
  for (const auto& [key, _] : resolved.effective) {
    if (!bindings.contains(key.element)) bindings[key.element] = feature_list(resolved.effective_of(key.element));
  }

  return {{"schemaVersion", 1},
          {"product", spec.product.name.text},
          {"features", json(resolved.included)},
          {"data", {{"entities", std::move(entities)}}},
          {"visualization", {{"layers", std::move(layers)}, {"maps", std::move(maps)}}},
          {"bindings", std::move(bindings)}};
}

std::string emit(const ResolvedProduct& resolved) { return derivation_config(resolved).dump(2) + "\n"; }

std::string default_output_name(const ResolvedProduct& resolved) {
  return resolved.spec.product.name.text + ".derivation.json";
}

bool verify_schema(std::string_view text) {
  static const json schema = json::parse(derivation_schema_text());
  json doc = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) return false;
  return schema_violations(doc, schema).empty();
}

namespace {

class SchemaChecker {
 public:
  explicit SchemaChecker(const json& root) : root_(root) {}

  void check(const json& doc, const json& schema, const std::string& at) {
    if (schema.is_boolean()) {
      if (!schema.get<bool>()) fail(at, "no value allowed");
      return;
    }
    if (auto ref = schema.find("$ref"); ref != schema.end()) {
      check(doc, resolve(ref->get<std::string>()), at);
    }
    if (auto t = schema.find("type"); t != schema.end()) {
      bool ok = false;
      if (t->is_array()) {
        for (const auto& name : *t) ok = ok || has_type(doc, name.get<std::string>());
      } else {
        ok = has_type(doc, t->get<std::string>());
      }
      if (!ok) {
        fail(at, "expected type " + t->dump() + ", found " + doc.type_name());
        return;
      }
    }
    if (auto c = schema.find("const"); c != schema.end() && doc != *c) fail(at, "expected " + c->dump());
    if (auto e = schema.find("enum"); e != schema.end()) {
      if (std::find(e->begin(), e->end(), doc) == e->end()) fail(at, doc.dump() + " is not one of " + e->dump());
    }
    if (doc.is_string()) {
      if (auto p = schema.find("pattern"); p != schema.end()) {
        if (!std::regex_search(doc.get<std::string>(), std::regex(p->get<std::string>()))) {
          fail(at, doc.dump() + " does not match " + p->dump());
        }
      }
    }
    if (doc.is_object()) check_object(doc, schema, at);
    if (doc.is_array()) check_array(doc, schema, at);
    if (auto any = schema.find("anyOf"); any != schema.end()) {
      if (count_matching(doc, *any) == 0) fail(at, "matches no anyOf branch");
    }
    if (auto one = schema.find("oneOf"); one != schema.end()) {
      auto n = count_matching(doc, *one);
      if (n != 1) fail(at, "matches " + std::to_string(n) + " oneOf branches, expected 1");
    }
  }

  std::vector<std::string> errors;

 private:
  void fail(const std::string& at, const std::string& message) {
    errors.push_back((at.empty() ? "/" : at) + ": " + message);
  }

  static bool has_type(const json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    if (type == "number") return doc.is_number();
    if (type == "integer") return doc.is_number_integer();
    return false;
  }

  static std::string escape(const std::string& key) {
    std::string out = "/";
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void check_object(const json& doc, const json& schema, const std::string& at) {
    if (auto req = schema.find("required"); req != schema.end()) {
      for (const auto& name : *req) {
        if (!doc.contains(name.get<std::string>())) fail(at, "missing required property " + name.dump());
      }
    }
    const auto props = schema.find("properties");
    const auto extra = schema.find("additionalProperties");
    const auto names = schema.find("propertyNames");
    for (const auto& [key, value] : doc.items()) {
      const std::string path = at + escape(key);
      if (names != schema.end()) check(json(key), *names, path);
      if (props != schema.end() && props->contains(key)) {
        check(value, (*props)[key], path);
      } else if (extra != schema.end()) {
        if (extra->is_boolean() && !extra->get<bool>()) {
          fail(at, "unexpected property \"" + key + "\"");
        } else {
          check(value, *extra, path);
        }
      }
    }
  }

  void check_array(const json& doc, const json& schema, const std::string& at) {
    if (auto n = schema.find("minItems"); n != schema.end() && doc.size() < n->get<std::size_t>()) {
      fail(at, "fewer than " + n->dump() + " items");
    }
    if (auto n = schema.find("maxItems"); n != schema.end() && doc.size() > n->get<std::size_t>()) {
      fail(at, "more than " + n->dump() + " items");
    }
    if (auto u = schema.find("uniqueItems"); u != schema.end() && u->get<bool>()) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        for (std::size_t j = i + 1; j < doc.size(); ++j) {
          if (doc[i] == doc[j]) fail(at, "duplicate item " + doc[i].dump());
        }
      }
    }
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < doc.size(); ++i) check(doc[i], *items, at + "/" + std::to_string(i));
    }
  }

  std::size_t count_matching(const json& doc, const json& branches) {
    std::size_t n = 0;
    for (const auto& b : branches) {
      SchemaChecker sub(root_);
      sub.check(doc, b, "");
      if (sub.errors.empty()) ++n;
    }
    return n;
  }

  const json& resolve(const std::string& ref) const {
    if (ref.rfind("#", 0) != 0) throw std::invalid_argument("only local $ref supported: " + ref);
    return root_.at(json::json_pointer(ref.substr(1)));
  }

  const json& root_;
};

}  // namespace

std::vector<std::string> schema_violations(const json& document, const json& schema) {
  SchemaChecker checker(schema);
  checker.check(document, schema, "");
  return std::move(checker.errors);
}

}  // namespace localfeat
