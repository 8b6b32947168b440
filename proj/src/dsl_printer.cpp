#include <charconv>
#include <sstream>

#include "localfeat/dsl.hpp"

namespace localfeat::dsl {

std::string format_number(double value) {
  // Fixed notation: the grammar has no exponent syntax.
  char buf[512];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  return std::string(buf, ptr);
}

namespace {

constexpr std::string_view indent = "    ";

std::string clause(const std::optional<FeatureClause>& features) {
  if (!features) return {};
  std::string out = " WITH FEATURES (";
  for (std::size_t i = 0; i < features->features.size(); ++i) {
    if (i) out += ", ";
    out += features->features[i].text;
  }
  return out + ")";
}

std::string cardinality(const Cardinality& c) { return c.min + ".." + c.max; }

}  // namespace

std::string print(const EntityDecl& decl) {
  std::ostringstream out;
  out << "CREATE ENTITY " << decl.name.text << " (";
  for (std::size_t i = 0; i < decl.properties.size(); ++i) {
    const PropertyDecl& p = decl.properties[i];
    out << (i ? ",\n" : "\n") << indent << p.name.text << ' ' << p.type.text;
    for (auto f : p.flags) out << ' ' << to_string(f);
    if (p.relationship) {
      const Relationship& r = *p.relationship;
      out << " RELATIONSHIP";
      if (r.mapped_by) {
        out << " MAPPED_BY " << r.mapped_by->text;
      } else {
        out << '(' << cardinality(*r.source) << ", " << cardinality(*r.target) << ')';
        if (r.bidirectional) out << " BIDIRECTIONAL";
      }
    }
  }
  if (!decl.properties.empty()) out << '\n';
  out << ')' << clause(decl.features) << ';';
  return out.str();
}

std::string print(const LayerDecl& decl) {
  std::ostringstream out;
  out << "CREATE " << decl.source_kind << " LAYER " << decl.name.text << " AS " << decl.display_name << " FOR "
      << decl.entity.text << "\nWITH STYLES (";
  for (std::size_t i = 0; i < decl.styles.size(); ++i) {
    out << (i ? ",\n" : "\n") << indent << decl.styles[i].name.text;
    if (decl.styles[i].is_default) out << " DEFAULT";
  }
  out << "\n);";
  return out.str();
}

std::string print(const MapDecl& decl) {
  std::ostringstream out;
  out << "CREATE MAP " << decl.name.text << " AS " << decl.display_name << " WITH LAYERS (";
  for (std::size_t i = 0; i < decl.layers.size(); ++i) {
    const LayerRef& r = decl.layers[i];
    out << (i ? ",\n" : "\n") << indent << r.layer.text;
    for (auto f : r.flags) out << ' ' << to_string(f);
    out << clause(r.features);
  }
  out << "\n)";
  if (decl.center) {
    const BoundingBox& b = *decl.center;
    out << ", WITH CENTER [ [" << format_number(b.first.lat) << ", " << format_number(b.first.lon) << "], ["
        << format_number(b.second.lat) << ", " << format_number(b.second.lon) << "] ]";
  }
  if (decl.features) out << '\n' << clause(decl.features).substr(1);
  out << ';';
  return out.str();
}

std::string print(const ProductDecl& decl) {
  return "CREATE GIS " + decl.name.text + clause(decl.features) + ";";
}

namespace {

template <typename Products>
std::string print_grouped(const std::vector<EntityDecl>& entities, const std::vector<LayerDecl>& layers,
                          const std::vector<MapDecl>& maps, const Products& products) {
  std::string out;
  auto emit = [&](const std::string& statement) {
    if (!out.empty()) out += '\n';
    out += statement;
    out += '\n';
  };
  for (const auto& e : entities) emit(print(e));
  for (const auto& l : layers) emit(print(l));
  for (const auto& m : maps) emit(print(m));
  for (const auto& p : products) emit(print(p));
  return out;
}

}  // namespace

std::string print(const ProductSpec& spec) {
  return print_grouped(spec.entities, spec.layers, spec.maps, std::vector<ProductDecl>{spec.product});
}

std::string print(const Declarations& decls) {
  return print_grouped(decls.entities, decls.layers, decls.maps, decls.products);
}

}  // namespace localfeat::dsl
