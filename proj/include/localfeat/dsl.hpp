#pragma once

// Product-specification language: entities of the data model, layers and
// maps of the visualization model, and the product statement, each with an
// optional WITH FEATURES clause.
//
//   CREATE ENTITY Hotel (
//       id Long IDENTIFIER,
//       municipality Municipality RELATIONSHIP MAPPED_BY hotels
//   ) WITH FEATURES (Form, List);
//
// See docs/grammar.md for the full grammar.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "localfeat/error.hpp"

namespace localfeat::dsl {

/// Source position of an AST node. Positions are metadata only: two nodes
/// that differ just in where they were written compare equal.
struct SourceRange : Span {};
inline bool operator==(const SourceRange&, const SourceRange&) { return true; }

struct Ident {
  std::string text;
  SourceRange span;

  bool operator==(const Ident&) const = default;
};

/// A `WITH FEATURES (...)` clause. Absence of the clause is modelled as an
/// empty std::optional, which differs from an empty list.
struct FeatureClause {
  std::vector<Ident> features;
  SourceRange span;

  bool operator==(const FeatureClause&) const = default;
};

enum class PropertyFlag { identifier, display_string, required };
std::string_view to_string(PropertyFlag flag);

/// Primitive property types. Any other type name refers to an entity.
bool is_primitive_type(std::string_view type);

struct Cardinality {
  std::string min;
  std::string max;  // digits or "*"

  bool operator==(const Cardinality&) const = default;
};

struct Relationship {
  // Either cardinalities (optionally bidirectional) or mapped_by.
  std::optional<Cardinality> source;
  std::optional<Cardinality> target;
  bool bidirectional = false;
  std::optional<Ident> mapped_by;

  bool operator==(const Relationship&) const = default;
};

struct PropertyDecl {
  Ident name;
  Ident type;
  std::vector<PropertyFlag> flags;
  std::optional<Relationship> relationship;
  SourceRange span;

  bool has_flag(PropertyFlag f) const;
  bool operator==(const PropertyDecl&) const = default;
};

struct EntityDecl {
  Ident name;
  std::vector<PropertyDecl> properties;
  std::optional<FeatureClause> features;
  SourceRange span;

  bool operator==(const EntityDecl&) const = default;
};

struct StyleDecl {
  Ident name;
  bool is_default = false;

  bool operator==(const StyleDecl&) const = default;
};

struct LayerDecl {
  Ident name;
  std::string display_name;
  std::string source_kind;  // GEOJSON
  Ident entity;
  std::vector<StyleDecl> styles;
  SourceRange span;

  bool operator==(const LayerDecl&) const = default;
};

enum class LayerFlag { is_base_layer, default_base_layer };
std::string_view to_string(LayerFlag flag);

struct LayerRef {
  Ident layer;
  std::vector<LayerFlag> flags;
  std::optional<FeatureClause> features;
  SourceRange span;

  bool has_flag(LayerFlag f) const;
  bool operator==(const LayerRef&) const = default;
};

struct LatLon {
  double lat = 0;
  double lon = 0;

  bool operator==(const LatLon&) const = default;
};

struct BoundingBox {
  LatLon first;
  LatLon second;

  bool operator==(const BoundingBox&) const = default;
};

struct MapDecl {
  Ident name;
  std::string display_name;
  std::vector<LayerRef> layers;
  std::optional<BoundingBox> center;
  std::optional<FeatureClause> features;
  SourceRange span;

  bool operator==(const MapDecl&) const = default;
};

struct ProductDecl {
  Ident name;
  std::optional<FeatureClause> features;
  SourceRange span;

  bool operator==(const ProductDecl&) const = default;
};

/// Statements of a source text in declaration order per kind, without the
/// one-product rule. Used for partial inputs.
struct Declarations {
  std::vector<EntityDecl> entities;
  std::vector<LayerDecl> layers;
  std::vector<MapDecl> maps;
  std::vector<ProductDecl> products;

  bool operator==(const Declarations&) const = default;
};

struct ProductSpec {
  std::vector<EntityDecl> entities;
  std::vector<LayerDecl> layers;
  std::vector<MapDecl> maps;
  ProductDecl product;

  bool operator==(const ProductSpec&) const = default;
};

/// Parses any sequence of statements. Throws ParseError.
Declarations parse_declarations(std::string_view source);

/// Parses a complete product specification: exactly one CREATE GIS
/// statement is required. Names are not resolved. Throws ParseError with
/// SyntaxError, DuplicateFlag, InvalidDeclaration, MultipleProducts or
/// MissingProduct.
ProductSpec parse(std::string_view source);

/// Canonical text: declarations grouped as entities, layers, maps, product;
/// four-space indentation inside parentheses; a blank line between
/// statements; absent feature clauses omitted.
std::string print(const ProductSpec& spec);
std::string print(const Declarations& decls);
std::string print(const EntityDecl& decl);
std::string print(const LayerDecl& decl);
std::string print(const MapDecl& decl);
std::string print(const ProductDecl& decl);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

}  // namespace localfeat::dsl
