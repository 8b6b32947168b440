#include <algorithm>
#include <array>
#include <charconv>

#include "localfeat/dsl.hpp"
#include "localfeat/lexer.hpp"

namespace localfeat::dsl {

std::string_view to_string(PropertyFlag flag) {
  switch (flag) {
    case PropertyFlag::identifier: return "IDENTIFIER";
    case PropertyFlag::display_string: return "DISPLAY_STRING";
    case PropertyFlag::required: return "REQUIRED";
  }
  return "?";
}

std::string_view to_string(LayerFlag flag) {
  return flag == LayerFlag::is_base_layer ? "IS_BASE_LAYER" : "DEFAULT_BASE_LAYER";
}

bool is_primitive_type(std::string_view type) {
  static constexpr std::array types{"Long",    "Integer", "Double",     "String", "Boolean",
                                    "Date",    "Point",   "LineString", "Polygon"};
  return std::find(types.begin(), types.end(), type) != types.end();
}

bool PropertyDecl::has_flag(PropertyFlag f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

bool LayerRef::has_flag(LayerFlag f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

SourceRange range(const Span& s) { return SourceRange{s}; }

Ident ident(const Token& t) { return Ident{t.text, range(t.span)}; }

[[noreturn]] void invalid(const Span& at, const std::string& message) {
  throw ParseError(ErrorCode::InvalidDeclaration, message, at);
}

class Parser {
 public:
  explicit Parser(std::string_view source) : cur_(tokenize(source, Dialect::product)) {}

  Declarations declarations() {
    Declarations out;
    while (!cur_.at_end()) statement(out);
    return out;
  }

  const Token& current() const { return cur_.peek(); }

 private:
  void statement(Declarations& out) {
    const Token& create = cur_.peek();
    if (!cur_.accept_keyword("CREATE")) cur_.fail({"CREATE"});
    if (cur_.check_keyword("ENTITY")) {
      out.entities.push_back(entity(create));
    } else if (cur_.check_keyword("GEOJSON")) {
      out.layers.push_back(layer(create));
    } else if (cur_.check_keyword("MAP")) {
      out.maps.push_back(map(create));
    } else if (cur_.check_keyword("GIS")) {
      out.products.push_back(product(create));
    } else {
      cur_.fail({"ENTITY", "GEOJSON", "MAP", "GIS"});
    }
  }

  std::optional<FeatureClause> feature_clause_opt() {
    if (!cur_.check_keyword("WITH") || !cur_.check_keyword("FEATURES", 1)) return std::nullopt;
    return feature_clause();
  }

  FeatureClause feature_clause() {
    const Token& with = cur_.expect_keyword("WITH");
    cur_.expect_keyword("FEATURES");
    FeatureClause clause;
    cur_.expect(TokenKind::lparen);
    if (!cur_.check(TokenKind::rparen)) {
      do {
        clause.features.push_back(ident(cur_.expect_identifier("feature name")));
      } while (cur_.accept(TokenKind::comma));
    }
    if (!cur_.accept(TokenKind::rparen)) cur_.fail({"','", "')'"});
    clause.span = range(cur_.span_from(with));
    return clause;
  }

  std::string display_name() {
    std::string out;
    while (cur_.check(TokenKind::identifier) || cur_.check(TokenKind::number)) {
      if (!out.empty()) out += ' ';
      out += cur_.advance().text;
    }
    if (out.empty()) cur_.fail({"display name"});
    return out;
  }

  Cardinality cardinality() {
    Cardinality c;
    const Token& lo = cur_.expect(TokenKind::number);
    if (!is_count(lo.text)) cur_.fail_at(lo, {"non-negative integer"});
    c.min = lo.text;
    cur_.expect(TokenKind::dotdot);
    if (cur_.check(TokenKind::star)) {
      c.max = cur_.advance().text;
    } else if (cur_.check(TokenKind::number) && is_count(cur_.peek().text)) {
      c.max = cur_.advance().text;
    } else {
      cur_.fail({"non-negative integer", "'*'"});
    }
    return c;
  }

  static bool is_count(const std::string& text) {
    return !text.empty() && std::all_of(text.begin(), text.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
  }

  PropertyDecl property() {
    const Token& first = cur_.peek();
    PropertyDecl p;
    p.name = ident(cur_.expect_identifier("property name"));
    p.type = ident(cur_.expect_identifier("property type"));
    while (true) {
      std::optional<PropertyFlag> flag;
      if (cur_.check_keyword("IDENTIFIER")) flag = PropertyFlag::identifier;
      else if (cur_.check_keyword("DISPLAY_STRING")) flag = PropertyFlag::display_string;
      else if (cur_.check_keyword("REQUIRED")) flag = PropertyFlag::required;
      if (!flag) break;
      const Token& t = cur_.advance();
      if (p.has_flag(*flag)) {
        throw ParseError(ErrorCode::DuplicateFlag, "flag " + t.text + " repeated on property '" + p.name.text + "'",
                         t.span);
      }
      p.flags.push_back(*flag);
    }
    const bool primitive = is_primitive_type(p.type.text);
    if (cur_.check_keyword("RELATIONSHIP")) {
      const Token& rel = cur_.advance();
      if (primitive) invalid(rel.span, "property '" + p.name.text + "' of primitive type " + p.type.text +
                                           " cannot declare a RELATIONSHIP");
      Relationship r;
      if (cur_.accept(TokenKind::lparen)) {
        r.source = cardinality();
        cur_.expect(TokenKind::comma);
        r.target = cardinality();
        cur_.expect(TokenKind::rparen);
        r.bidirectional = cur_.accept_keyword("BIDIRECTIONAL");
      } else if (cur_.accept_keyword("MAPPED_BY")) {
        r.mapped_by = ident(cur_.expect_identifier("property name"));
      } else {
        cur_.fail({"'('", "MAPPED_BY"});
      }
      p.relationship = std::move(r);
    } else if (!primitive) {
      cur_.fail({"IDENTIFIER", "DISPLAY_STRING", "REQUIRED", "RELATIONSHIP"});
    }
    p.span = range(cur_.span_from(first));
    return p;
  }

  EntityDecl entity(const Token& create) {
    cur_.expect_keyword("ENTITY");
    EntityDecl e;
    e.name = ident(cur_.expect_identifier("entity name"));
    cur_.expect(TokenKind::lparen);
    if (!cur_.check(TokenKind::rparen)) {
      do {
        e.properties.push_back(property());
      } while (cur_.accept(TokenKind::comma));
    }
    if (!cur_.accept(TokenKind::rparen)) cur_.fail({"','", "')'"});
    for (auto flag : {PropertyFlag::identifier, PropertyFlag::display_string}) {
      auto n = std::count_if(e.properties.begin(), e.properties.end(),
                             [&](const PropertyDecl& p) { return p.has_flag(flag); });
      if (n > 1) {
        invalid(e.name.span, "entity '" + e.name.text + "' has more than one " + std::string(to_string(flag)) +
                                 " property");
      }
    }
    e.features = feature_clause_opt();
    terminate();
    e.span = range(cur_.span_from(create));
    return e;
  }

  LayerDecl layer(const Token& create) {
    LayerDecl l;
    l.source_kind = cur_.expect_keyword("GEOJSON").text;
    cur_.expect_keyword("LAYER");
    l.name = ident(cur_.expect_identifier("layer name"));
    cur_.expect_keyword("AS");
    l.display_name = display_name();
    cur_.expect_keyword("FOR");
    l.entity = ident(cur_.expect_identifier("entity name"));
    cur_.expect_keyword("WITH");
    cur_.expect_keyword("STYLES");
    cur_.expect(TokenKind::lparen);
    do {
      StyleDecl s;
      s.name = ident(cur_.expect_identifier("style name"));
      if (cur_.check_keyword("DEFAULT")) {
        const Token& d = cur_.advance();
        if (std::any_of(l.styles.begin(), l.styles.end(), [](const StyleDecl& x) { return x.is_default; })) {
          invalid(d.span, "layer '" + l.name.text + "' has more than one DEFAULT style");
        }
        s.is_default = true;
      }
      l.styles.push_back(std::move(s));
    } while (cur_.accept(TokenKind::comma));
    if (!cur_.accept(TokenKind::rparen)) cur_.fail({"','", "')'"});
    terminate();
    l.span = range(cur_.span_from(create));
    return l;
  }

  LayerRef layer_ref() {
    const Token& first = cur_.peek();
    LayerRef r;
    r.layer = ident(cur_.expect_identifier("layer name"));
    while (true) {
      std::optional<LayerFlag> flag;
      if (cur_.check_keyword("IS_BASE_LAYER")) flag = LayerFlag::is_base_layer;
      else if (cur_.check_keyword("DEFAULT_BASE_LAYER")) flag = LayerFlag::default_base_layer;
      if (!flag) break;
      const Token& t = cur_.advance();
      if (r.has_flag(*flag)) {
        throw ParseError(ErrorCode::DuplicateFlag, "flag " + t.text + " repeated on layer '" + r.layer.text + "'",
                         t.span);
      }
      r.flags.push_back(*flag);
    }
    if (r.has_flag(LayerFlag::default_base_layer) && !r.has_flag(LayerFlag::is_base_layer)) {
      invalid(r.layer.span, "layer '" + r.layer.text + "' is DEFAULT_BASE_LAYER but not IS_BASE_LAYER");
    }
    r.features = feature_clause_opt();
    r.span = range(cur_.span_from(first));
    return r;
  }

  double coordinate() {
    const Token& t = cur_.expect(TokenKind::number);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) cur_.fail_at(t, {"decimal number"});
    return v;
  }

  LatLon corner() {
    cur_.expect(TokenKind::lbracket);
    LatLon p;
    p.lat = coordinate();
    cur_.expect(TokenKind::comma);
    p.lon = coordinate();
    cur_.expect(TokenKind::rbracket);
    return p;
  }

  MapDecl map(const Token& create) {
    cur_.expect_keyword("MAP");
    MapDecl m;
    m.name = ident(cur_.expect_identifier("map name"));
    cur_.expect_keyword("AS");
    m.display_name = display_name();
    cur_.expect_keyword("WITH");
    cur_.expect_keyword("LAYERS");
    cur_.expect(TokenKind::lparen);
    do {
      m.layers.push_back(layer_ref());
    } while (cur_.accept(TokenKind::comma));
    if (!cur_.accept(TokenKind::rparen)) cur_.fail({"','", "')'"});

    // CENTER and FEATURES may come in either order, each at most once.
    while (true) {
      if (cur_.check(TokenKind::comma) && !m.center) {
        cur_.advance();
        cur_.expect_keyword("WITH");
        cur_.expect_keyword("CENTER");
        cur_.expect(TokenKind::lbracket);
        BoundingBox box;
        box.first = corner();
        cur_.expect(TokenKind::comma);
        box.second = corner();
        cur_.expect(TokenKind::rbracket);
        m.center = box;
      } else if (cur_.check_keyword("WITH") && cur_.check_keyword("CENTER", 1) && !m.center) {
        cur_.fail({"','"});
      } else if (cur_.check_keyword("WITH") && !m.features) {
        m.features = feature_clause();
      } else {
        break;
      }
    }

    auto bases = std::count_if(m.layers.begin(), m.layers.end(),
                               [](const LayerRef& r) { return r.has_flag(LayerFlag::is_base_layer); });
    if (bases != 1) {
      invalid(m.name.span, "map '" + m.name.text + "' must have exactly one IS_BASE_LAYER layer, found " +
                               std::to_string(bases));
    }
    terminate();
    m.span = range(cur_.span_from(create));
    return m;
  }

  ProductDecl product(const Token& create) {
    cur_.expect_keyword("GIS");
    ProductDecl p;
    p.name = ident(cur_.expect_identifier("product name"));
    if (cur_.check_keyword("WITH")) p.features = feature_clause();
    terminate();
    p.span = range(cur_.span_from(create));
    return p;
  }

  void terminate() {
    if (!cur_.accept(TokenKind::semicolon)) {
      if (cur_.check_keyword("WITH")) cur_.fail({"WITH FEATURES", "';'"});
      cur_.fail({"';'"});
    }
  }

  TokenCursor cur_;
};

}  // namespace

Declarations parse_declarations(std::string_view source) {
  Parser p(source);
  return p.declarations();
}

ProductSpec parse(std::string_view source) {
  Parser p(source);
  Declarations d = p.declarations();
  if (d.products.empty()) {
    throw ParseError(ErrorCode::MissingProduct, "missing CREATE GIS product statement", p.current().span);
  }
  if (d.products.size() > 1) {
    throw ParseError(ErrorCode::MultipleProducts,
                     "more than one CREATE GIS product statement (first is '" + d.products.front().name.text + "')",
                     d.products[1].span);
  }
  return ProductSpec{std::move(d.entities), std::move(d.layers), std::move(d.maps), std::move(d.products.front())};
}

}  // namespace localfeat::dsl
