#include "localfeat/spl_definition.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "localfeat/lexer.hpp"

namespace localfeat::spl {

namespace {

SourceRange range(const Span& s) { return SourceRange{s}; }

class Parser {
 public:
  explicit Parser(std::string_view source) : cur_(tokenize(source, Dialect::spl)) {}

  SplAst run() {
    SplAst ast;
    while (!cur_.at_end()) {
      const Token& first = cur_.peek();
      if (cur_.accept_keyword("VIEWPOINT")) {
        ViewpointDecl v;
        v.name = cur_.expect_identifier("viewpoint name").text;
        cur_.expect(TokenKind::lparen);
        do {
          v.metaclasses.push_back(cur_.expect_identifier("metaclass name").text);
        } while (cur_.accept(TokenKind::comma));
        if (!cur_.accept(TokenKind::rparen)) cur_.fail({"','", "')'"});
        cur_.expect(TokenKind::semicolon);
        v.span = range(cur_.span_from(first));
        ast.viewpoints.push_back(std::move(v));
      } else if (cur_.accept_keyword("FEATUREMODEL")) {
        FeatureModelDecl m;
        m.root.name = cur_.expect_identifier("feature name").text;
        m.root.abstract = cur_.accept_keyword("ABSTRACT");
        m.root.group = group();
        cur_.expect(TokenKind::lbrace);
        body(m.root, &m.constraints);
        m.span = range(cur_.span_from(first));
        ast.models.push_back(std::move(m));
      } else if (cur_.accept_keyword("LOCAL")) {
        LocalDecl l;
        l.root = cur_.expect_identifier("feature name").text;
        cur_.expect_keyword("APPLIED");
        cur_.expect_keyword("TO");
        l.viewpoint = cur_.expect_identifier("viewpoint name").text;
        cur_.expect(TokenKind::dot);
        l.metaclass = cur_.expect_identifier("metaclass name").text;
        cur_.expect(TokenKind::semicolon);
        l.span = range(cur_.span_from(first));
        ast.locals.push_back(std::move(l));
      } else if (cur_.accept_keyword("DEFAULTS")) {
        if (ast.defaults) {
          throw ParseError(ErrorCode::InvalidDeclaration, "DEFAULTS declared more than once", first.span);
        }
        std::vector<std::string> names;
        cur_.expect(TokenKind::lparen);
        if (!cur_.check(TokenKind::rparen)) {
          do {
            names.push_back(cur_.expect_identifier("feature name").text);
          } while (cur_.accept(TokenKind::comma));
        }
        if (!cur_.accept(TokenKind::rparen)) cur_.fail({"','", "')'"});
        cur_.expect(TokenKind::semicolon);
        ast.defaults = std::move(names);
        ast.defaults_span = range(cur_.span_from(first));
      } else {
        cur_.fail({"VIEWPOINT", "FEATUREMODEL", "LOCAL", "DEFAULTS"});
      }
    }
    return ast;
  }

 private:
  GroupKind group() {
    if (cur_.accept_keyword("XOR")) return GroupKind::xor_group;
    if (cur_.accept_keyword("OR")) return GroupKind::or_group;
    return GroupKind::none;
  }

  // Parses declarations up to and including the closing brace. Constraints
  // are only allowed directly inside a FEATUREMODEL block.
  void body(FeatureDecl& parent, std::vector<CrossTreeConstraint>* constraints) {
    while (!cur_.accept(TokenKind::rbrace)) {
      if (constraints && cur_.check(TokenKind::identifier) &&
          (cur_.check_keyword("REQUIRES", 1) || cur_.check_keyword("EXCLUDES", 1))) {
        CrossTreeConstraint c;
        c.lhs = cur_.advance().text;
        c.kind = cur_.advance().text == "REQUIRES" ? ConstraintKind::implies : ConstraintKind::excludes;
        c.rhs = cur_.expect_identifier("feature name").text;
        cur_.expect(TokenKind::semicolon);
        constraints->push_back(std::move(c));
        continue;
      }
      if (!cur_.check(TokenKind::identifier) && !cur_.check_keyword("MANDATORY") &&
          !cur_.check_keyword("OPTIONAL") && !cur_.check_keyword("ABSTRACT")) {
        cur_.fail({"MANDATORY", "OPTIONAL", "feature name", "'}'"});
      }
      FeatureDecl f;
      if (cur_.accept_keyword("MANDATORY")) {
        f.kind = FeatureKind::mandatory;
      } else {
        cur_.accept_keyword("OPTIONAL");
      }
      f.abstract = cur_.accept_keyword("ABSTRACT");
      f.name = cur_.expect_identifier("feature name").text;
      f.group = group();
      if (cur_.accept(TokenKind::lbrace)) {
        body(f, nullptr);
      } else if (!cur_.accept(TokenKind::semicolon)) {
        cur_.fail({"'{'", "';'"});
      }
      parent.children.push_back(std::move(f));
    }
  }

  TokenCursor cur_;
};

void print_feature(std::ostream& out, const FeatureDecl& f, bool grouped, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
  out << pad;
  if (!grouped) out << (f.kind == FeatureKind::mandatory ? "MANDATORY " : "OPTIONAL ");
  if (f.abstract) out << "ABSTRACT ";
  out << f.name;
  if (f.group == GroupKind::xor_group) out << " XOR";
  if (f.group == GroupKind::or_group) out << " OR";
  if (f.children.empty()) {
    out << ";\n";
    return;
  }
  out << " {\n";
  for (const auto& c : f.children) print_feature(out, c, f.group != GroupKind::none, depth + 1);
  out << pad << "}\n";
}

[[noreturn]] void rethrow_at(const Error& e, const Span& at) { throw ParseError(e.code(), e.what(), at); }

}  // namespace

SplAst parse_ast(std::string_view source) { return Parser(source).run(); }

std::string print(const SplAst& ast) {
  std::ostringstream out;
  bool first_section = true;
  auto section = [&] {
    if (!first_section) out << '\n';
    first_section = false;
  };
  if (!ast.viewpoints.empty()) {
    section();
    for (const auto& v : ast.viewpoints) {
      out << "VIEWPOINT " << v.name << " (";
      for (std::size_t i = 0; i < v.metaclasses.size(); ++i) out << (i ? ", " : "") << v.metaclasses[i];
      out << ");\n";
    }
  }
  for (const auto& m : ast.models) {
    section();
    out << "FEATUREMODEL " << m.root.name;
    if (m.root.abstract) out << " ABSTRACT";
    if (m.root.group == GroupKind::xor_group) out << " XOR";
    if (m.root.group == GroupKind::or_group) out << " OR";
    out << " {\n";
    for (const auto& c : m.root.children) print_feature(out, c, m.root.group != GroupKind::none, 1);
    for (const auto& c : m.constraints) {
      out << "    " << c.lhs << (c.kind == ConstraintKind::implies ? " REQUIRES " : " EXCLUDES ") << c.rhs << ";\n";
    }
    out << "}\n";
  }
  if (!ast.locals.empty()) {
    section();
    for (const auto& l : ast.locals) {
      out << "LOCAL " << l.root << " APPLIED TO " << l.viewpoint << '.' << l.metaclass << ";\n";
    }
  }
  if (ast.defaults) {
    section();
    out << "DEFAULTS (";
    for (std::size_t i = 0; i < ast.defaults->size(); ++i) out << (i ? ", " : "") << (*ast.defaults)[i];
    out << ");\n";
  }
  return out.str();
}

SplDefinition build(const SplAst& ast) {
  std::vector<ViewpointModel> viewpoints;
  std::map<std::string, const ViewpointDecl*> viewpoint_index;
  for (const auto& v : ast.viewpoints) {
    if (!viewpoint_index.emplace(v.name, &v).second) {
      throw ParseError(ErrorCode::InvalidDeclaration, "viewpoint '" + v.name + "' declared twice", v.span);
    }
    viewpoints.emplace_back(v.name, std::set<std::string>(v.metaclasses.begin(), v.metaclasses.end()));
  }

  std::set<std::string> local_roots;
  for (const auto& l : ast.locals) local_roots.insert(l.root);

  std::map<std::string, const FeatureModelDecl*> model_decls;
  const FeatureModelDecl* global_decl = nullptr;
  for (const auto& m : ast.models) {
    if (!model_decls.emplace(m.root.name, &m).second) {
      throw ParseError(ErrorCode::InvalidDeclaration, "feature model '" + m.root.name + "' declared twice", m.span);
    }
    if (!local_roots.contains(m.root.name)) {
      if (global_decl) {
        throw ParseError(ErrorCode::InvalidDeclaration,
                         "more than one global feature model ('" + global_decl->root.name + "' and '" +
                             m.root.name + "'); local models need a LOCAL declaration",
                         m.span);
      }
      global_decl = &m;
    }
  }
  if (!global_decl) {
    throw ParseError(ErrorCode::InvalidDeclaration, "no global feature model declared", Span{});
  }

  auto build_model = [](const FeatureModelDecl& d, ModelKind kind) {
    try {
      return FeatureModel::build(d.root, d.constraints, kind);
    } catch (const Error& e) {
      rethrow_at(e, d.span);
    }
  };
  FeatureModel global = build_model(*global_decl, ModelKind::global);

  std::vector<FeatureModel> locals;
  for (const auto& m : ast.models) {
    if (&m == global_decl) continue;
    FeatureModel local = build_model(m, ModelKind::local);
    try {
      check_structural_twin(global, local);
    } catch (const Error& e) {
      rethrow_at(e, m.span);
    }
    locals.push_back(std::move(local));
  }

  std::vector<AppliedToDeclaration> applied;
  for (const auto& l : ast.locals) {
    if (!model_decls.contains(l.root)) {
      throw ParseError(ErrorCode::UnknownLocalModel, "LOCAL names undeclared feature model '" + l.root + "'", l.span);
    }
    auto vp = viewpoint_index.find(l.viewpoint);
    if (vp == viewpoint_index.end()) {
      throw ParseError(ErrorCode::UnknownViewpoint, "unknown viewpoint '" + l.viewpoint + "'", l.span);
    }
    const auto& classes = vp->second->metaclasses;
    if (std::find(classes.begin(), classes.end(), l.metaclass) == classes.end()) {
      throw ParseError(ErrorCode::UnknownMetaclass,
                       "viewpoint '" + l.viewpoint + "' has no metaclass '" + l.metaclass + "'", l.span);
    }
    AppliedToDeclaration decl{l.root, l.viewpoint, l.metaclass};
    if (std::find(applied.begin(), applied.end(), decl) == applied.end()) applied.push_back(std::move(decl));
  }

  Configuration defaults;
  if (ast.defaults) {
    for (const auto& name : *ast.defaults) {
      if (!global.contains(name)) {
        throw ParseError(ErrorCode::UnknownFeature,
                         "DEFAULTS names '" + name + "', which is not a feature of '" + global.name() + "'",
                         ast.defaults_span);
      }
      defaults.insert(name);
    }
  }

  return SplDefinition{FunctionalModel::create(std::move(global), std::move(locals)), std::move(viewpoints),
                       std::move(applied), std::move(defaults)};
}

SplDefinition parse_spl_definition(std::string_view source) { return build(parse_ast(source)); }

Multimodel make_multimodel(const SplDefinition& definition) {
  Multimodel mm(definition.functional);
  for (const auto& v : definition.viewpoints) mm.add_viewpoint(v);
  for (const auto& d : definition.applied_to) mm.declare_applied_to(d.local_model, d.viewpoint, d.metaclass);
  mm.set_global_selection(definition.defaults);
  return mm;
}

}  // namespace localfeat::spl
