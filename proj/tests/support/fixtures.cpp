#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace testsupport {

using namespace localfeat;

std::string fixture_path(std::string_view name) { return std::string(LOCALFEAT_FIXTURE_DIR) + "/" + std::string(name); }

std::string read_fixture(std::string_view name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + fixture_path(name));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

spl::SplDefinition load_spl(std::string_view name) { return spl::parse_spl_definition(read_fixture(name)); }

dsl::ProductSpec load_spec(std::string_view name) { return dsl::parse(read_fixture(name)); }

FeatureDecl leaf(std::string name, FeatureKind kind) {
  return FeatureDecl{std::move(name), kind, GroupKind::none, false, {}};
}

FeatureDecl node(std::string name, std::vector<FeatureDecl> children, GroupKind group, FeatureKind kind) {
  return FeatureDecl{std::move(name), kind, group, false, std::move(children)};
}

FeatureDecl gis_excerpt_decl() {
  return node("GIS-SPL",
              {node("Entity", {node("Form", {leaf("Creatable"), leaf("Editable")}),
                               node("List", {leaf("FormAccess"), leaf("Filterable")})}),
               node("MapViewer", {leaf("UserGeolocation"), leaf("Clustering"), leaf("LayerManager"),
                                  leaf("StyleSelector"), leaf("OpacitySelector")}),
               node("Menu", {leaf("TopMenu"), leaf("LeftMenu")}, GroupKind::xor_group),
               leaf("CSVImporter"), leaf("UserManagement")});
}

FeatureModel gis_excerpt_model() {
  return FeatureModel::build(gis_excerpt_decl(), {{ConstraintKind::implies, "FormAccess", "Form"}},
                             ModelKind::global);
}

FeatureDecl toy_decl() {
  return node("R", {leaf("A"), node("B", {leaf("C"), leaf("D")}, GroupKind::xor_group, FeatureKind::mandatory)});
}

}  // namespace testsupport
