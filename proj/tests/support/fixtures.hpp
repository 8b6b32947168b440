#pragma once

#include <string>
#include <string_view>

#include "localfeat/dsl.hpp"
#include "localfeat/feature_model.hpp"
#include "localfeat/spl_definition.hpp"

namespace testsupport {

std::string fixture_path(std::string_view name);
/// Throws std::runtime_error when the file cannot be read.
std::string read_fixture(std::string_view name);

localfeat::spl::SplDefinition load_spl(std::string_view name);
localfeat::dsl::ProductSpec load_spec(std::string_view name);

localfeat::FeatureDecl leaf(std::string name, localfeat::FeatureKind kind = localfeat::FeatureKind::optional);
localfeat::FeatureDecl node(std::string name, std::vector<localfeat::FeatureDecl> children,
                           localfeat::GroupKind group = localfeat::GroupKind::none,
                           localfeat::FeatureKind kind = localfeat::FeatureKind::optional);

/// The 18-feature GIS excerpt: Entity, MapViewer and Menu subtrees plus
/// CSVImporter and UserManagement under GIS-SPL, FormAccess requires Form.
localfeat::FeatureDecl gis_excerpt_decl();
localfeat::FeatureModel gis_excerpt_model();

/// R with optional A and mandatory B, where B is an xor group over C, D.
localfeat::FeatureDecl toy_decl();

}  // namespace testsupport
