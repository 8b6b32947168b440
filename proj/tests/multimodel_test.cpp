#include <gtest/gtest.h>

#include <algorithm>

#include "localfeat/multimodel.hpp"
#include "localfeat/spl_definition.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

namespace {

using namespace localfeat;
using testsupport::leaf;

ErrorCode error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::UnresolvedErrors;
}

// The GIS product line with the elements of the WebEIEL excerpt.
Multimodel gis_multimodel() {
  auto mm = spl::make_multimodel(testsupport::load_spl("gis.spl"));
  auto& data = mm.viewpoint("data");
  data.add_entity("Municipality", "Entity");
  data.add_entity("Hotel", "Entity");
  auto& vis = mm.viewpoint("visualization");
  vis.add_entity("municipalitiesLayer", "Layer");
  vis.add_entity("hotelsLayer", "Layer");
  vis.add_entity("municipalitiesMap", "Map");
  vis.add_entity("hotelsMap", "Map");
  vis.add_entity("municipalitiesMap.municipalitiesLayer", "LayerInMap");
  vis.add_entity("hotelsMap.municipalitiesLayer", "LayerInMap");
  vis.add_entity("hotelsMap.hotelsLayer", "LayerInMap");
  return mm;
}

Multimodel shop_multimodel() {
  auto mm = spl::make_multimodel(testsupport::load_spl("ecommerce.spl"));
  auto& catalog = mm.viewpoint("catalog");
  for (const char* c : {"Films", "Pencils", "Books"}) catalog.add_entity(c, "Category");
  catalog.add_entity("Stationery", "CategoryComposite");
  return mm;
}

TEST(QualifiedNames, SplitAtTheFirstDot) {
  EXPECT_EQ(qualified_name("visualization", "hotelsMap.hotelsLayer"), "visualization.hotelsMap.hotelsLayer");
  auto [vp, el] = split_qualified_name("visualization.hotelsMap.hotelsLayer");
  EXPECT_EQ(vp, "visualization");
  EXPECT_EQ(el, "hotelsMap.hotelsLayer");
}

TEST(ViewpointModel, RejectsUnknownMetaclassesAndDuplicates) {
  ViewpointModel vp("data", {"Entity"});
  vp.add_entity("Hotel", "Entity", {{"table", "hotels"}});
  EXPECT_EQ(vp.find("Hotel")->attributes.at("table"), "hotels");
  EXPECT_EQ(error_of([&] { vp.add_entity("Road", "Map"); }), ErrorCode::UnknownMetaclass);
  EXPECT_EQ(error_of([&] { vp.add_entity("Hotel", "Entity"); }), ErrorCode::DuplicateElement);
}

TEST(Relationships, EndpointsMustExist) {
  auto mm = gis_multimodel();
  mm.add_relationship("data", {"hotels", "data.Municipality", "data.Hotel", {}});
  EXPECT_EQ(mm.viewpoint("data").relationships().size(), 1u);
  EXPECT_EQ(error_of([&] { mm.add_relationship("data", {"x", "data.Hotel", "data.Airport", {}}); }),
            ErrorCode::UnknownElement);
}

TEST(FunctionalModel, LocalsAreTwinsOfTheGlobalSubtrees) {
  auto def = testsupport::load_spl("gis.spl");
  const auto& f = def.functional;
  EXPECT_EQ(f.global().name(), "GIS-SPL");
  for (const char* name : {"EntityFeature", "MapFeature", "LayerFeature"}) {
    ASSERT_TRUE(f.has_local(name));
    EXPECT_EQ(f.local(name).kind(), ModelKind::local);
    EXPECT_EQ(f.local(name).subtree(name), f.global().subtree(name));
  }
  EXPECT_EQ(error_of([&] { f.local("Menu"); }), ErrorCode::UnknownLocalModel);
}

TEST(FunctionalModel, RejectsLocalsThatDiffer) {
  auto global = FeatureModel::build(testsupport::toy_decl(), {}, ModelKind::global);
  FeatureDecl b{"B", FeatureKind::optional, GroupKind::or_group, false, {leaf("C"), leaf("D")}};
  auto local = FeatureModel::build(b, {}, ModelKind::local);
  EXPECT_EQ(error_of([&] { FunctionalModel::create(global, {local}); }), ErrorCode::TwinMismatch);
  auto stray = FeatureModel::build(leaf("Q"), {}, ModelKind::local);
  EXPECT_EQ(error_of([&] { FunctionalModel::create(global, {stray}); }), ErrorCode::TwinMismatch);
}

TEST(AppliedTo, GisDeclarationsAreAcceptedAndIdempotent) {
  auto mm = gis_multimodel();
  EXPECT_EQ(mm.applied_to().size(), 3u);
  mm.declare_applied_to("EntityFeature", "data", "Entity");
  EXPECT_EQ(mm.applied_to().size(), 3u);
  EXPECT_TRUE(mm.applies("EntityFeature", "data.Hotel"));
  EXPECT_FALSE(mm.applies("MapFeature", "data.Hotel"));
  EXPECT_EQ(mm.applicable_locals("visualization.hotelsMap.hotelsLayer"), std::vector<std::string>{"LayerFeature"});
  EXPECT_TRUE(mm.applicable_locals("visualization.hotelsLayer").empty());
}

TEST(AppliedTo, RejectsUnknownTargets) {
  auto mm = gis_multimodel();
  EXPECT_EQ(error_of([&] { mm.declare_applied_to("Menu", "data", "Entity"); }), ErrorCode::UnknownLocalModel);
  EXPECT_EQ(error_of([&] { mm.declare_applied_to("EntityFeature", "data", "Table"); }), ErrorCode::UnknownMetaclass);
  EXPECT_EQ(error_of([&] { mm.declare_applied_to("EntityFeature", "ui", "Entity"); }), ErrorCode::UnknownViewpoint);
}

TEST(AppliedTo, BindingAnElementOfAnotherKindIsAKindMismatch) {
  auto def = testsupport::load_spl("gis.spl");
  Multimodel mm(def.functional);
  for (const auto& v : def.viewpoints) mm.add_viewpoint(v);
  mm.declare_applied_to("EntityFeature", "visualization", "Map");
  mm.viewpoint("data").add_entity("Hotel", "Entity");
  EXPECT_EQ(error_of([&] { mm.bind_local("data.Hotel", "EntityFeature", {"Form"}); }), ErrorCode::KindMismatch);
}

TEST(Binding, StoresTheClosedSelection) {
  auto mm = gis_multimodel();
  const auto& hotel =
      mm.bind_local("data.Hotel", "EntityFeature", {"Form", "Creatable", "Editable", "List", "FormAccess", "Filterable"});
  EXPECT_EQ(hotel.selection,
            (Configuration{"EntityFeature", "Form", "Creatable", "Editable", "List", "FormAccess", "Filterable"}));
  const auto& muni = mm.bind_local("data.Municipality", "EntityFeature", {"Form", "List", "FormAccess", "Filterable"});
  EXPECT_FALSE(muni.selection.contains("Creatable"));
  EXPECT_FALSE(muni.selection.contains("Editable"));
  // Closure adds ancestors and requires targets.
  const auto& map = mm.bind_local("visualization.hotelsMap", "MapFeature", {});
  EXPECT_EQ(map.selection, Configuration{"MapFeature"});
}

TEST(Binding, RejectsFeaturesOfOtherLocalModels) {
  auto mm = gis_multimodel();
  EXPECT_EQ(error_of([&] { mm.bind_local("visualization.hotelsMap", "MapFeature", {"StyleSelector"}); }),
            ErrorCode::UnknownFeature);
}

TEST(Binding, RejectsInvalidAndRepeatedBindings) {
  auto mm = shop_multimodel();
  EXPECT_EQ(error_of([&] { mm.bind_local("catalog.Films", "CategoryDisplay", {"Grid", "List"}); }),
            ErrorCode::InvalidSelection);
  EXPECT_EQ(mm.binding("catalog.Films", "CategoryDisplay"), nullptr);
  mm.bind_local("catalog.Films", "CategoryDisplay", {"VideoSnippet", "Grid"});
  EXPECT_EQ(error_of([&] { mm.bind_local("catalog.Films", "CategoryDisplay", {"TextSnippet", "Grid"}); }),
            ErrorCode::DuplicateBinding);
  EXPECT_EQ(error_of([&] { mm.bind_local("catalog.Stationery", "CategoryDisplay", {"Grid"}); }),
            ErrorCode::KindMismatch);
  EXPECT_EQ(error_of([&] { mm.bind_local("catalog.Lamps", "CategoryDisplay", {"Grid"}); }),
            ErrorCode::UnknownElement);
}

TEST(Effective, UnboundMapFallsBackToTheBareLocalRoot) {
  auto mm = gis_multimodel();
  mm.set_global_selection({"TopMenu", "UserManagement"});
  EXPECT_EQ(mm.effective_configuration("visualization.municipalitiesMap", "MapFeature"), Configuration{"MapFeature"});
}

TEST(Effective, GlobalSelectionInsideTheSubtreeBecomesTheDefault) {
  auto mm = gis_multimodel();
  mm.set_global_selection({"LayerManager"});
  EXPECT_EQ(mm.global_selection(), (Configuration{"GIS-SPL", "MapFeature", "LayerManager"}));
  EXPECT_EQ(mm.effective_configuration("visualization.hotelsMap", "MapFeature"),
            (Configuration{"MapFeature", "LayerManager"}));
}

TEST(Effective, EcommerceDefaultsAndBindings) {
  auto mm = shop_multimodel();
  mm.bind_local("catalog.Films", "CategoryDisplay", {"VideoSnippet", "Grid"});
  EXPECT_EQ(mm.effective_configuration("catalog.Pencils", "CategoryDisplay"),
            (Configuration{"CategoryDisplay", "Layout", "List", "Preview", "NoPreview"}));
  auto films = mm.effective_configuration("catalog.Films", "CategoryDisplay");
  EXPECT_EQ(films, (Configuration{"CategoryDisplay", "Layout", "Grid", "Preview", "VideoSnippet"}));
  EXPECT_FALSE(films.contains("NoPreview"));
}

TEST(Effective, CatalogPaymentCreditCardIsAValidGlobalSelection) {
  auto def = testsupport::load_spl("ecommerce.spl");
  const auto& global = def.functional.global();
  EXPECT_TRUE(validate_configuration(global, {"E-Commerce", "Catalog", "Payment", "CreditCard"}).valid());
  auto mm = shop_multimodel();
  mm.set_global_selection({"Catalog", "Payment", "CreditCard"});
  EXPECT_EQ(mm.global_selection(), (Configuration{"E-Commerce", "Catalog", "Payment", "CreditCard"}));
}

TEST(Effective, ElementsOutsideEveryDeclarationAreNotApplicable) {
  auto mm = gis_multimodel();
  EXPECT_EQ(error_of([&] { mm.effective_configuration("visualization.hotelsLayer", "LayerFeature"); }),
            ErrorCode::NotApplicable);
}

TEST(GlobalSelection, InvalidSeedsLeaveTheSelectionUnchanged) {
  auto mm = gis_multimodel();
  const auto before = mm.global_selection();
  EXPECT_EQ(error_of([&] { mm.set_global_selection({"TopMenu", "LeftMenu"}); }), ErrorCode::InvalidSelection);
  EXPECT_EQ(mm.global_selection(), before);
  EXPECT_EQ(error_of([&] { mm.set_global_selection({"Teleport"}); }), ErrorCode::UnknownFeature);
}

TEST(Included, ExcerptBindingsAreIncluded) {
  auto mm = gis_multimodel();
  mm.set_global_selection({"TopMenu", "UserManagement"});
  mm.bind_local("data.Municipality", "EntityFeature", {"Form", "List", "FormAccess", "Filterable"});
  mm.bind_local("data.Hotel", "EntityFeature", {"Form", "Creatable", "Editable", "List", "FormAccess", "Filterable"});
  mm.bind_local("visualization.hotelsMap.hotelsLayer", "LayerFeature", {"StyleSelector", "Clustering"});
  mm.bind_local("visualization.hotelsMap", "MapFeature", {"LayerManager", "UserGeolocation"});
  auto inc = mm.included_features();
  for (const char* f : {"TopMenu", "UserManagement", "Form", "Creatable", "Editable", "List", "FormAccess",
                        "Filterable", "LayerManager", "UserGeolocation", "StyleSelector", "Clustering"}) {
    EXPECT_TRUE(inc.contains(f)) << f;
  }
  EXPECT_FALSE(inc.contains("OpacitySelector"));
  EXPECT_FALSE(inc.contains("CSVImporter"));
}

TEST(Included, NoBindingsAndNoDefaultsGiveTheRootClosure) {
  auto mm = gis_multimodel();
  // Every covered element falls back to its bare local root.
  EXPECT_EQ(mm.included_features(), (Configuration{"GIS-SPL", "EntityFeature", "MapFeature", "LayerFeature"}));
  Multimodel bare(testsupport::load_spl("gis.spl").functional);
  EXPECT_EQ(bare.included_features(), Configuration{"GIS-SPL"});
}

TEST(Included, RemovingTheOnlyClusteringBindingDropsClustering) {
  auto mm = gis_multimodel();
  mm.bind_local("visualization.hotelsMap.hotelsLayer", "LayerFeature", {"Clustering"});
  EXPECT_TRUE(mm.included_features().contains("Clustering"));
  EXPECT_TRUE(mm.unbind_local("visualization.hotelsMap.hotelsLayer", "LayerFeature"));
  EXPECT_FALSE(mm.included_features().contains("Clustering"));
  EXPECT_FALSE(mm.unbind_local("visualization.hotelsMap.hotelsLayer", "LayerFeature"));
}

// Properties over random binding sequences.

struct Snapshot {
  std::map<ElementKey, Configuration> effective;
  Configuration included;
};

Snapshot snapshot(const Multimodel& mm) {
  Snapshot s;
  for (const auto& key : mm.covered_elements()) {
    s.effective[key] = mm.effective_configuration(key.element, key.local_model);
  }
  s.included = mm.included_features();
  return s;
}

TEST(MultimodelProperties, BindingsAreLocalMonotoneValidAndReversible) {
  testsupport::Rng rng(23);
  auto base = gis_multimodel();
  const auto keys = base.covered_elements();
  std::map<std::string, std::vector<Configuration>> valid;
  for (const auto& [name, local] : base.functional().locals()) valid[name] = enumerate_configurations(local);

  for (int round = 0; round < 50; ++round) {
    auto mm = base;
    std::vector<std::string> menu{"", "TopMenu", "LeftMenu"};
    Configuration global_seeds;
    for (const auto& f : {"Form", "Filterable", "LayerManager", "OpacitySelector", "CSVImporter"}) {
      if (rng() % 2) global_seeds.insert(f);
    }
    if (auto m = menu[rng() % 3]; !m.empty()) global_seeds.insert(m);
    mm.set_global_selection(global_seeds);

    for (int step = 0; step < 8; ++step) {
      const auto& key = keys[rng() % keys.size()];
      const auto before = snapshot(mm);
      if (mm.binding(key.element, key.local_model)) {
        continue;
      }
      const auto& options = valid[key.local_model];
      const auto& pick = options[rng() % options.size()];
      mm.bind_local(key.element, key.local_model, pick);
      const auto after = snapshot(mm);

      EXPECT_EQ(after.effective.at(key), pick);
      for (const auto& [other, cfg] : before.effective) {
        if (!(other == key)) {
          EXPECT_EQ(after.effective.at(other), cfg);
        }
      }
      EXPECT_TRUE(std::includes(after.included.begin(), after.included.end(), before.included.begin(),
                                before.included.end()));
      for (const auto& [k, cfg] : after.effective) {
        EXPECT_TRUE(validate_configuration(mm.functional().local(k.local_model), cfg).valid());
      }

      if (rng() % 3 == 0) {
        mm.unbind_local(key.element, key.local_model);
        const auto restored = snapshot(mm);
        EXPECT_EQ(restored.effective, before.effective);
        EXPECT_EQ(restored.included, before.included);
      }
    }
  }
}

}  // namespace
