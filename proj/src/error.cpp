#include "localfeat/error.hpp"

namespace localfeat {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidFeatureName: return "InvalidFeatureName";
    case ErrorCode::DuplicateFeatureName: return "DuplicateFeatureName";
    case ErrorCode::DanglingConstraintEndpoint: return "DanglingConstraintEndpoint";
    case ErrorCode::GroupTooSmall: return "GroupTooSmall";
    case ErrorCode::GroupChildMandatory: return "GroupChildMandatory";
    case ErrorCode::SelfConstraint: return "SelfConstraint";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::ModelTooLarge: return "ModelTooLarge";
    case ErrorCode::UnknownViewpoint: return "UnknownViewpoint";
    case ErrorCode::UnknownLocalModel: return "UnknownLocalModel";
    case ErrorCode::UnknownMetaclass: return "UnknownMetaclass";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::DuplicateElement: return "DuplicateElement";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InvalidSelection: return "InvalidSelection";
    case ErrorCode::DuplicateBinding: return "DuplicateBinding";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::TwinMismatch: return "TwinMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateFlag: return "DuplicateFlag";
    case ErrorCode::MultipleProducts: return "MultipleProducts";
    case ErrorCode::MissingProduct: return "MissingProduct";
    case ErrorCode::InvalidDeclaration: return "InvalidDeclaration";
    case ErrorCode::UnresolvedErrors: return "UnresolvedErrors";
  }
  return "Unknown";
}

}  // namespace localfeat
