#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace localfeat {

enum class ErrorCode {
  // feature models
  InvalidFeatureName,
  DuplicateFeatureName,
  DanglingConstraintEndpoint,
  GroupTooSmall,
  GroupChildMandatory,
  SelfConstraint,
  UnknownFeature,
  ModelTooLarge,
  // multimodel
  UnknownViewpoint,
  UnknownLocalModel,
  UnknownMetaclass,
  UnknownElement,
  DuplicateElement,
  KindMismatch,
  InvalidSelection,
  DuplicateBinding,
  NotApplicable,
  TwinMismatch,
  // text formats
  SyntaxError,
  DuplicateFlag,
  MultipleProducts,
  MissingProduct,
  InvalidDeclaration,
  // emission
  UnresolvedErrors,
};

std::string_view to_string(ErrorCode code);

/// Position of a piece of source text. Lines and columns are 1-based;
/// columns count bytes.
struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Error raised while reading a product spec or SPL definition. Always
/// carries the position where reading stopped.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, Span where,
             std::vector<std::string> expected = {})
      : Error(code, message), where_(where), expected_(std::move(expected)) {}

  const Span& where() const noexcept { return where_; }
  std::size_t line() const noexcept { return where_.line; }
  std::size_t column() const noexcept { return where_.column; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  Span where_;
  std::vector<std::string> expected_;
};

}  // namespace localfeat
