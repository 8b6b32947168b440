#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "localfeat/resolver.hpp"

namespace localfeat {

/// Derivation configuration as a JSON value. Object keys are sorted at
/// every level; feature lists are sorted; everything else keeps declaration
/// order. Throws Error(UnresolvedErrors) if `resolved` has error
/// diagnostics.
nlohmann::json derivation_config(const ResolvedProduct& resolved);

/// Serialized derivation configuration: 2-space indent, LF line endings,
/// trailing newline. Byte-identical for identical input.
std::string emit(const ResolvedProduct& resolved);

/// Default output file name, `<product>.derivation.json`.
std::string default_output_name(const ResolvedProduct& resolved);

/// The shipped schema (schema/derivation-config.schema.json).
std::string_view derivation_schema_text();

/// True iff `text` is JSON conforming to the derivation schema.
bool verify_schema(std::string_view text);

/// Validates a document against a JSON Schema restricted to the keywords
/// the shipped schema uses: type, const, enum, properties, required,
/// additionalProperties, propertyNames, items, minItems, maxItems,
/// uniqueItems, pattern, oneOf, anyOf and local $ref. Returns one message
/// per violation, each prefixed with a JSON pointer.
std::vector<std::string> schema_violations(const nlohmann::json& document, const nlohmann::json& schema);

}  // namespace localfeat
