#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace nadegen {

/// Validator for the subset of JSON Schema draft-07 used by the run
/// configuration schema: type, enum, const, properties, required,
/// additionalProperties, items, minItems, maxItems, minLength, pattern,
/// minimum, maximum, exclusiveMinimum, exclusiveMaximum, anyOf, oneOf, and
/// local "#/definitions/..." references.
class SchemaValidator {
 public:
  explicit SchemaValidator(nlohmann::json schema);

  /// One message per violation, each prefixed with a JSON pointer.
  std::vector<std::string> validate(const nlohmann::json& instance) const;

 private:
  void check(const nlohmann::json& schema, const nlohmann::json& value, const std::string& path,
             std::vector<std::string>& errors) const;
  const nlohmann::json& resolve(const nlohmann::json& schema) const;

  nlohmann::json root_;
};

/// The schema shipped with the library for `nadegen` configurations.
const nlohmann::json& run_config_schema();

}  // namespace nadegen
