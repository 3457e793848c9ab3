#include "nadegen/schema.hpp"

#include <regex>

#include "nadegen/errors.hpp"
#include "run_config_schema_text.hpp"

namespace nadegen {

using nlohmann::json;

namespace {

bool has_type(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  throw ValidationError("schema uses unsupported type " + type);
}

}  // namespace

SchemaValidator::SchemaValidator(json schema) : root_(std::move(schema)) {}

std::vector<std::string> SchemaValidator::validate(const json& instance) const {
  std::vector<std::string> errors;
  check(root_, instance, "", errors);
  return errors;
}

const json& SchemaValidator::resolve(const json& schema) const {
  if (!schema.is_object() || !schema.contains("$ref")) return schema;
  const std::string ref = schema.at("$ref").get<std::string>();
  if (ref.rfind("#/", 0) != 0) throw ValidationError("schema uses unsupported reference " + ref);
  return resolve(root_.at(json::json_pointer(ref.substr(1))));
}

void SchemaValidator::check(const json& raw, const json& value, const std::string& path,
                            std::vector<std::string>& errors) const {
  const json& schema = resolve(raw);
  const std::string where = path.empty() ? "/" : path;
  auto fail = [&](const std::string& msg) { errors.push_back(where + ": " + msg); };

  if (schema.contains("type")) {
    const json& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = has_type(value, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || has_type(value, alt.get<std::string>());
    }
    if (!ok) {
      fail("expected type " + t.dump());
      return;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& option : schema.at("enum")) found = found || option == value;
    if (!found) fail("value " + value.dump() + " is not one of " + schema.at("enum").dump());
  }
  if (schema.contains("const") && schema.at("const") != value) fail("value must be " + schema.at("const").dump());

  if (schema.contains("anyOf") || schema.contains("oneOf")) {
    const bool one = schema.contains("oneOf");
    const json& alts = one ? schema.at("oneOf") : schema.at("anyOf");
    int matches = 0;
    for (const auto& alt : alts) {
      std::vector<std::string> sub;
      check(alt, value, path, sub);
      matches += sub.empty();
    }
    if (matches == 0 || (one && matches > 1)) fail("value matches none of the allowed alternatives");
  }

  if (value.is_number()) {
    const double x = value.get<double>();
    if (schema.contains("minimum") && x < schema.at("minimum").get<double>()) fail("value below minimum");
    if (schema.contains("maximum") && x > schema.at("maximum").get<double>()) fail("value above maximum");
    if (schema.contains("exclusiveMinimum") && x <= schema.at("exclusiveMinimum").get<double>()) {
      fail("value must exceed " + schema.at("exclusiveMinimum").dump());
    }
    if (schema.contains("exclusiveMaximum") && x >= schema.at("exclusiveMaximum").get<double>()) {
      fail("value must be below " + schema.at("exclusiveMaximum").dump());
    }
  }

  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (schema.contains("minLength") && s.size() < schema.at("minLength").get<std::size_t>()) fail("string too short");
    if (schema.contains("pattern") && !std::regex_search(s, std::regex(schema.at("pattern").get<std::string>()))) {
      fail("string \"" + s + "\" does not match " + schema.at("pattern").get<std::string>());
    }
  }

  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema.at("minItems").get<std::size_t>()) fail("too few items");
    if (schema.contains("maxItems") && value.size() > schema.at("maxItems").get<std::size_t>()) fail("too many items");
    if (schema.contains("items")) {
      for (std::size_t k = 0; k < value.size(); ++k) {
        check(schema.at("items"), value[k], path + "/" + std::to_string(k), errors);
      }
    }
  }

  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required")) {
        if (!value.contains(key.get<std::string>())) fail("missing required property \"" + key.get<std::string>() + "\"");
      }
    }
    const json empty = json::object();
    const json& props = schema.contains("properties") ? schema.at("properties") : empty;
    for (const auto& [key, item] : value.items()) {
      const std::string child = path + "/" + key;
      if (props.contains(key)) {
        check(props.at(key), item, child, errors);
      } else if (schema.contains("additionalProperties")) {
        const json& extra = schema.at("additionalProperties");
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) errors.push_back(child + ": unknown property");
        } else {
          check(extra, item, child, errors);
        }
      }
    }
  }
}

const json& run_config_schema() {
  static const json schema = json::parse(kRunConfigSchemaText);
  return schema;
}

}  // namespace nadegen
