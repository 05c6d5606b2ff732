#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace hermes::toml {

// Parses the TOML dialect used by the config file and by pyproject.toml /
// Cargo.toml style manifests into a JSON document. Covered: tables, arrays
// of tables, dotted keys, strings (basic, literal, multiline), integers,
// floats, booleans, arrays, inline tables, and date-like values kept as
// strings. Parse errors carry line and column.
nlohmann::json parse(std::string_view text);
nlohmann::json parse_file(const std::filesystem::path& path);

// Minimal serializer for round-tripping config documents. Emits tables for
// nested objects and [[name]] blocks for arrays of objects.
std::string serialize(const nlohmann::json& doc);

}  // namespace hermes::toml
