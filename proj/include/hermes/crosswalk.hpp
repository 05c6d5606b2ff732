#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hermes/model.hpp"

namespace hermes {

// One mapping row: source-native key -> canonical field, via a named
// value transform from the registered closed set.
struct CrosswalkRow {
    std::string native_key;
    std::string canonical_field;
    std::string transform;
};

class CrosswalkTable {
public:
    CrosswalkTable() = default;
    CrosswalkTable(SourceKind kind, std::vector<CrosswalkRow> rows);

    // CSV with header native_key,canonical_field,transform. Rows referring
    // to unknown canonical fields or unregistered transforms are rejected.
    static CrosswalkTable from_csv(SourceKind kind, std::string_view csv);
    static CrosswalkTable from_csv_file(SourceKind kind,
                                        const std::filesystem::path& path);

    SourceKind source_kind() const { return kind_; }
    const std::vector<CrosswalkRow>& rows() const { return rows_; }
    const CrosswalkRow* find(const std::string& native_key) const;

private:
    SourceKind kind_ = SourceKind::plaintext;
    std::vector<CrosswalkRow> rows_;
};

// Bundled tables generated from share/crosswalks/.
const CrosswalkTable& builtin_table(SourceKind kind);

enum class ManifestDialect { python_project, node_package, rust_crate, maven_pom };

std::string to_string(ManifestDialect d);
ManifestDialect manifest_dialect_from_string(const std::string& s);
const CrosswalkTable& builtin_manifest_table(ManifestDialect dialect);

const std::vector<std::string>& registered_transforms();

// Applies a registered transform to a native value. nullopt = failure
// (message appended to warnings); arrays are transformed element-wise.
std::optional<json> apply_transform(const std::string& name, const json& value,
                                    std::vector<std::string>& warnings);

// Liberal agent reader accepting CFF, codemeta/schema.org, manifest and
// canonical shapes. nullopt when no name survives.
std::optional<Agent> coerce_agent(const json& value,
                                  std::vector<std::string>& warnings);

// Re-keys every native field with a table row to its canonical path,
// transforming and type-coercing values. Unmapped native keys and failed
// transforms become warnings; provenance is preserved unchanged.
struct CrosswalkOutput {
    std::vector<ProvenancedField> fields;
    std::vector<std::string> warnings;
};

CrosswalkOutput crosswalk(const HarvestResult& result, const CrosswalkTable& table);

}  // namespace hermes
