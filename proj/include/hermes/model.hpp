#pragma once

#define JSON_USE_IMPLICIT_CONVERSIONS 0
#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hermes/util.hpp"

namespace hermes {

using json = nlohmann::json;

// Closed set of metadata sources; every harvester maps to exactly one kind.
enum class SourceKind {
    cff,
    codemeta,
    zenodo_json,
    license_file,
    manifest,
    vcs,
    platform_api,
    plaintext,
};

constexpr int kSourceKindCount = 8;

std::string to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& s);
std::vector<SourceKind> all_source_kinds();

// Availability ladder: 1 = availability-tested structured files,
// 2 = mined structured data, 3 = mined unstructured text.
int source_stage(SourceKind kind);

enum class Confidence { heuristic, mapped, exact };

std::string to_string(Confidence c);
Confidence confidence_from_string(const std::string& s);

struct Agent {
    std::string given_names;
    std::string family_names;
    std::string full_name;  // fallback when no name split is known
    std::string orcid;
    std::string email;
    std::string affiliation;

    bool has_name() const {
        return !full_name.empty() || !given_names.empty() || !family_names.empty();
    }
    // "family, given" order used for citation-style rendering.
    std::string display_name() const;

    json to_json() const;
    static Agent from_json(const json& j);
    bool operator==(const Agent&) const = default;
};

enum class IdScheme { doi, url, swhid, other };
enum class IdRelation { is_version_of, cites, is_part_of, self };

std::string to_string(IdScheme s);
std::string to_string(IdRelation r);
IdScheme id_scheme_from_string(const std::string& s);
IdRelation id_relation_from_string(const std::string& s);

struct Identifier {
    IdScheme scheme = IdScheme::other;
    std::string value;
    IdRelation relation = IdRelation::self;

    json to_json() const;
    static Identifier from_json(const json& j);
    bool operator==(const Identifier&) const = default;
};

// One candidate value for one canonical field. Before crosswalking,
// field_path holds the source-native key instead.
struct ProvenancedField {
    std::string field_path;
    json value;
    SourceKind source_kind = SourceKind::plaintext;
    std::string location;
    Confidence confidence = Confidence::heuristic;

    json to_json() const;
    static ProvenancedField from_json(const json& j);
    bool operator==(const ProvenancedField&) const = default;
};

struct HarvestResult {
    SourceKind source_kind = SourceKind::plaintext;
    std::string location;
    std::vector<ProvenancedField> fields;
    std::vector<std::string> warnings;

    void add(std::string field_path, json value, Confidence confidence);
    json to_json() const;
    static HarvestResult from_json(const json& j);
};

struct Provenance {
    SourceKind source_kind = SourceKind::plaintext;
    std::string location;
    Confidence confidence = Confidence::heuristic;

    json to_json() const;
    static Provenance from_json(const json& j);
    bool operator==(const Provenance&) const = default;
};

// Shape of a canonical field's value; drives merge and payload coercion.
enum class FieldType { text, date, spdx_expression, url, artifact_kind, text_list, agent_list, identifier_list };

struct FieldSpec {
    std::string path;
    FieldType type;
    bool is_list() const {
        return type == FieldType::text_list || type == FieldType::agent_list ||
               type == FieldType::identifier_list;
    }
};

const std::vector<FieldSpec>& canonical_fields();
const FieldSpec* find_canonical_field(const std::string& path);

// The merged, provenance-tracked record for one publish unit.
class CanonicalRecord {
public:
    struct Field {
        json value;
        std::vector<Provenance> provenance;  // never empty for a set field
    };

    bool has(const std::string& path) const { return fields_.count(path) > 0; }
    const json* value(const std::string& path) const;
    const Field* field(const std::string& path) const;
    void set(const std::string& path, json value, std::vector<Provenance> provenance);
    void remove(const std::string& path) { fields_.erase(path); }

    const std::map<std::string, Field>& fields() const { return fields_; }

    std::string text(const std::string& path) const;  // "" when unset
    std::vector<Agent> agents(const std::string& path) const;
    std::vector<Identifier> identifiers(const std::string& path) const;
    std::vector<std::string> text_list(const std::string& path) const;

    json to_json() const;
    static CanonicalRecord from_json(const json& j);
    bool operator==(const CanonicalRecord&) const = default;

private:
    std::map<std::string, Field> fields_;
};

}  // namespace hermes
