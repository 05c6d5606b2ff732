#include "hermes/model.hpp"

#include <algorithm>
#include <array>

namespace hermes {

namespace {

struct KindName {
    SourceKind kind;
    const char* name;
    int stage;
};

constexpr std::array<KindName, kSourceKindCount> kKinds = {{
    {SourceKind::cff, "cff", 1},
    {SourceKind::codemeta, "codemeta", 1},
    {SourceKind::zenodo_json, "zenodo_json", 1},
    {SourceKind::license_file, "license_file", 1},
    {SourceKind::manifest, "manifest", 2},
    {SourceKind::vcs, "vcs", 1},
    {SourceKind::platform_api, "platform_api", 1},
    {SourceKind::plaintext, "plaintext", 3},
}};

}  // namespace

std::string to_string(SourceKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) return k.name;
    }
    return "unknown";
}

SourceKind source_kind_from_string(const std::string& s) {
    for (const auto& k : kKinds) {
        if (s == k.name) return k.kind;
    }
    throw Error(ErrorKind::validation, "unknown source kind: " + s);
}

std::vector<SourceKind> all_source_kinds() {
    std::vector<SourceKind> out;
    for (const auto& k : kKinds) out.push_back(k.kind);
    return out;
}

int source_stage(SourceKind kind) {
    for (const auto& k : kKinds) {
        if (k.kind == kind) return k.stage;
    }
    return 3;
}

std::string to_string(Confidence c) {
    switch (c) {
        case Confidence::exact: return "exact";
        case Confidence::mapped: return "mapped";
        case Confidence::heuristic: return "heuristic";
    }
    return "heuristic";
}

Confidence confidence_from_string(const std::string& s) {
    if (s == "exact") return Confidence::exact;
    if (s == "mapped") return Confidence::mapped;
    if (s == "heuristic") return Confidence::heuristic;
    throw Error(ErrorKind::validation, "unknown confidence: " + s);
}

std::string Agent::display_name() const {
    if (!family_names.empty() && !given_names.empty()) {
        return family_names + ", " + given_names;
    }
    if (!family_names.empty()) return family_names;
    if (!full_name.empty()) return full_name;
    return given_names;
}

json Agent::to_json() const {
    json j = json::object();
    if (!given_names.empty()) j["given_names"] = given_names;
    if (!family_names.empty()) j["family_names"] = family_names;
    if (!full_name.empty()) j["full_name"] = full_name;
    if (!orcid.empty()) j["orcid"] = orcid;
    if (!email.empty()) j["email"] = email;
    if (!affiliation.empty()) j["affiliation"] = affiliation;
    return j;
}

Agent Agent::from_json(const json& j) {
    Agent a;
    a.given_names = j.value("given_names", "");
    a.family_names = j.value("family_names", "");
    a.full_name = j.value("full_name", "");
    a.orcid = j.value("orcid", "");
    a.email = j.value("email", "");
    a.affiliation = j.value("affiliation", "");
    return a;
}

std::string to_string(IdScheme s) {
    switch (s) {
        case IdScheme::doi: return "doi";
        case IdScheme::url: return "url";
        case IdScheme::swhid: return "swhid";
        case IdScheme::other: return "other";
    }
    return "other";
}

std::string to_string(IdRelation r) {
    switch (r) {
        case IdRelation::is_version_of: return "is_version_of";
        case IdRelation::cites: return "cites";
        case IdRelation::is_part_of: return "is_part_of";
        case IdRelation::self: return "self";
    }
    return "self";
}

IdScheme id_scheme_from_string(const std::string& s) {
    if (s == "doi") return IdScheme::doi;
    if (s == "url") return IdScheme::url;
    if (s == "swhid") return IdScheme::swhid;
    if (s == "other") return IdScheme::other;
    throw Error(ErrorKind::validation, "unknown identifier scheme: " + s);
}

IdRelation id_relation_from_string(const std::string& s) {
    if (s == "is_version_of") return IdRelation::is_version_of;
    if (s == "cites") return IdRelation::cites;
    if (s == "is_part_of") return IdRelation::is_part_of;
    if (s == "self") return IdRelation::self;
    throw Error(ErrorKind::validation, "unknown identifier relation: " + s);
}

json Identifier::to_json() const {
    return json{{"scheme", to_string(scheme)},
                {"value", value},
                {"relation", to_string(relation)}};
}

Identifier Identifier::from_json(const json& j) {
    Identifier id;
    id.scheme = id_scheme_from_string(j.value("scheme", "other"));
    id.value = j.value("value", "");
    id.relation = id_relation_from_string(j.value("relation", "self"));
    return id;
}

json ProvenancedField::to_json() const {
    return json{{"field", field_path},
                {"value", value},
                {"source", to_string(source_kind)},
                {"location", location},
                {"confidence", to_string(confidence)}};
}

ProvenancedField ProvenancedField::from_json(const json& j) {
    ProvenancedField f;
    f.field_path = j.at("field").get<std::string>();
    f.value = j.at("value");
    f.source_kind = source_kind_from_string(j.at("source").get<std::string>());
    f.location = j.value("location", "");
    f.confidence = confidence_from_string(j.value("confidence", "heuristic"));
    return f;
}

void HarvestResult::add(std::string field_path, json value, Confidence confidence) {
    ProvenancedField f;
    f.field_path = std::move(field_path);
    f.value = std::move(value);
    f.source_kind = source_kind;
    f.location = location;
    f.confidence = confidence;
    fields.push_back(std::move(f));
}

json HarvestResult::to_json() const {
    json fj = json::array();
    for (const auto& f : fields) fj.push_back(f.to_json());
    return json{{"source", to_string(source_kind)},
                {"location", location},
                {"fields", fj},
                {"warnings", warnings}};
}

HarvestResult HarvestResult::from_json(const json& j) {
    HarvestResult r;
    r.source_kind = source_kind_from_string(j.at("source").get<std::string>());
    r.location = j.value("location", "");
    for (const auto& fj : j.value("fields", json::array())) {
        r.fields.push_back(ProvenancedField::from_json(fj));
    }
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
}

json Provenance::to_json() const {
    return json{{"source", to_string(source_kind)},
                {"location", location},
                {"confidence", to_string(confidence)}};
}

Provenance Provenance::from_json(const json& j) {
    Provenance p;
    p.source_kind = source_kind_from_string(j.at("source").get<std::string>());
    p.location = j.value("location", "");
    p.confidence = confidence_from_string(j.value("confidence", "heuristic"));
    return p;
}

const std::vector<FieldSpec>& canonical_fields() {
    static const std::vector<FieldSpec> fields = {
        {"name", FieldType::text},
        {"version", FieldType::text},
        {"description", FieldType::text},
        {"authors", FieldType::agent_list},
        {"contributors", FieldType::agent_list},
        {"license", FieldType::spdx_expression},
        {"keywords", FieldType::text_list},
        {"programming_languages", FieldType::text_list},
        {"repository_url", FieldType::url},
        {"identifiers", FieldType::identifier_list},
        {"date_released", FieldType::date},
        {"funding", FieldType::text_list},
        {"references", FieldType::identifier_list},
        {"artifact_kind", FieldType::artifact_kind},
    };
    return fields;
}

const FieldSpec* find_canonical_field(const std::string& path) {
    for (const auto& f : canonical_fields()) {
        if (f.path == path) return &f;
    }
    return nullptr;
}

const json* CanonicalRecord::value(const std::string& path) const {
    auto it = fields_.find(path);
    return it == fields_.end() ? nullptr : &it->second.value;
}

const CanonicalRecord::Field* CanonicalRecord::field(const std::string& path) const {
    auto it = fields_.find(path);
    return it == fields_.end() ? nullptr : &it->second;
}

void CanonicalRecord::set(const std::string& path, json value,
                          std::vector<Provenance> provenance) {
    if (provenance.empty()) {
        throw Error(ErrorKind::validation,
                    "field without provenance: " + path);
    }
    fields_[path] = Field{std::move(value), std::move(provenance)};
}

std::string CanonicalRecord::text(const std::string& path) const {
    const json* v = value(path);
    if (!v || !v->is_string()) return "";
    return v->get<std::string>();
}

std::vector<Agent> CanonicalRecord::agents(const std::string& path) const {
    std::vector<Agent> out;
    const json* v = value(path);
    if (!v || !v->is_array()) return out;
    for (const auto& a : *v) out.push_back(Agent::from_json(a));
    return out;
}

std::vector<Identifier> CanonicalRecord::identifiers(const std::string& path) const {
    std::vector<Identifier> out;
    const json* v = value(path);
    if (!v || !v->is_array()) return out;
    for (const auto& a : *v) out.push_back(Identifier::from_json(a));
    return out;
}

std::vector<std::string> CanonicalRecord::text_list(const std::string& path) const {
    std::vector<std::string> out;
    const json* v = value(path);
    if (!v || !v->is_array()) return out;
    for (const auto& a : *v) {
        if (a.is_string()) out.push_back(a.get<std::string>());
    }
    return out;
}

json CanonicalRecord::to_json() const {
    json fields = json::object();
    for (const auto& [path, field] : fields_) {
        json prov = json::array();
        for (const auto& p : field.provenance) prov.push_back(p.to_json());
        fields[path] = json{{"value", field.value}, {"provenance", prov}};
    }
    return json{{"fields", fields}};
}

CanonicalRecord CanonicalRecord::from_json(const json& j) {
    CanonicalRecord rec;
    for (const auto& [path, fj] : j.at("fields").items()) {
        std::vector<Provenance> prov;
        for (const auto& pj : fj.at("provenance")) {
            prov.push_back(Provenance::from_json(pj));
        }
        rec.set(path, fj.at("value"), std::move(prov));
    }
    return rec;
}

}  // namespace hermes
