#include "hermes/crosswalk.hpp"

#include <algorithm>
#include <map>

#include "hermes/spdx.hpp"
#include "hermes_data.hpp"

namespace hermes {

namespace {

using util::to_lower;
using util::trim;

// "Jane Doe <jane@doe.org> (https://doe.org)" -> name, email, url
struct NameParts {
    std::string name;
    std::string email;
};

NameParts split_packagejson_style(const std::string& raw) {
    NameParts parts;
    std::string rest = raw;
    auto lt = rest.find('<');
    auto gt = rest.find('>');
    if (lt != std::string::npos && gt != std::string::npos && gt > lt) {
        parts.email = trim(rest.substr(lt + 1, gt - lt - 1));
        rest = rest.substr(0, lt) + rest.substr(gt + 1);
    }
    auto op = rest.find('(');
    auto cp = rest.find(')');
    if (op != std::string::npos && cp != std::string::npos && cp > op) {
        rest = rest.substr(0, op) + rest.substr(cp + 1);
    }
    parts.name = trim(rest);
    return parts;
}

json agent_from_name_string(const std::string& raw) {
    NameParts parts = split_packagejson_style(raw);
    Agent agent;
    agent.email = parts.email;
    auto comma = parts.name.find(',');
    if (comma != std::string::npos) {
        agent.family_names = trim(parts.name.substr(0, comma));
        agent.given_names = trim(parts.name.substr(comma + 1));
    } else {
        agent.full_name = parts.name;
    }
    return agent.to_json();
}

json person_name_split(const json& value, std::vector<std::string>& warnings) {
    if (value.is_string()) {
        return agent_from_name_string(value.get<std::string>());
    }
    if (value.is_object()) {
        json out = value;
        if (value.contains("name") && value.at("name").is_string()) {
            json split = agent_from_name_string(value.at("name").get<std::string>());
            out.erase("name");
            for (const auto& [k, v] : split.items()) out[k] = v;
        }
        return out;
    }
    warnings.push_back("person-name-split: unsupported value shape");
    return value;
}

std::optional<json> transform_scalar(const std::string& name, const json& value,
                                     std::vector<std::string>& warnings) {
    if (name == "identity") return value;
    if (name == "spdx-url-suffix") {
        if (!value.is_string()) return value;
        return json(spdx::strip_spdx_url(value.get<std::string>()));
    }
    if (name == "person-name-split") {
        return person_name_split(value, warnings);
    }
    if (name == "date-normalize") {
        if (!value.is_string()) {
            warnings.push_back("date-normalize: value is not a string");
            return std::nullopt;
        }
        auto iso = util::normalize_date(value.get<std::string>());
        if (!iso) {
            warnings.push_back("date-normalize: unparseable date '" +
                               value.get<std::string>() + "'");
            return std::nullopt;
        }
        return json(*iso);
    }
    if (name == "platform-license-slug") {
        std::string raw;
        if (value.is_string()) {
            raw = value.get<std::string>();
        } else if (value.is_object()) {
            // platform license objects: {"key": "apache-2.0", "spdx_id": ...}
            for (const char* k : {"spdx_id", "key", "name"}) {
                if (value.contains(k) && value.at(k).is_string()) {
                    raw = value.at(k).get<std::string>();
                    break;
                }
            }
        }
        if (raw.empty()) {
            warnings.push_back("platform-license-slug: no license string found");
            return std::nullopt;
        }
        if (auto id = spdx::from_alias(raw)) return json(*id);
        warnings.push_back("platform-license-slug: unknown license '" + raw + "'");
        return std::nullopt;
    }
    warnings.push_back("unknown transform: " + name);
    return std::nullopt;
}

std::string stringify_loose(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) {
        std::string s = v.dump();
        return s;
    }
    if (v.is_object()) {
        for (const char* k : {"name", "title", "value", "id"}) {
            if (v.contains(k) && v.at(k).is_string()) return v.at(k).get<std::string>();
        }
    }
    return "";
}

std::optional<json> coerce_text(const json& v, std::vector<std::string>& warnings) {
    std::string s = stringify_loose(v);
    if (s.empty()) {
        warnings.push_back("expected text value, got " + std::string(v.type_name()));
        return std::nullopt;
    }
    return json(s);
}

std::optional<json> coerce_date(const json& v, std::vector<std::string>& warnings) {
    if (v.is_string() && util::is_iso_date(v.get<std::string>())) return v;
    if (v.is_string()) {
        if (auto iso = util::normalize_date(v.get<std::string>())) return json(*iso);
    }
    warnings.push_back("expected calendar date, got " + v.dump());
    return std::nullopt;
}

std::optional<json> coerce_spdx(const json& v, std::vector<std::string>& warnings) {
    std::string raw;
    if (v.is_string()) {
        raw = v.get<std::string>();
    } else if (v.is_object()) {
        // pyproject {text = "..."} / platform {spdx_id...}
        for (const char* k : {"text", "spdx_id", "key", "name"}) {
            if (v.contains(k) && v.at(k).is_string()) {
                raw = v.at(k).get<std::string>();
                break;
            }
        }
    }
    raw = trim(raw);
    if (raw.empty()) {
        warnings.push_back("license value has no usable text");
        return std::nullopt;
    }
    if (auto id = spdx::canonical_id(raw)) return json(*id);
    if (spdx::valid_expression(raw)) return json(raw);
    if (auto id = spdx::from_alias(raw)) return json(*id);
    warnings.push_back("license '" + raw + "' is not a valid SPDX expression");
    return std::nullopt;
}

std::optional<json> coerce_url(const json& v, std::vector<std::string>& warnings) {
    std::string s;
    if (v.is_string()) {
        s = v.get<std::string>();
    } else if (v.is_object() && v.contains("url") && v.at("url").is_string()) {
        s = v.at("url").get<std::string>();
    }
    s = trim(s);
    if (s.rfind("git+", 0) == 0) s = s.substr(4);
    if (s.empty()) {
        warnings.push_back("expected URL value, got " + v.dump());
        return std::nullopt;
    }
    return json(s);
}

std::optional<json> coerce_artifact_kind(const json& v,
                                         std::vector<std::string>& warnings) {
    if (!v.is_string()) {
        warnings.push_back("artifact kind must be text");
        return std::nullopt;
    }
    std::string s = to_lower(trim(v.get<std::string>()));
    if (s == "software" || s == "dataset" || s == "other") return json(s);
    // repository upload types beyond the canonical three collapse to other
    static const std::vector<std::string> known = {
        "publication", "poster", "presentation", "image",
        "video",       "lesson", "physicalobject"};
    if (std::find(known.begin(), known.end(), s) != known.end()) {
        warnings.push_back("artifact kind '" + s + "' mapped to 'other'");
        return json("other");
    }
    warnings.push_back("unknown artifact kind '" + s + "'");
    return std::nullopt;
}

std::optional<json> coerce_text_list(const json& v,
                                     std::vector<std::string>& warnings) {
    json out = json::array();
    if (v.is_array()) {
        for (const auto& item : v) {
            std::string s = stringify_loose(item);
            if (!s.empty()) out.push_back(s);
        }
    } else {
        std::string s = stringify_loose(v);
        if (!s.empty()) out.push_back(s);
    }
    if (out.empty()) {
        warnings.push_back("expected text list, got " + v.dump());
        return std::nullopt;
    }
    return out;
}

IdScheme classify_identifier(const std::string& value) {
    if (util::looks_like_doi(value)) return IdScheme::doi;
    if (value.rfind("swh:", 0) == 0) return IdScheme::swhid;
    if (value.find("doi.org/10.") != std::string::npos) return IdScheme::doi;
    if (value.find("://") != std::string::npos) return IdScheme::url;
    return IdScheme::other;
}

std::string strip_doi_url(const std::string& value) {
    for (std::string_view prefix :
         {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
          "http://dx.doi.org/", "doi.org/", "doi:"}) {
        if (value.size() > prefix.size() &&
            to_lower(value.substr(0, prefix.size())) == prefix) {
            return value.substr(prefix.size());
        }
    }
    return value;
}

IdRelation relation_from_loose(const std::string& raw, IdRelation fallback) {
    std::string s;
    for (char c : raw) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (s == "isversionof") return IdRelation::is_version_of;
    if (s == "ispartof") return IdRelation::is_part_of;
    if (s == "cites" || s == "references") return IdRelation::cites;
    if (s == "self" || s == "isidenticalto" || s == "isalternateidentifier") {
        return IdRelation::self;
    }
    return fallback;
}

std::optional<Identifier> identifier_from_loose(const json& v, IdRelation fallback,
                                                std::vector<std::string>& warnings) {
    Identifier id;
    id.relation = fallback;
    if (v.is_string()) {
        std::string raw = trim(v.get<std::string>());
        if (raw.empty()) return std::nullopt;
        std::string bare = strip_doi_url(raw);
        id.scheme = classify_identifier(bare);
        id.value = (id.scheme == IdScheme::doi) ? bare : raw;
        return id;
    }
    if (v.is_object()) {
        // {type|scheme, value|identifier, relation?} across CFF and
        // repository dialects
        std::string value;
        for (const char* k : {"value", "identifier", "doi"}) {
            if (v.contains(k) && v.at(k).is_string()) {
                value = v.at(k).get<std::string>();
                break;
            }
        }
        if (value.empty() && v.contains("title") && v.at("title").is_string()) {
            // bibliographic reference without an id: keep the title
            id.scheme = IdScheme::other;
            id.value = v.at("title").get<std::string>();
            return id;
        }
        if (value.empty()) {
            warnings.push_back("identifier object without value: " + v.dump());
            return std::nullopt;
        }
        std::string bare = strip_doi_url(trim(value));
        std::string declared;
        for (const char* k : {"scheme", "type"}) {
            if (v.contains(k) && v.at(k).is_string()) {
                declared = to_lower(v.at(k).get<std::string>());
                break;
            }
        }
        if (declared == "doi") id.scheme = IdScheme::doi;
        else if (declared == "url") id.scheme = IdScheme::url;
        else if (declared == "swh" || declared == "swhid") id.scheme = IdScheme::swhid;
        else if (!declared.empty() && declared != "other") id.scheme = classify_identifier(bare);
        else if (declared == "other") id.scheme = IdScheme::other;
        else id.scheme = classify_identifier(bare);
        id.value = (id.scheme == IdScheme::doi) ? bare : trim(value);
        if (v.contains("relation") && v.at("relation").is_string()) {
            id.relation = relation_from_loose(v.at("relation").get<std::string>(), fallback);
        }
        return id;
    }
    return std::nullopt;
}

// dependency maps: {"lodash": "^4.17.21"} or {"serde": {"version": "1.0"}}
void dependencies_to_identifiers(const json& map, json& out) {
    for (const auto& [dep, spec] : map.items()) {
        std::string range;
        if (spec.is_string()) {
            range = spec.get<std::string>();
        } else if (spec.is_object() && spec.contains("version") &&
                   spec.at("version").is_string()) {
            range = spec.at("version").get<std::string>();
        }
        Identifier id;
        id.scheme = IdScheme::other;
        id.relation = IdRelation::cites;
        id.value = range.empty() ? dep : dep + " " + range;
        out.push_back(id.to_json());
    }
}

std::optional<json> coerce_identifier_list(const std::string& field_path,
                                           const json& v,
                                           std::vector<std::string>& warnings) {
    IdRelation fallback =
        (field_path == "references") ? IdRelation::cites : IdRelation::self;
    json out = json::array();
    auto add = [&](const json& item) {
        // maven dependency elements
        if (item.is_object() && item.contains("artifactId")) {
            Identifier id;
            id.scheme = IdScheme::other;
            id.relation = IdRelation::cites;
            std::string group = item.value("groupId", "");
            std::string name = item.value("artifactId", "");
            std::string version = item.value("version", "");
            id.value = group.empty() ? name : group + ":" + name;
            if (!version.empty()) id.value += " " + version;
            out.push_back(id.to_json());
            return;
        }
        if (auto id = identifier_from_loose(item, fallback, warnings)) {
            out.push_back(id->to_json());
        }
    };
    if (v.is_array()) {
        for (const auto& item : v) add(item);
    } else if (v.is_object() && !v.contains("value") && !v.contains("identifier") &&
               !v.contains("doi") && !v.contains("artifactId") && !v.contains("title")) {
        dependencies_to_identifiers(v, out);
    } else {
        add(v);
    }
    if (out.empty()) {
        warnings.push_back("no usable identifiers in " + v.dump());
        return std::nullopt;
    }
    return out;
}

std::optional<json> coerce_agent_list(const json& v,
                                      std::vector<std::string>& warnings) {
    json out = json::array();
    auto add = [&](const json& item) {
        if (auto agent = coerce_agent(item, warnings)) {
            out.push_back(agent->to_json());
        }
    };
    if (v.is_array()) {
        for (const auto& item : v) add(item);
    } else {
        add(v);
    }
    if (out.empty()) {
        warnings.push_back("no usable agents in value");
        return std::nullopt;
    }
    return out;
}

std::optional<json> coerce_value(const FieldSpec& spec, const json& value,
                                 std::vector<std::string>& warnings) {
    switch (spec.type) {
        case FieldType::text: return coerce_text(value, warnings);
        case FieldType::date: return coerce_date(value, warnings);
        case FieldType::spdx_expression: return coerce_spdx(value, warnings);
        case FieldType::url: return coerce_url(value, warnings);
        case FieldType::artifact_kind: return coerce_artifact_kind(value, warnings);
        case FieldType::text_list: return coerce_text_list(value, warnings);
        case FieldType::agent_list: return coerce_agent_list(value, warnings);
        case FieldType::identifier_list:
            return coerce_identifier_list(spec.path, value, warnings);
    }
    return std::nullopt;
}

std::map<std::string, CrosswalkTable> load_builtin_tables() {
    std::map<std::string, CrosswalkTable> tables;
    for (const auto& [name, csv] : data::crosswalk_tables) {
        std::string key(name);
        SourceKind kind = SourceKind::manifest;
        if (key.rfind("manifest_", 0) != 0) kind = source_kind_from_string(key);
        tables.emplace(key, CrosswalkTable::from_csv(kind, csv));
    }
    return tables;
}

const std::map<std::string, CrosswalkTable>& builtin_tables() {
    static const std::map<std::string, CrosswalkTable> tables = load_builtin_tables();
    return tables;
}

}  // namespace

CrosswalkTable::CrosswalkTable(SourceKind kind, std::vector<CrosswalkRow> rows)
    : kind_(kind), rows_(std::move(rows)) {
    for (const auto& row : rows_) {
        if (!find_canonical_field(row.canonical_field)) {
            throw Error(ErrorKind::validation,
                        "crosswalk row maps to unknown canonical field '" +
                            row.canonical_field + "'");
        }
        const auto& names = registered_transforms();
        if (std::find(names.begin(), names.end(), row.transform) == names.end()) {
            throw Error(ErrorKind::validation,
                        "crosswalk row uses unregistered transform '" +
                            row.transform + "'");
        }
    }
}

CrosswalkTable CrosswalkTable::from_csv(SourceKind kind, std::string_view csv) {
    std::vector<CrosswalkRow> rows;
    auto lines = util::split_lines(std::string(csv));
    for (size_t i = 0; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        if (i == 0 && line.rfind("native_key", 0) == 0) continue;  // header
        auto cols = util::split(line, ',');
        if (cols.size() != 3) {
            throw Error(ErrorKind::parse,
                        "crosswalk csv line " + std::to_string(i + 1) +
                            ": expected 3 columns");
        }
        rows.push_back({trim(cols[0]), trim(cols[1]), trim(cols[2])});
    }
    return CrosswalkTable(kind, std::move(rows));
}

CrosswalkTable CrosswalkTable::from_csv_file(SourceKind kind,
                                             const std::filesystem::path& path) {
    return from_csv(kind, util::read_file(path));
}

const CrosswalkRow* CrosswalkTable::find(const std::string& native_key) const {
    for (const auto& row : rows_) {
        if (row.native_key == native_key) return &row;
    }
    return nullptr;
}

const CrosswalkTable& builtin_table(SourceKind kind) {
    auto it = builtin_tables().find(to_string(kind));
    if (it == builtin_tables().end()) {
        throw Error(ErrorKind::validation,
                    "no builtin crosswalk table for source kind " + to_string(kind));
    }
    return it->second;
}

std::string to_string(ManifestDialect d) {
    switch (d) {
        case ManifestDialect::python_project: return "python-project";
        case ManifestDialect::node_package: return "node-package";
        case ManifestDialect::rust_crate: return "rust-crate";
        case ManifestDialect::maven_pom: return "maven-pom";
    }
    return "python-project";
}

ManifestDialect manifest_dialect_from_string(const std::string& s) {
    if (s == "python-project") return ManifestDialect::python_project;
    if (s == "node-package") return ManifestDialect::node_package;
    if (s == "rust-crate") return ManifestDialect::rust_crate;
    if (s == "maven-pom") return ManifestDialect::maven_pom;
    throw Error(ErrorKind::validation, "unknown manifest dialect: " + s);
}

const CrosswalkTable& builtin_manifest_table(ManifestDialect dialect) {
    std::string key = "manifest_" + to_string(dialect);
    std::replace(key.begin(), key.end(), '-', '_');
    auto it = builtin_tables().find(key);
    if (it == builtin_tables().end()) {
        throw Error(ErrorKind::validation, "no builtin table " + key);
    }
    return it->second;
}

const std::vector<std::string>& registered_transforms() {
    static const std::vector<std::string> names = {
        "identity", "spdx-url-suffix", "person-name-split", "date-normalize",
        "platform-license-slug"};
    return names;
}

std::optional<json> apply_transform(const std::string& name, const json& value,
                                    std::vector<std::string>& warnings) {
    // element-wise over arrays, except identity which passes through
    if (value.is_array() && name != "identity") {
        json out = json::array();
        for (const auto& item : value) {
            if (auto t = transform_scalar(name, item, warnings)) out.push_back(*t);
        }
        if (out.empty()) return std::nullopt;
        return out;
    }
    return transform_scalar(name, value, warnings);
}

std::optional<Agent> coerce_agent(const json& value,
                                  std::vector<std::string>& warnings) {
    if (value.is_string()) {
        json split = agent_from_name_string(value.get<std::string>());
        Agent agent = Agent::from_json(split);
        if (!agent.has_name()) return std::nullopt;
        return agent;
    }
    if (!value.is_object()) {
        warnings.push_back("agent value is not an object or string");
        return std::nullopt;
    }
    Agent agent;
    auto get = [&](std::initializer_list<const char*> keys) -> std::string {
        for (const char* k : keys) {
            if (value.contains(k) && value.at(k).is_string()) {
                return value.at(k).get<std::string>();
            }
        }
        return "";
    };
    agent.given_names = get({"given_names", "given-names", "givenName"});
    agent.family_names = get({"family_names", "family-names", "familyName"});
    agent.full_name = get({"full_name", "name"});
    agent.email = get({"email"});
    agent.orcid = get({"orcid"});
    if (agent.orcid.empty()) {
        std::string at_id = get({"@id"});
        if (at_id.find("orcid.org/") != std::string::npos) agent.orcid = at_id;
    }
    if (value.contains("affiliation")) {
        const auto& aff = value.at("affiliation");
        if (aff.is_string()) {
            agent.affiliation = aff.get<std::string>();
        } else if (aff.is_object() && aff.contains("name") &&
                   aff.at("name").is_string()) {
            agent.affiliation = aff.at("name").get<std::string>();
        }
    }
    if (!agent.orcid.empty()) {
        std::string bare = util::normalize_orcid(agent.orcid);
        if (util::valid_orcid(bare)) {
            agent.orcid = bare;
        } else {
            warnings.push_back("invalid ORCID iD dropped: " + agent.orcid);
            agent.orcid.clear();
        }
    }
    if (!agent.has_name()) {
        warnings.push_back("agent without a name dropped");
        return std::nullopt;
    }
    // redundant fallback when a proper split exists
    if (!agent.given_names.empty() && !agent.family_names.empty()) {
        agent.full_name.clear();
    }
    return agent;
}

CrosswalkOutput crosswalk(const HarvestResult& result, const CrosswalkTable& table) {
    if (table.source_kind() != result.source_kind) {
        throw Error(ErrorKind::validation,
                    "crosswalk table for " + to_string(table.source_kind()) +
                        " applied to " + to_string(result.source_kind) + " result");
    }
    CrosswalkOutput out;
    for (const auto& field : result.fields) {
        const CrosswalkRow* row = table.find(field.field_path);
        if (!row) {
            out.warnings.push_back("unmapped native key '" + field.field_path +
                                   "' from " + to_string(result.source_kind));
            continue;
        }
        const FieldSpec* spec = find_canonical_field(row->canonical_field);
        std::vector<std::string> local;
        std::optional<json> transformed = apply_transform(row->transform, field.value, local);
        std::optional<json> coerced;
        if (transformed) coerced = coerce_value(*spec, *transformed, local);
        for (const auto& w : local) {
            out.warnings.push_back(field.field_path + ": " + w);
        }
        if (!coerced) continue;  // transform failure: finding attached, field dropped
        ProvenancedField mapped = field;
        mapped.field_path = row->canonical_field;
        mapped.value = std::move(*coerced);
        out.fields.push_back(std::move(mapped));
    }
    return out;
}

}  // namespace hermes
