#include "hermes/config.hpp"

#include <algorithm>
#include <set>

#include "hermes/toml_lite.hpp"

namespace hermes {

std::string to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::invenio_rdm: return "invenio_rdm";
        case TargetKind::dataverse: return "dataverse";
    }
    return "invenio_rdm";
}

TargetKind target_kind_from_string(const std::string& s) {
    if (s == "invenio_rdm") return TargetKind::invenio_rdm;
    if (s == "dataverse") return TargetKind::dataverse;
    throw Error(ErrorKind::validation, "unknown target kind: " + s);
}

std::string TargetConfig::key() const {
    return to_string(kind) + "@" + base_url;
}

int PipelineConfig::precedence_rank(SourceKind kind) const {
    for (size_t i = 0; i < precedence.size(); ++i) {
        if (precedence[i] == kind) return static_cast<int>(i);
    }
    return static_cast<int>(precedence.size());
}

const std::vector<SourceKind>& default_precedence() {
    static const std::vector<SourceKind> order = {
        SourceKind::cff,          SourceKind::codemeta,
        SourceKind::zenodo_json,  SourceKind::license_file,
        SourceKind::manifest,     SourceKind::platform_api,
        SourceKind::vcs,          SourceKind::plaintext,
    };
    return order;
}

namespace {

std::string require_string(const json& table, const std::string& key,
                           const std::string& context) {
    if (!table.contains(key) || !table.at(key).is_string() ||
        table.at(key).get<std::string>().empty()) {
        throw Error(ErrorKind::validation,
                    "config: missing or empty key '" + key + "' in " + context);
    }
    return table.at(key).get<std::string>();
}

}  // namespace

PipelineConfig config_from_toml(const json& doc) {
    PipelineConfig config;

    if (!doc.contains("unit") || !doc.at("unit").is_array() || doc.at("unit").empty()) {
        throw Error(ErrorKind::validation, "config: at least one [[unit]] is required");
    }
    std::set<std::string> seen_units;
    for (const auto& u : doc.at("unit")) {
        PublishUnit unit;
        unit.name = require_string(u, "name", "[[unit]]");
        if (!seen_units.insert(unit.name).second) {
            throw Error(ErrorKind::validation, "config: duplicate unit name '" + unit.name + "'");
        }
        if (!u.contains("paths") || !u.at("paths").is_array() || u.at("paths").empty()) {
            throw Error(ErrorKind::validation,
                        "config: unit '" + unit.name + "' needs a non-empty 'paths' array");
        }
        for (const auto& p : u.at("paths")) {
            if (!p.is_string()) {
                throw Error(ErrorKind::validation,
                            "config: unit '" + unit.name + "' paths must be strings");
            }
            unit.path_globs.push_back(p.get<std::string>());
        }
        config.publish_units.push_back(std::move(unit));
    }

    for (const auto& t : doc.value("target", json::array())) {
        TargetConfig target;
        target.kind = target_kind_from_string(require_string(t, "kind", "[[target]]"));
        target.base_url = require_string(t, "base_url", "[[target]]");
        target.requirement_profile = t.value("profile", "");
        target.community_or_collection = t.value("collection", "");
        target.credentials_env = t.value("credentials_env", "");
        config.targets.push_back(std::move(target));
    }

    if (doc.contains("precedence")) {
        const auto& prec = doc.at("precedence");
        if (!prec.is_array()) {
            throw Error(ErrorKind::validation, "config: 'precedence' must be an array");
        }
        std::set<SourceKind> seen;
        for (const auto& p : prec) {
            SourceKind kind = source_kind_from_string(p.get<std::string>());
            if (!seen.insert(kind).second) {
                throw Error(ErrorKind::validation,
                            "config: duplicate precedence entry '" + p.get<std::string>() + "'");
            }
            config.precedence.push_back(kind);
        }
    } else {
        config.precedence = default_precedence();
    }

    if (doc.contains("deposit_files")) {
        if (!doc.at("deposit_files").is_boolean()) {
            throw Error(ErrorKind::validation, "config: 'deposit_files' must be a boolean");
        }
        config.deposit_files = doc.at("deposit_files").get<bool>();
    }

    return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw Error(ErrorKind::usage, "config file not found: " + path.string());
    }
    return config_from_toml(toml::parse_file(path));
}

json config_to_toml(const PipelineConfig& config) {
    json doc = json::object();
    json prec = json::array();
    for (SourceKind kind : config.precedence) prec.push_back(to_string(kind));
    doc["precedence"] = prec;
    doc["deposit_files"] = config.deposit_files;

    json units = json::array();
    for (const auto& u : config.publish_units) {
        units.push_back(json{{"name", u.name}, {"paths", u.path_globs}});
    }
    doc["unit"] = units;

    json targets = json::array();
    for (const auto& t : config.targets) {
        json tj = json{{"kind", to_string(t.kind)}, {"base_url", t.base_url}};
        if (!t.requirement_profile.empty()) tj["profile"] = t.requirement_profile;
        if (!t.community_or_collection.empty()) tj["collection"] = t.community_or_collection;
        if (!t.credentials_env.empty()) tj["credentials_env"] = t.credentials_env;
        targets.push_back(std::move(tj));
    }
    if (!targets.empty()) doc["target"] = targets;
    return doc;
}

void save_config(const PipelineConfig& config, const std::filesystem::path& path) {
    util::write_file_atomic(path, toml::serialize(config_to_toml(config)));
}

}  // namespace hermes
