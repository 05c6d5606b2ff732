#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hermes/model.hpp"

namespace hermes {

enum class TargetKind { invenio_rdm, dataverse };

std::string to_string(TargetKind kind);
TargetKind target_kind_from_string(const std::string& s);

struct TargetConfig {
    TargetKind kind = TargetKind::invenio_rdm;
    std::string base_url;
    std::string requirement_profile;        // built-in profile name when empty
    std::string community_or_collection;
    std::string credentials_env;            // env var holding the API token

    // Stable key used for receipts, state tracking and --target filters.
    std::string key() const;
    bool operator==(const TargetConfig&) const = default;
};

struct PublishUnit {
    std::string name;
    std::vector<std::string> path_globs;
    bool operator==(const PublishUnit&) const = default;
};

struct PipelineConfig {
    std::vector<PublishUnit> publish_units;
    std::vector<TargetConfig> targets;
    std::vector<SourceKind> precedence;  // most trusted first
    bool deposit_files = false;

    int precedence_rank(SourceKind kind) const;
    bool operator==(const PipelineConfig&) const = default;
};

// Most to least trusted: dedicated citation files, then general structured
// files, then mined data, plain text last.
const std::vector<SourceKind>& default_precedence();

PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig config_from_toml(const json& doc);
json config_to_toml(const PipelineConfig& config);
void save_config(const PipelineConfig& config, const std::filesystem::path& path);

}  // namespace hermes
