#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "hermes/config.hpp"
#include "hermes/crosswalk.hpp"
#include "hermes/http.hpp"
#include "hermes/model.hpp"

namespace hermes {

// A metadata source present in a publish unit. Locations are relative to
// the unit root and exist at discovery time.
struct SourceDescriptor {
    SourceKind kind = SourceKind::plaintext;
    std::string location;
    int stage = 1;
    std::optional<ManifestDialect> dialect;  // manifest sources only

    bool operator==(const SourceDescriptor&) const = default;
};

// Directory prefix shared by all of a unit's path globs, relative to the
// repository root ("." when the globs span the whole tree).
std::filesystem::path unit_root_for(const std::filesystem::path& repo_root,
                                    const PublishUnit& unit);

// Availability pass: one descriptor per enabled source kind actually
// present, ordered by (stage, location).
std::vector<SourceDescriptor> discover_sources(const std::filesystem::path& unit_root,
                                               const PipelineConfig& config);

// Native (pre-crosswalk) extraction for the keyed document formats. The
// field paths of the returned results are source-native keys.
HarvestResult harvest_cff_native(const std::filesystem::path& path);
HarvestResult harvest_codemeta_native(const std::filesystem::path& path);
HarvestResult harvest_zenodo_json_native(const std::filesystem::path& path);
HarvestResult harvest_manifest_native(const std::filesystem::path& path,
                                      ManifestDialect dialect);
HarvestResult harvest_platform_native(const std::string& location,
                                      HttpTransport* transport);

// Canonical-field harvesters (native extraction + bundled crosswalk table).
HarvestResult harvest_cff(const std::filesystem::path& path);
HarvestResult harvest_codemeta(const std::filesystem::path& path);
HarvestResult harvest_zenodo_json(const std::filesystem::path& path);
HarvestResult harvest_manifest(const std::filesystem::path& path,
                               ManifestDialect dialect);
HarvestResult harvest_platform(const std::string& location, HttpTransport* transport);

// Scans LICENSE/COPYING files and REUSE LICENSES/ directories; identifies
// SPDX ids by similarity against the bundled reference texts.
HarvestResult harvest_license(const std::filesystem::path& unit_root);

// Commit-history mining: contributors (never authors), tag-derived version
// candidate, last-commit date. path_globs restrict to the unit's files.
HarvestResult harvest_vcs(const std::filesystem::path& unit_root,
                          const std::vector<std::string>& path_globs = {});

// Rule-based README mining: heading -> name candidate, DOI patterns,
// copyright lines -> author-name candidates. Everything heuristic.
HarvestResult harvest_plaintext(const std::filesystem::path& unit_root);

// Dispatch one discovered source. transport may be null for file-backed
// platform fixtures.
HarvestResult harvest_source(const std::filesystem::path& unit_root,
                             const SourceDescriptor& descriptor,
                             const std::vector<std::string>& path_globs,
                             HttpTransport* transport = nullptr);

}  // namespace hermes
