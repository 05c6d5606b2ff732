#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hermes/config.hpp"
#include "hermes/http.hpp"
#include "hermes/model.hpp"
#include "hermes/process.hpp"

namespace hermes {

struct DepositJob {
    std::string unit;
    TargetConfig target;
    CanonicalRecord record;
    std::vector<std::filesystem::path> files;  // empty = metadata-only
    std::string prior_record_id;               // set when versioning
};

struct DepositReceipt {
    TargetKind target_kind = TargetKind::invenio_rdm;
    std::string target_key;
    std::string unit;
    std::string record_id;
    std::string concept_id;
    Identifier pid;  // doi, empty value while draft
    int version_index = 1;
    std::string state = "draft";  // draft | published
    std::string landing_url;
    std::vector<std::string> unmapped_fields;
    std::vector<std::string> carried_fields;

    json to_json() const;
    static DepositReceipt from_json(const json& j);
};

// Target-native payload plus the canonical fields that did not map
// (reported, never silently dropped) or were carried via a workaround slot.
struct MappedPayload {
    json document;
    std::vector<std::string> unmapped;
    std::vector<std::string> carried;
};

// InvenioRDM-style deposit metadata (Zenodo vocabulary): title,
// upload_type, creators, description, license, keywords,
// related_identifiers, version, publication_date. Empty lists are omitted.
MappedPayload map_to_invenio(const CanonicalRecord& record);

// Dataverse-style dataset version document (citation block). Software
// fields without a native slot are carried: programming languages as
// "lang:" keywords, version as an otherId, repository URL as related
// material. Requires a contact email.
MappedPayload map_to_dataverse(const CanonicalRecord& record);

// Reads the token named by target.credentials_env. Throws ErrorKind::auth
// when the variable is unset or empty.
std::string resolve_credentials(const TargetConfig& target);

// GET /api/requirements with fallback to the built-in profile for the
// target kind (warning appended, never fatal).
RequirementProfile elicit_requirements(const TargetConfig& target,
                                       HttpTransport& transport,
                                       std::vector<std::string>* warnings = nullptr);

// Draft -> metadata -> uploads (checksum-verified) -> publish -> fetch.
// Progress is journaled per job under work_dir/steps so a retried run
// resumes instead of duplicating; the journal is cleared on success.
DepositReceipt run_deposit(const DepositJob& job, HttpTransport& transport,
                           const std::filesystem::path& work_dir);

}  // namespace hermes
