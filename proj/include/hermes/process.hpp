#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hermes/config.hpp"
#include "hermes/model.hpp"

namespace hermes {

enum class ConflictResolution { precedence, confidence, equal_value_collapse };

std::string to_string(ConflictResolution r);

// Diverging candidate values for one field: the surviving value plus one
// representative per losing value.
struct MergeConflict {
    std::string field_path;
    ProvenancedField winner;
    std::vector<ProvenancedField> losers;
    ConflictResolution resolution = ConflictResolution::precedence;

    json to_json() const;
    static MergeConflict from_json(const json& j);
};

struct MergeOutcome {
    CanonicalRecord record;
    std::vector<MergeConflict> conflicts;
    std::vector<std::string> warnings;
};

// Equality under the agent-identity ladder: ORCID dominates, then email,
// then normalized names. Symmetric; transitivity comes from union-find
// grouping in dedup_agents.
bool agent_identity(const Agent& a, const Agent& b);

// Lowercased, diacritic-folded, whitespace-collapsed "given family" form.
std::string normalized_agent_name(const Agent& agent);

// Collapses identity-equal agents, keeping first-seen order and filling
// missing ids/emails/affiliations from later duplicates.
std::vector<Agent> dedup_agents(const std::vector<Agent>& agents);

// Precedence-driven merge of crosswalked fields into one record.
// Scalar fields: highest-precedence source wins, diverging values are
// recorded as conflicts, equal values collapse silently. List fields are
// unioned with dedup, ordered by contributing source rank. Agent lists are
// taken wholesale from the winning source; lower-source contributors that
// are not identity-equal to any author augment contributors. Output is
// invariant under permutation of the input fields.
MergeOutcome merge(const std::vector<ProvenancedField>& fields,
                   const std::vector<SourceKind>& precedence);

enum class LintSeverity { error, warning, info };

std::string to_string(LintSeverity s);

struct LintFinding {
    LintSeverity severity = LintSeverity::info;
    std::string rule;
    std::string field_path;
    std::string message;

    json to_json() const;
};

struct LintReport {
    std::vector<LintFinding> findings;
    bool passed = true;

    std::vector<const LintFinding*> errors() const;
    json to_json() const;
};

struct RequirementProfile {
    std::string name;
    // canonical field paths; "contact_email" is the virtual requirement
    // that some author or contributor carries an email address
    std::vector<std::string> mandatory_fields;
    std::vector<std::string> allowed_artifact_kinds;
    bool license_required = false;

    json to_json() const;
    static RequirementProfile from_json(const json& j);
};

const RequirementProfile& builtin_profile(const std::string& name);
const RequirementProfile& builtin_profile_for(TargetKind kind);
RequirementProfile load_profile(const std::filesystem::path& path);

// Never throws: reports missing mandatory fields (error), heuristic values
// backing mandatory fields (warning) and unresolved conflicts (info).
LintReport lint(const CanonicalRecord& record, const RequirementProfile& profile,
                const std::vector<MergeConflict>& conflicts = {});

}  // namespace hermes
