#include "hermes/process.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "hermes/spdx.hpp"
#include "hermes/toml_lite.hpp"

namespace hermes {

std::string to_string(ConflictResolution r) {
    switch (r) {
        case ConflictResolution::precedence: return "precedence";
        case ConflictResolution::confidence: return "confidence";
        case ConflictResolution::equal_value_collapse: return "equal-value-collapse";
    }
    return "precedence";
}

json MergeConflict::to_json() const {
    json losers_json = json::array();
    for (const auto& l : losers) losers_json.push_back(l.to_json());
    return json{{"field", field_path},
                {"winner", winner.to_json()},
                {"losers", losers_json},
                {"resolution", to_string(resolution)}};
}

MergeConflict MergeConflict::from_json(const json& j) {
    MergeConflict c;
    c.field_path = j.at("field").get<std::string>();
    c.winner = ProvenancedField::from_json(j.at("winner"));
    for (const auto& l : j.at("losers")) {
        c.losers.push_back(ProvenancedField::from_json(l));
    }
    std::string r = j.value("resolution", "precedence");
    if (r == "confidence") c.resolution = ConflictResolution::confidence;
    else if (r == "equal-value-collapse") c.resolution = ConflictResolution::equal_value_collapse;
    else c.resolution = ConflictResolution::precedence;
    return c;
}

std::string normalized_agent_name(const Agent& agent) {
    std::string name;
    if (!agent.given_names.empty() || !agent.family_names.empty()) {
        name = agent.given_names + " " + agent.family_names;
    } else {
        name = agent.full_name;
        auto comma = name.find(',');
        if (comma != std::string::npos) {
            // "family, given" -> "given family"
            name = name.substr(comma + 1) + " " + name.substr(0, comma);
        }
    }
    return util::collapse_whitespace(util::fold_diacritics(util::to_lower(name)));
}

bool agent_identity(const Agent& a, const Agent& b) {
    if (!a.orcid.empty() && !b.orcid.empty()) {
        return util::normalize_orcid(a.orcid) == util::normalize_orcid(b.orcid);
    }
    if (!a.email.empty() && !b.email.empty() &&
        util::to_lower(a.email) == util::to_lower(b.email)) {
        return true;
    }
    std::string na = normalized_agent_name(a);
    std::string nb = normalized_agent_name(b);
    return !na.empty() && na == nb;
}

namespace {

// union-find so that identity is transitive across a whole list
struct UnionFind {
    std::vector<size_t> parent;

    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    size_t find(size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(size_t a, size_t b) { parent[find(b)] = find(a); }
};

void fill_missing(Agent& into, const Agent& from) {
    if (into.orcid.empty()) into.orcid = from.orcid;
    if (into.email.empty()) into.email = from.email;
    if (into.affiliation.empty()) into.affiliation = from.affiliation;
    if (into.given_names.empty() && into.family_names.empty() &&
        (!from.given_names.empty() || !from.family_names.empty())) {
        into.given_names = from.given_names;
        into.family_names = from.family_names;
        into.full_name.clear();
    }
}

}  // namespace

std::vector<Agent> dedup_agents(const std::vector<Agent>& agents) {
    UnionFind groups(agents.size());
    for (size_t i = 0; i < agents.size(); ++i) {
        for (size_t j = i + 1; j < agents.size(); ++j) {
            if (agent_identity(agents[i], agents[j])) groups.unite(i, j);
        }
    }
    std::vector<Agent> out;
    std::map<size_t, size_t> representative;  // group root -> index in out
    for (size_t i = 0; i < agents.size(); ++i) {
        size_t root = groups.find(i);
        auto it = representative.find(root);
        if (it == representative.end()) {
            representative[root] = out.size();
            out.push_back(agents[i]);
        } else {
            fill_missing(out[it->second], agents[i]);
        }
    }
    return out;
}

namespace {

int rank_of(const std::vector<SourceKind>& precedence, SourceKind kind) {
    for (size_t i = 0; i < precedence.size(); ++i) {
        if (precedence[i] == kind) return static_cast<int>(i);
    }
    return static_cast<int>(precedence.size());
}

// deterministic candidate order: precedence rank, confidence (higher
// first), then value/location as tiebreak so merge is permutation-invariant
void sort_candidates(std::vector<ProvenancedField>& fields,
                     const std::vector<SourceKind>& precedence) {
    std::sort(fields.begin(), fields.end(),
              [&](const ProvenancedField& a, const ProvenancedField& b) {
                  int ra = rank_of(precedence, a.source_kind);
                  int rb = rank_of(precedence, b.source_kind);
                  if (ra != rb) return ra < rb;
                  if (a.confidence != b.confidence) {
                      return static_cast<int>(a.confidence) > static_cast<int>(b.confidence);
                  }
                  std::string da = a.value.dump();
                  std::string db = b.value.dump();
                  if (da != db) return da < db;
                  return a.location < b.location;
              });
}

std::vector<Provenance> provenance_of(const std::vector<ProvenancedField>& fields) {
    std::vector<Provenance> out;
    for (const auto& f : fields) {
        Provenance p{f.source_kind, f.location, f.confidence};
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
}

void merge_scalar(const std::string& path, std::vector<ProvenancedField> candidates,
                  const std::vector<SourceKind>& precedence, CanonicalRecord& record,
                  std::vector<MergeConflict>& conflicts) {
    sort_candidates(candidates, precedence);
    const ProvenancedField& winner = candidates.front();

    // one representative per distinct losing value
    std::vector<ProvenancedField> losers;
    std::vector<ProvenancedField> collapsed{winner};
    for (const auto& c : candidates) {
        if (c.value == winner.value) {
            collapsed.push_back(c);
            continue;
        }
        bool seen = std::any_of(losers.begin(), losers.end(),
                                [&](const ProvenancedField& l) {
                                    return l.value == c.value;
                                });
        if (!seen) losers.push_back(c);
    }

    record.set(path, winner.value, provenance_of(collapsed));

    if (!losers.empty()) {
        MergeConflict conflict;
        conflict.field_path = path;
        conflict.winner = winner;
        conflict.losers = std::move(losers);
        bool same_source = std::all_of(
            conflict.losers.begin(), conflict.losers.end(),
            [&](const ProvenancedField& l) { return l.source_kind == winner.source_kind; });
        conflict.resolution = same_source ? ConflictResolution::confidence
                                          : ConflictResolution::precedence;
        conflicts.push_back(std::move(conflict));
    }
}

std::string identifier_dedup_key(const json& v) {
    return v.value("scheme", "") + "|" + v.value("value", "");
}

void merge_list(const std::string& path, const FieldSpec& spec,
                std::vector<ProvenancedField> candidates,
                const std::vector<SourceKind>& precedence, CanonicalRecord& record) {
    sort_candidates(candidates, precedence);
    json merged = json::array();
    std::set<std::string> seen;
    for (const auto& c : candidates) {
        if (!c.value.is_array()) continue;
        for (const auto& item : c.value) {
            std::string key = (spec.type == FieldType::identifier_list)
                                  ? identifier_dedup_key(item)
                                  : item.dump();
            if (seen.insert(key).second) merged.push_back(item);
        }
    }
    if (!merged.empty()) {
        record.set(path, merged, provenance_of(candidates));
    }
}

std::vector<Agent> agents_of(const ProvenancedField& field) {
    std::vector<Agent> out;
    if (!field.value.is_array()) return out;
    for (const auto& a : field.value) out.push_back(Agent::from_json(a));
    return out;
}

json agents_to_json(const std::vector<Agent>& agents) {
    json out = json::array();
    for (const auto& a : agents) out.push_back(a.to_json());
    return out;
}

bool same_agent_list(const std::vector<Agent>& a, const std::vector<Agent>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!agent_identity(a[i], b[i])) return false;
    }
    return true;
}

}  // namespace

MergeOutcome merge(const std::vector<ProvenancedField>& fields,
                   const std::vector<SourceKind>& precedence) {
    if (fields.empty()) {
        throw Error(ErrorKind::validation, "no metadata harvested");
    }
    for (const auto& f : fields) {
        if (rank_of(precedence, f.source_kind) >=
            static_cast<int>(precedence.size())) {
            throw Error(ErrorKind::validation,
                        "precedence does not cover source kind " +
                            to_string(f.source_kind));
        }
    }

    MergeOutcome outcome;
    std::map<std::string, std::vector<ProvenancedField>> by_path;
    for (const auto& f : fields) {
        const FieldSpec* spec = find_canonical_field(f.field_path);
        if (!spec) {
            outcome.warnings.push_back("ignoring unknown canonical field '" +
                                       f.field_path + "'");
            continue;
        }
        ProvenancedField field = f;
        // commit-history names are contributorship, never authorship
        if (f.field_path == "authors" && f.source_kind == SourceKind::vcs) {
            outcome.warnings.push_back(
                "vcs-sourced agents routed to contributors (authorship guard)");
            field.field_path = "contributors";
        }
        by_path[field.field_path].push_back(std::move(field));
    }

    // agent lists are merged after authors so the author list can filter
    // augmented contributors
    std::vector<Agent> authors;
    if (auto it = by_path.find("authors"); it != by_path.end()) {
        auto candidates = it->second;
        sort_candidates(candidates, precedence);
        // winning source provides the list wholesale (no interleaving);
        // several fields from the same winning source concatenate
        SourceKind winning = candidates.front().source_kind;
        std::vector<Agent> list;
        std::vector<ProvenancedField> contributing;
        for (const auto& c : candidates) {
            if (c.source_kind != winning) continue;
            auto agents = agents_of(c);
            list.insert(list.end(), agents.begin(), agents.end());
            contributing.push_back(c);
        }
        authors = dedup_agents(list);
        // diverging lower-source author lists are reported, not interleaved
        {
            std::vector<ProvenancedField> losers;
            for (const auto& c : candidates) {
                if (c.source_kind == winning) continue;
                if (!same_agent_list(authors, agents_of(c))) {
                    bool seen = std::any_of(losers.begin(), losers.end(),
                                            [&](const ProvenancedField& l) {
                                                return l.value == c.value;
                                            });
                    if (!seen) losers.push_back(c);
                }
            }
            if (!losers.empty()) {
                MergeConflict conflict;
                conflict.field_path = "authors";
                conflict.winner = candidates.front();
                conflict.winner.value = agents_to_json(authors);
                conflict.losers = std::move(losers);
                conflict.resolution = ConflictResolution::precedence;
                outcome.conflicts.push_back(std::move(conflict));
            }
        }
        outcome.record.set("authors", agents_to_json(authors),
                           provenance_of(contributing));
    }

    if (auto it = by_path.find("contributors"); it != by_path.end()) {
        auto candidates = it->second;
        sort_candidates(candidates, precedence);
        SourceKind winning = candidates.front().source_kind;
        std::vector<Agent> list;
        std::vector<ProvenancedField> contributing;
        for (const auto& c : candidates) {
            if (c.source_kind != winning) continue;
            auto agents = agents_of(c);
            list.insert(list.end(), agents.begin(), agents.end());
            contributing.push_back(c);
        }
        list = dedup_agents(list);
        // lower sources augment: skip anyone identity-equal to an author
        // or an existing contributor
        for (const auto& c : candidates) {
            if (c.source_kind == winning) continue;
            bool used = false;
            for (const auto& agent : agents_of(c)) {
                bool is_author = std::any_of(authors.begin(), authors.end(),
                                             [&](const Agent& a) {
                                                 return agent_identity(a, agent);
                                             });
                bool present = std::any_of(list.begin(), list.end(),
                                           [&](const Agent& a) {
                                               return agent_identity(a, agent);
                                           });
                if (!is_author && !present) {
                    list.push_back(agent);
                    used = true;
                }
            }
            if (used) contributing.push_back(c);
        }
        if (!list.empty()) {
            outcome.record.set("contributors", agents_to_json(list),
                               provenance_of(contributing));
        }
    }

    for (auto& [path, candidates] : by_path) {
        if (path == "authors" || path == "contributors") continue;
        const FieldSpec* spec = find_canonical_field(path);
        if (spec->is_list()) {
            merge_list(path, *spec, candidates, precedence, outcome.record);
        } else {
            merge_scalar(path, candidates, precedence, outcome.record,
                         outcome.conflicts);
        }
    }

    // record invariants
    if (outcome.record.text("name").empty()) {
        throw Error(ErrorKind::validation, "merge produced no name");
    }
    if (outcome.record.has("license") &&
        !spdx::valid_expression(outcome.record.text("license"))) {
        outcome.warnings.push_back("dropped non-SPDX license expression '" +
                                   outcome.record.text("license") + "'");
        outcome.record.remove("license");
    }

    std::sort(outcome.conflicts.begin(), outcome.conflicts.end(),
              [](const MergeConflict& a, const MergeConflict& b) {
                  if (a.field_path != b.field_path) return a.field_path < b.field_path;
                  return a.winner.value.dump() < b.winner.value.dump();
              });
    return outcome;
}

std::string to_string(LintSeverity s) {
    switch (s) {
        case LintSeverity::error: return "error";
        case LintSeverity::warning: return "warning";
        case LintSeverity::info: return "info";
    }
    return "info";
}

json LintFinding::to_json() const {
    return json{{"severity", to_string(severity)},
                {"rule", rule},
                {"field", field_path},
                {"message", message}};
}

std::vector<const LintFinding*> LintReport::errors() const {
    std::vector<const LintFinding*> out;
    for (const auto& f : findings) {
        if (f.severity == LintSeverity::error) out.push_back(&f);
    }
    return out;
}

json LintReport::to_json() const {
    json findings_json = json::array();
    for (const auto& f : findings) findings_json.push_back(f.to_json());
    return json{{"findings", findings_json}, {"passed", passed}};
}

json RequirementProfile::to_json() const {
    return json{{"name", name},
                {"mandatory_fields", mandatory_fields},
                {"allowed_artifact_kinds", allowed_artifact_kinds},
                {"license_required", license_required}};
}

RequirementProfile RequirementProfile::from_json(const json& j) {
    RequirementProfile p;
    p.name = j.value("name", "custom");
    p.mandatory_fields = j.value("mandatory_fields", std::vector<std::string>{});
    p.allowed_artifact_kinds =
        j.value("allowed_artifact_kinds", std::vector<std::string>{});
    p.license_required = j.value("license_required", false);
    if (p.mandatory_fields.empty()) {
        throw Error(ErrorKind::validation,
                    "requirement profile without mandatory fields");
    }
    return p;
}

const RequirementProfile& builtin_profile(const std::string& name) {
    static const RequirementProfile invenio{
        "invenio-default",
        {"name", "authors", "description", "artifact_kind"},
        {"software", "dataset", "other"},
        true};
    static const RequirementProfile dataverse{
        "dataverse-default",
        {"name", "authors", "description", "contact_email", "keywords"},
        {},
        false};
    if (name == "invenio-default") return invenio;
    if (name == "dataverse-default") return dataverse;
    throw Error(ErrorKind::usage, "unknown requirement profile: " + name);
}

const RequirementProfile& builtin_profile_for(TargetKind kind) {
    return builtin_profile(kind == TargetKind::invenio_rdm ? "invenio-default"
                                                           : "dataverse-default");
}

RequirementProfile load_profile(const std::filesystem::path& path) {
    json doc = toml::parse_file(path);
    return RequirementProfile::from_json(doc);
}

namespace {

bool has_contact_email(const CanonicalRecord& record) {
    for (const char* path : {"authors", "contributors"}) {
        for (const auto& agent : record.agents(path)) {
            if (!agent.email.empty()) return true;
        }
    }
    return false;
}

bool field_satisfied(const CanonicalRecord& record, const std::string& path) {
    if (path == "contact_email") return has_contact_email(record);
    const json* v = record.value(path);
    if (!v) return false;
    if (v->is_string()) return !v->get<std::string>().empty();
    if (v->is_array()) return !v->empty();
    return !v->is_null();
}

}  // namespace

LintReport lint(const CanonicalRecord& record, const RequirementProfile& profile,
                const std::vector<MergeConflict>& conflicts) {
    LintReport report;
    for (const auto& path : profile.mandatory_fields) {
        if (!field_satisfied(record, path)) {
            report.findings.push_back(
                {LintSeverity::error, "mandatory." + path, path,
                 "mandatory field '" + path + "' is missing (profile " +
                     profile.name + ")"});
        } else if (path != "contact_email") {
            const auto* field = record.field(path);
            bool heuristic_only =
                field && std::all_of(field->provenance.begin(),
                                     field->provenance.end(),
                                     [](const Provenance& p) {
                                         return p.confidence == Confidence::heuristic;
                                     });
            if (heuristic_only) {
                report.findings.push_back(
                    {LintSeverity::warning, "mandatory.heuristic", path,
                     "heuristic value for mandatory field '" + path + "'"});
            }
        }
    }
    if (profile.license_required && !record.has("license")) {
        report.findings.push_back({LintSeverity::error, "license.required",
                                   "license", "license is required by profile " +
                                                  profile.name});
    }
    if (!profile.allowed_artifact_kinds.empty() && record.has("artifact_kind")) {
        std::string kind = record.text("artifact_kind");
        if (std::find(profile.allowed_artifact_kinds.begin(),
                      profile.allowed_artifact_kinds.end(),
                      kind) == profile.allowed_artifact_kinds.end()) {
            report.findings.push_back(
                {LintSeverity::error, "artifact_kind.allowed", "artifact_kind",
                 "artifact kind '" + kind + "' not accepted by profile " +
                     profile.name});
        }
    }
    for (const auto& conflict : conflicts) {
        report.findings.push_back(
            {LintSeverity::info, "merge.conflict", conflict.field_path,
             "unresolved merge conflict on '" + conflict.field_path + "' (" +
                 std::to_string(conflict.losers.size()) + " losing value(s))"});
    }
    report.passed = report.errors().empty();
    return report;
}

}  // namespace hermes
