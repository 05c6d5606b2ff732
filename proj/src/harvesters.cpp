#include "hermes/harvesters.hpp"

#include <yaml-cpp/yaml.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <regex>
#include <set>
#include <sstream>

#include "hermes/process.hpp"
#include "hermes/spdx.hpp"
#include "hermes/toml_lite.hpp"

namespace hermes {

namespace fs = std::filesystem;
using util::to_lower;
using util::trim;

namespace {

// ---------------------------------------------------------------------------
// discovery

bool iequal(std::string_view a, std::string_view b) {
    return to_lower(a) == to_lower(b);
}

bool is_license_filename(const std::string& name) {
    std::string stem = to_lower(name);
    auto dot = stem.find('.');
    if (dot != std::string::npos) stem = stem.substr(0, dot);
    return stem == "license" || stem == "licence" || stem == "copying";
}

std::optional<std::string> find_readme(const fs::path& unit_root) {
    // preference order keeps discovery deterministic when several exist
    static const std::array<const char*, 4> names = {"README.md", "README.rst",
                                                     "README.txt", "README"};
    for (const char* name : names) {
        if (fs::exists(unit_root / name)) return name;
    }
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(unit_root, ec)) {
        std::string fn = entry.path().filename().string();
        if (entry.is_regular_file() && iequal(fn.substr(0, 6), "readme")) return fn;
    }
    return std::nullopt;
}

std::optional<std::string> find_license_location(const fs::path& unit_root) {
    if (fs::is_directory(unit_root / "LICENSES")) return "LICENSES";
    std::vector<std::string> candidates;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(unit_root, ec)) {
        if (entry.is_regular_file() &&
            is_license_filename(entry.path().filename().string())) {
            candidates.push_back(entry.path().filename().string());
        }
    }
    if (candidates.empty()) return std::nullopt;
    std::sort(candidates.begin(), candidates.end());
    return candidates.front();
}

bool inside_git_worktree(const fs::path& unit_root) {
    fs::path dir = fs::absolute(unit_root);
    while (true) {
        if (fs::exists(dir / ".git")) return true;
        if (!dir.has_parent_path() || dir.parent_path() == dir) return false;
        dir = dir.parent_path();
    }
}

// ---------------------------------------------------------------------------
// subprocess helper for git

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    out += "'";
    return out;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_command(const std::vector<std::string>& argv) {
    std::string cmd;
    for (const auto& arg : argv) {
        if (!cmd.empty()) cmd += ' ';
        cmd += shell_quote(arg);
    }
    cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw Error(ErrorKind::io, "failed to spawn: " + argv.front());
    CommandResult result;
    std::array<char, 4096> buffer{};
    size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), n);
    }
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

CommandResult run_git(const fs::path& dir, std::vector<std::string> args) {
    std::vector<std::string> argv = {"git", "-C", dir.string()};
    argv.insert(argv.end(), args.begin(), args.end());
    return run_command(argv);
}

// ---------------------------------------------------------------------------
// YAML -> JSON

json yaml_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
            return nullptr;
        case YAML::NodeType::Scalar: {
            const std::string& raw = node.Scalar();
            // respect quoting: only plain scalars get type inference
            if (node.Tag() == "!") return raw;
            if (raw == "true") return true;
            if (raw == "false") return false;
            if (raw == "null" || raw == "~") return nullptr;
            if (!raw.empty() && raw.find_first_not_of("-0123456789") == std::string::npos) {
                try {
                    size_t pos = 0;
                    long long v = std::stoll(raw, &pos);
                    if (pos == raw.size()) return v;
                } catch (...) {
                }
            }
            return raw;
        }
        case YAML::NodeType::Sequence: {
            json arr = json::array();
            for (const auto& item : node) arr.push_back(yaml_to_json(item));
            return arr;
        }
        case YAML::NodeType::Map: {
            json obj = json::object();
            for (const auto& kv : node) {
                obj[kv.first.Scalar()] = yaml_to_json(kv.second);
            }
            return obj;
        }
        default:
            return nullptr;
    }
}

HarvestResult crosswalked(HarvestResult native, const CrosswalkTable& table) {
    CrosswalkOutput mapped = crosswalk(native, table);
    HarvestResult out;
    out.source_kind = native.source_kind;
    out.location = native.location;
    out.fields = std::move(mapped.fields);
    out.warnings = std::move(native.warnings);
    out.warnings.insert(out.warnings.end(), mapped.warnings.begin(),
                        mapped.warnings.end());
    return out;
}

json parse_json_file(const fs::path& path) {
    std::string text = util::read_file(path);
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        // re-parse with exceptions for a located message
        try {
            json::parse(text);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::parse,
                        path.filename().string() + ": " + e.what());
        }
    }
    return doc;
}

// ---------------------------------------------------------------------------
// plaintext mining rules

std::string strip_markdown_decorations(std::string heading) {
    // images first, then links: [text](url) -> text
    static const std::regex image_re(R"(!\[[^\]]*\]\([^)]*\))");
    static const std::regex link_re(R"(\[([^\]]*)\]\([^)]*\))");
    heading = std::regex_replace(heading, image_re, "");
    heading = std::regex_replace(heading, link_re, "$1");
    std::string out;
    for (char c : heading) {
        if (c == '`' || c == '*' || c == '_') continue;
        out += c;
    }
    return trim(out);
}

std::optional<std::string> first_heading(const std::vector<std::string>& lines) {
    for (size_t i = 0; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.rfind("# ", 0) == 0) {
            std::string text = strip_markdown_decorations(line.substr(2));
            if (!text.empty()) return text;
        }
        // setext style: heading underlined with = or -
        if (i + 1 < lines.size() && !line.empty()) {
            std::string under = trim(lines[i + 1]);
            if (under.size() >= 3 &&
                (under.find_first_not_of('=') == std::string::npos)) {
                std::string text = strip_markdown_decorations(line);
                if (!text.empty()) return text;
            }
        }
    }
    return std::nullopt;
}

std::vector<std::string> find_dois(const std::string& text) {
    static const std::regex doi_re(R"(10\.\d{4,9}/[^\s"'<>\)\]\},]+)");
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), doi_re);
         it != std::sregex_iterator(); ++it) {
        std::string doi = it->str();
        while (!doi.empty() && (doi.back() == '.' || doi.back() == ';')) doi.pop_back();
        if (seen.insert(doi).second) out.push_back(doi);
    }
    return out;
}

std::optional<std::string> copyright_holder(const std::string& line) {
    static const std::regex lead_re(
        R"((?:.*?)(?:copyright|\(c\)|\xc2\xa9)[\s:]*)",
        std::regex::icase);
    std::smatch m;
    if (!std::regex_search(line, m, lead_re)) return std::nullopt;
    std::string rest = line.substr(m.position(0) + m.length(0));
    // drop further markers, years and year ranges
    static const std::regex year_re(R"(\b\d{4}(\s*[-,]\s*(\d{4}|present))?\b)");
    rest = std::regex_replace(rest, year_re, "");
    static const std::regex marker_re(R"(\(c\)|\xc2\xa9|copyright)",
                                      std::regex::icase);
    rest = std::regex_replace(rest, marker_re, "");
    std::string name = util::collapse_whitespace(rest);
    while (!name.empty() && (name.front() == ',' || name.front() == '-' ||
                             name.front() == ':' || name.front() == ' ')) {
        name.erase(name.begin());
    }
    while (!name.empty() && (name.back() == '.' || name.back() == ',')) {
        name.pop_back();
    }
    name = trim(name);
    bool has_letter = std::any_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalpha(c);
    });
    if (name.size() < 4 || !has_letter) return std::nullopt;
    if (name.find("http") == 0) return std::nullopt;
    return name;
}

// ---------------------------------------------------------------------------
// manifest native extraction

void add_if_present(HarvestResult& result, const json& table,
                    std::initializer_list<const char*> keys,
                    Confidence confidence) {
    for (const char* key : keys) {
        if (table.contains(key) && !table.at(key).is_null()) {
            result.add(key, table.at(key), confidence);
        }
    }
}

HarvestResult python_project_native(const fs::path& path) {
    HarvestResult result;
    result.source_kind = SourceKind::manifest;
    result.location = path.filename().string();
    json doc = toml::parse_file(path);
    if (!doc.contains("project") || !doc.at("project").is_object()) {
        throw Error(ErrorKind::validation,
                    path.filename().string() + ": no [project] table");
    }
    const json& project = doc.at("project");
    add_if_present(result, project,
                   {"name", "version", "description", "authors", "maintainers",
                    "keywords", "dependencies"},
                   Confidence::mapped);
    if (project.contains("license")) {
        const json& lic = project.at("license");
        if (lic.is_object() && lic.contains("file")) {
            result.warnings.push_back(
                "license file reference in pyproject left to the license harvester");
        } else {
            result.add("license", lic, Confidence::mapped);
        }
    }
    if (project.contains("urls") && project.at("urls").is_object()) {
        for (const auto& [label, url] : project.at("urls").items()) {
            result.add("urls." + to_lower(label), url, Confidence::mapped);
        }
    }
    return result;
}

HarvestResult node_package_native(const fs::path& path) {
    HarvestResult result;
    result.source_kind = SourceKind::manifest;
    result.location = path.filename().string();
    json doc = parse_json_file(path);
    if (!doc.is_object()) {
        throw Error(ErrorKind::validation,
                    path.filename().string() + ": not a JSON object");
    }
    add_if_present(result, doc,
                   {"name", "version", "description", "author", "contributors",
                    "license", "keywords", "repository", "dependencies"},
                   Confidence::mapped);
    return result;
}

HarvestResult rust_crate_native(const fs::path& path) {
    HarvestResult result;
    result.source_kind = SourceKind::manifest;
    result.location = path.filename().string();
    json doc = toml::parse_file(path);
    if (!doc.contains("package") || !doc.at("package").is_object()) {
        throw Error(ErrorKind::validation,
                    path.filename().string() + ": no [package] table");
    }
    const json& package = doc.at("package");
    add_if_present(result, package,
                   {"name", "version", "description", "authors", "license",
                    "keywords", "repository"},
                   Confidence::mapped);
    if (package.contains("license-file")) {
        result.warnings.push_back(
            "license-file reference in Cargo.toml left to the license harvester");
    }
    if (doc.contains("dependencies") && doc.at("dependencies").is_object()) {
        result.add("dependencies", doc.at("dependencies"), Confidence::mapped);
    }
    return result;
}

json ptree_to_json(const boost::property_tree::ptree& tree) {
    if (tree.empty()) return json(tree.get_value<std::string>());
    json obj = json::object();
    for (const auto& [key, child] : tree) {
        if (key == "<xmlattr>") continue;
        json value = ptree_to_json(child);
        if (obj.contains(key)) {
            if (!obj.at(key).is_array()) {
                json arr = json::array();
                arr.push_back(obj.at(key));
                obj[key] = arr;
            }
            obj[key].push_back(value);
        } else {
            obj[key] = value;
        }
    }
    return obj;
}

json as_array(const json& v) {
    if (v.is_array()) return v;
    json arr = json::array();
    arr.push_back(v);
    return arr;
}

HarvestResult maven_pom_native(const fs::path& path) {
    HarvestResult result;
    result.source_kind = SourceKind::manifest;
    result.location = path.filename().string();

    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_xml(path.string(), tree,
                                       boost::property_tree::xml_parser::trim_whitespace);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::parse, path.filename().string() + ": " + e.what());
    }
    auto project_it = tree.find("project");
    if (project_it == tree.not_found()) {
        throw Error(ErrorKind::validation,
                    path.filename().string() + ": no <project> element");
    }
    json project = ptree_to_json(project_it->second);

    if (project.contains("name")) {
        result.add("name", project.at("name"), Confidence::mapped);
    } else if (project.contains("artifactId")) {
        result.add("name", project.at("artifactId"), Confidence::mapped);
    }
    add_if_present(result, project, {"version", "description", "url"},
                   Confidence::mapped);
    if (project.contains("licenses") && project.at("licenses").is_object() &&
        project.at("licenses").contains("license")) {
        json names = json::array();
        for (const auto& lic : as_array(project.at("licenses").at("license"))) {
            if (lic.is_object() && lic.contains("name")) names.push_back(lic.at("name"));
        }
        if (!names.empty()) {
            result.add("licenses.license.name",
                       names.size() == 1 ? names.front() : names, Confidence::mapped);
        }
    }
    if (project.contains("developers") && project.at("developers").is_object() &&
        project.at("developers").contains("developer")) {
        result.add("developers.developer",
                   as_array(project.at("developers").at("developer")),
                   Confidence::mapped);
    }
    if (project.contains("contributors") && project.at("contributors").is_object() &&
        project.at("contributors").contains("contributor")) {
        result.add("contributors.contributor",
                   as_array(project.at("contributors").at("contributor")),
                   Confidence::mapped);
    }
    if (project.contains("dependencies") && project.at("dependencies").is_object() &&
        project.at("dependencies").contains("dependency")) {
        result.add("dependencies.dependency",
                   as_array(project.at("dependencies").at("dependency")),
                   Confidence::mapped);
    }
    return result;
}

}  // namespace

// ---------------------------------------------------------------------------

fs::path unit_root_for(const fs::path& repo_root, const PublishUnit& unit) {
    std::optional<std::vector<std::string>> common;
    for (const auto& glob : unit.path_globs) {
        std::vector<std::string> dirs;
        for (const auto& part : util::split(glob, '/')) {
            if (part.find('*') != std::string::npos ||
                part.find('?') != std::string::npos) {
                break;
            }
            dirs.push_back(part);
        }
        // a trailing literal component may name a file, not a directory
        if (!dirs.empty() && dirs.size() == util::split(glob, '/').size()) {
            dirs.pop_back();
        }
        if (!common) {
            common = dirs;
        } else {
            size_t n = 0;
            while (n < common->size() && n < dirs.size() && (*common)[n] == dirs[n]) ++n;
            common->resize(n);
        }
    }
    fs::path root = repo_root;
    if (common) {
        for (const auto& dir : *common) root /= dir;
    }
    return root;
}

std::vector<SourceDescriptor> discover_sources(const fs::path& unit_root,
                                               const PipelineConfig& config) {
    if (!fs::is_directory(unit_root)) {
        throw Error(ErrorKind::io, "unreadable directory: " + unit_root.string());
    }
    auto enabled = [&](SourceKind kind) {
        return std::find(config.precedence.begin(), config.precedence.end(), kind) !=
               config.precedence.end();
    };

    std::vector<SourceDescriptor> found;
    auto add = [&](SourceKind kind, std::string location,
                   std::optional<ManifestDialect> dialect = std::nullopt) {
        if (!enabled(kind)) return;
        found.push_back({kind, std::move(location), source_stage(kind), dialect});
    };

    if (fs::exists(unit_root / "CITATION.cff")) add(SourceKind::cff, "CITATION.cff");
    if (fs::exists(unit_root / "codemeta.json")) add(SourceKind::codemeta, "codemeta.json");
    if (fs::exists(unit_root / ".zenodo.json")) add(SourceKind::zenodo_json, ".zenodo.json");
    if (auto license = find_license_location(unit_root)) {
        add(SourceKind::license_file, *license);
    }
    if (inside_git_worktree(unit_root)) add(SourceKind::vcs, ".");
    if (fs::exists(unit_root / ".hermes" / "platform.json")) {
        add(SourceKind::platform_api, ".hermes/platform.json");
    }

    static const std::vector<std::pair<const char*, ManifestDialect>> manifests = {
        {"pyproject.toml", ManifestDialect::python_project},
        {"package.json", ManifestDialect::node_package},
        {"Cargo.toml", ManifestDialect::rust_crate},
        {"pom.xml", ManifestDialect::maven_pom},
    };
    for (const auto& [name, dialect] : manifests) {
        if (fs::exists(unit_root / name)) add(SourceKind::manifest, name, dialect);
    }

    if (auto readme = find_readme(unit_root)) add(SourceKind::plaintext, *readme);

    std::sort(found.begin(), found.end(),
              [](const SourceDescriptor& a, const SourceDescriptor& b) {
                  if (a.stage != b.stage) return a.stage < b.stage;
                  return a.location < b.location;
              });
    return found;
}

// ---------------------------------------------------------------------------

HarvestResult harvest_cff_native(const fs::path& path) {
    HarvestResult result;
    result.source_kind = SourceKind::cff;
    result.location = path.filename().string();

    YAML::Node doc;
    try {
        doc = YAML::LoadFile(path.string());
    } catch (const YAML::Exception& e) {
        throw Error(ErrorKind::parse, path.filename().string() + ": " + e.what());
    }
    if (!doc.IsMap()) {
        throw Error(ErrorKind::validation,
                    path.filename().string() + ": CFF document is not a mapping");
    }
    for (const char* required : {"cff-version", "message", "title", "authors"}) {
        if (!doc[required]) {
            throw Error(ErrorKind::validation,
                        "CFF schema violation: missing required key '" +
                            std::string(required) + "'");
        }
    }
    std::string version = doc["cff-version"].Scalar();
    if (version.rfind("1.", 0) != 0) {
        result.warnings.push_back("unsupported cff-version " + version +
                                  ", best-effort parse");
    }
    if (doc["preferred-citation"]) {
        result.warnings.push_back("preferred-citation ignored");
    }
    for (const char* key :
         {"title", "version", "abstract", "authors", "license", "keywords",
          "repository-code", "doi", "identifiers", "date-released", "type",
          "references"}) {
        if (doc[key]) result.add(key, yaml_to_json(doc[key]), Confidence::exact);
    }
    return result;
}

HarvestResult harvest_cff(const fs::path& path) {
    return crosswalked(harvest_cff_native(path), builtin_table(SourceKind::cff));
}

HarvestResult harvest_codemeta_native(const fs::path& path) {
    HarvestResult result;
    result.source_kind = SourceKind::codemeta;
    result.location = path.filename().string();
    json doc = parse_json_file(path);
    if (!doc.is_object()) {
        throw Error(ErrorKind::validation,
                    path.filename().string() + ": not a JSON object");
    }
    if (!doc.contains("@context")) {
        result.warnings.push_back("missing @context, treated as plain CodeMeta");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key.rfind('@', 0) == 0) continue;
        result.add(key, value, Confidence::exact);
    }
    return result;
}

HarvestResult harvest_codemeta(const fs::path& path) {
    return crosswalked(harvest_codemeta_native(path),
                       builtin_table(SourceKind::codemeta));
}

HarvestResult harvest_zenodo_json_native(const fs::path& path) {
    HarvestResult result;
    result.source_kind = SourceKind::zenodo_json;
    result.location = path.filename().string();
    json doc = parse_json_file(path);
    if (!doc.is_object()) {
        throw Error(ErrorKind::validation,
                    path.filename().string() + ": not a JSON object");
    }
    if (doc.empty()) {
        result.warnings.push_back("empty metadata document");
        return result;
    }
    for (const auto& [key, value] : doc.items()) {
        result.add(key, value, Confidence::exact);
    }
    return result;
}

HarvestResult harvest_zenodo_json(const fs::path& path) {
    return crosswalked(harvest_zenodo_json_native(path),
                       builtin_table(SourceKind::zenodo_json));
}

HarvestResult harvest_manifest_native(const fs::path& path, ManifestDialect dialect) {
    switch (dialect) {
        case ManifestDialect::python_project: return python_project_native(path);
        case ManifestDialect::node_package: return node_package_native(path);
        case ManifestDialect::rust_crate: return rust_crate_native(path);
        case ManifestDialect::maven_pom: return maven_pom_native(path);
    }
    throw Error(ErrorKind::usage, "unknown manifest dialect");
}

HarvestResult harvest_manifest(const fs::path& path, ManifestDialect dialect) {
    return crosswalked(harvest_manifest_native(path, dialect),
                       builtin_manifest_table(dialect));
}

HarvestResult harvest_platform_native(const std::string& location,
                                      HttpTransport* transport) {
    HarvestResult result;
    result.source_kind = SourceKind::platform_api;
    result.location = location;

    json doc;
    if (fs::exists(location)) {
        // fixture mode: recorded response document
        doc = parse_json_file(location);
    } else if (transport) {
        HttpResponse response = transport->get(location);
        if (response.status == 404) {
            throw Error(ErrorKind::http, "repository not found: " + location);
        }
        if (response.status == 401 || response.status == 403) {
            throw Error(ErrorKind::auth,
                        "platform authentication failed for " + location);
        }
        if (!response.ok()) {
            throw Error(ErrorKind::http,
                        "platform request failed (" + std::to_string(response.status) +
                            "): " + response.body.substr(0, 200));
        }
        doc = json::parse(response.body, nullptr, false);
        if (doc.is_discarded()) {
            throw Error(ErrorKind::parse, "platform response is not JSON");
        }
    } else {
        throw Error(ErrorKind::io, "platform source unavailable: " + location);
    }

    for (const char* key : {"description", "topics", "license", "clone_url"}) {
        if (doc.contains(key) && !doc.at(key).is_null()) {
            result.add(key, doc.at(key), Confidence::mapped);
        }
    }
    return result;
}

HarvestResult harvest_platform(const std::string& location, HttpTransport* transport) {
    return crosswalked(harvest_platform_native(location, transport),
                       builtin_table(SourceKind::platform_api));
}

HarvestResult harvest_license(const fs::path& unit_root) {
    HarvestResult result;
    result.source_kind = SourceKind::license_file;
    result.location = ".";

    std::set<std::string> ids;
    // REUSE layout: LICENSES/<SPDX-id>.txt
    fs::path reuse_dir = unit_root / "LICENSES";
    if (fs::is_directory(reuse_dir)) {
        result.location = "LICENSES";
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(reuse_dir)) {
            if (!entry.is_regular_file()) continue;
            names.push_back(entry.path().filename().string());
        }
        std::sort(names.begin(), names.end());
        for (const auto& name : names) {
            std::string stem = name;
            auto dot = stem.rfind('.');
            if (dot != std::string::npos) stem = stem.substr(0, dot);
            if (spdx::valid_expression(stem)) {
                ids.insert(stem);
            } else {
                result.warnings.push_back("LICENSES entry with non-SPDX name: " + name);
            }
        }
    }

    std::vector<std::string> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(unit_root, ec)) {
        if (entry.is_regular_file() &&
            is_license_filename(entry.path().filename().string())) {
            files.push_back(entry.path().filename().string());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& name : files) {
        if (result.location == ".") result.location = name;
        std::string text = util::read_file(unit_root / name);
        if (auto match = spdx::identify_text(text)) {
            ids.insert(match->id);
        } else {
            result.warnings.push_back("unidentified license text in " + name);
        }
    }

    for (const auto& id : ids) {
        ProvenancedField f;
        f.field_path = "license";
        f.value = id;
        f.source_kind = SourceKind::license_file;
        f.location = result.location;
        f.confidence = Confidence::mapped;
        result.fields.push_back(std::move(f));
    }
    return result;
}

HarvestResult harvest_vcs(const fs::path& unit_root,
                          const std::vector<std::string>& path_globs) {
    HarvestResult result;
    result.source_kind = SourceKind::vcs;
    result.location = ".";

    auto toplevel = run_git(unit_root, {"rev-parse", "--show-toplevel"});
    if (toplevel.exit_code != 0) {
        throw Error(ErrorKind::validation,
                    "not a git repository: " + unit_root.string());
    }

    std::vector<std::string> log_args = {"log", "--reverse", "--date=iso-strict",
                                         "--format=%H\x1f%an\x1f%ae\x1f%ad"};
    bool whole_tree = path_globs.empty() ||
                      std::any_of(path_globs.begin(), path_globs.end(),
                                  [](const std::string& g) { return g == "**"; });
    if (!whole_tree) {
        log_args.push_back("--");
        for (const auto& glob : path_globs) log_args.push_back(":(glob)" + glob);
    }
    auto log = run_git(unit_root, log_args);
    if (log.exit_code != 0 || trim(log.output).empty()) {
        throw Error(ErrorKind::validation,
                    "no commits in repository: " + unit_root.string());
    }

    struct Contributor {
        Agent agent;
        std::string first_commit;
    };
    std::vector<Contributor> contributors;
    std::string last_date;
    for (const auto& line : util::split_lines(log.output)) {
        auto cols = util::split(line, '\x1f');
        if (cols.size() != 4) continue;
        Agent agent;
        agent.full_name = trim(cols[1]);
        agent.email = trim(cols[2]);
        last_date = trim(cols[3]);
        if (!agent.has_name()) continue;
        bool known = false;
        for (auto& existing : contributors) {
            if (agent_identity(existing.agent, agent)) {
                known = true;
                break;
            }
        }
        if (!known) contributors.push_back({agent, last_date});
    }
    std::stable_sort(contributors.begin(), contributors.end(),
                     [](const Contributor& a, const Contributor& b) {
                         if (a.first_commit != b.first_commit)
                             return a.first_commit < b.first_commit;
                         return a.agent.display_name() < b.agent.display_name();
                     });
    if (!contributors.empty()) {
        json agents = json::array();
        for (const auto& c : contributors) agents.push_back(c.agent.to_json());
        result.add("contributors", agents, Confidence::heuristic);
    }

    auto tags = run_git(unit_root, {"tag", "--list", "--merged", "HEAD"});
    static const std::regex version_tag_re(R"(^v?(\d+)\.(\d+)(?:\.(\d+))?$)");
    std::optional<std::tuple<int, int, int, std::string>> best;
    if (tags.exit_code == 0) {
        for (const auto& tag : util::split_lines(tags.output)) {
            std::smatch m;
            std::string t = trim(tag);
            if (!std::regex_match(t, m, version_tag_re)) continue;
            int major = std::stoi(m[1]);
            int minor = std::stoi(m[2]);
            int patch = m[3].matched ? std::stoi(m[3]) : 0;
            std::string version = t;
            if (version.front() == 'v') version = version.substr(1);
            auto candidate = std::make_tuple(major, minor, patch, version);
            if (!best || candidate > *best) best = candidate;
        }
    }
    if (best) {
        result.add("version", std::get<3>(*best), Confidence::mapped);
    } else {
        result.warnings.push_back("no version tag found");
    }

    if (!last_date.empty()) {
        if (auto iso = util::normalize_date(last_date)) {
            result.add("date_released", *iso, Confidence::heuristic);
        }
    }
    return result;
}

HarvestResult harvest_plaintext(const fs::path& unit_root) {
    HarvestResult result;
    result.source_kind = SourceKind::plaintext;
    result.location = ".";

    // BibTeX CITATION files: flagged, never parsed
    fs::path citation = unit_root / "CITATION";
    if (fs::is_regular_file(citation)) {
        std::string text = util::read_file(citation);
        if (text.find('@') != std::string::npos) {
            result.warnings.push_back("BibTeX CITATION file detected but not parsed");
        }
    }

    auto readme = find_readme(unit_root);
    if (!readme) return result;
    result.location = *readme;

    std::string text = util::read_file(unit_root / *readme);
    auto lines = util::split_lines(text);

    if (auto heading = first_heading(lines)) {
        result.add("name", *heading, Confidence::heuristic);
    }

    auto dois = find_dois(text);
    if (!dois.empty()) {
        json identifiers = json::array();
        for (const auto& doi : dois) {
            Identifier id;
            id.scheme = IdScheme::doi;
            id.value = doi;
            id.relation = IdRelation::self;
            identifiers.push_back(id.to_json());
        }
        result.add("identifiers", identifiers, Confidence::heuristic);
    }

    json authors = json::array();
    std::set<std::string> seen;
    for (const auto& line : lines) {
        if (auto holder = copyright_holder(line)) {
            if (seen.insert(*holder).second) {
                Agent agent;
                agent.full_name = *holder;
                authors.push_back(agent.to_json());
            }
        }
    }
    if (!authors.empty()) {
        result.add("authors", authors, Confidence::heuristic);
    }
    return result;
}

HarvestResult harvest_source(const fs::path& unit_root,
                             const SourceDescriptor& descriptor,
                             const std::vector<std::string>& path_globs,
                             HttpTransport* transport) {
    fs::path full = unit_root / descriptor.location;
    switch (descriptor.kind) {
        case SourceKind::cff: {
            auto r = harvest_cff(full);
            r.location = descriptor.location;
            return r;
        }
        case SourceKind::codemeta: {
            auto r = harvest_codemeta(full);
            r.location = descriptor.location;
            return r;
        }
        case SourceKind::zenodo_json: {
            auto r = harvest_zenodo_json(full);
            r.location = descriptor.location;
            return r;
        }
        case SourceKind::license_file:
            return harvest_license(unit_root);
        case SourceKind::manifest: {
            if (!descriptor.dialect) {
                throw Error(ErrorKind::usage, "manifest descriptor without dialect");
            }
            auto r = harvest_manifest(full, *descriptor.dialect);
            r.location = descriptor.location;
            return r;
        }
        case SourceKind::vcs:
            return harvest_vcs(unit_root, path_globs);
        case SourceKind::platform_api: {
            auto r = harvest_platform(full.string(), transport);
            r.location = descriptor.location;
            for (auto& f : r.fields) f.location = descriptor.location;
            return r;
        }
        case SourceKind::plaintext:
            return harvest_plaintext(unit_root);
    }
    throw Error(ErrorKind::usage, "unhandled source kind");
}

}  // namespace hermes
