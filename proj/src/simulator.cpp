#include "hermes/simulator.hpp"

#include <httplib.h>

#include <chrono>
#include <mutex>
#include <set>
#include <thread>

#include "hermes/process.hpp"
#include "hermes/util.hpp"

namespace hermes {

namespace {

struct SimFile {
    std::string checksum;
    size_t size = 0;
};

struct SimVersion {
    int version_index = 1;
    json metadata = json::object();
    std::map<std::string, SimFile> files;
    std::string state = "draft";  // draft | published
    std::string pid;
};

struct SimRecord {
    std::string record_id;
    std::string concept_id;
    std::string collection;
    std::vector<SimVersion> versions;

    SimVersion& latest() { return versions.back(); }
};

json version_to_json(const SimVersion& v) {
    json files = json::array();
    for (const auto& [key, f] : v.files) {
        files.push_back(json{{"key", key}, {"checksum", f.checksum}, {"size", f.size}});
    }
    return json{{"version_index", v.version_index},
                {"state", v.state},
                {"pid", v.pid},
                {"metadata", v.metadata},
                {"files", files}};
}

}  // namespace

struct SimServer::Impl {
    TargetKind mode;
    std::string token;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    mutable std::mutex mutex;
    std::map<std::string, SimRecord> records;
    int next_concept = 1;
    std::set<std::string> consumed_faults;
    json requirements;

    Impl(TargetKind mode_, std::string token_)
        : mode(mode_), token(std::move(token_)) {
        requirements = builtin_profile_for(mode).to_json();
        setup_routes();
    }

    // -- helpers ------------------------------------------------------------

    bool authorized(const httplib::Request& req) const {
        if (mode == TargetKind::invenio_rdm) {
            std::string header = req.get_header_value("Authorization");
            return header == "Bearer " + token;
        }
        return req.get_header_value("X-Dataverse-key") == token;
    }

    // returns true when the request must fail now (consumes the fault)
    bool fault_fires(const httplib::Request& req, const std::string& step) {
        std::string directive = req.get_header_value("X-Sim-Fault");
        if (directive.empty()) return false;
        for (const auto& part : util::split(directive, ';')) {
            auto kv = util::split(util::trim(part), '=');
            if (kv.size() != 2) continue;
            if (kv[0] == "slow") {
                std::this_thread::sleep_for(std::chrono::milliseconds(std::stoi(kv[1])));
            } else if (kv[0] == "fail" && kv[1] == step) {
                if (consumed_faults.insert("fail:" + step).second) return true;
            }
        }
        return false;
    }

    bool corrupt_fires(const httplib::Request& req) {
        std::string directive = req.get_header_value("X-Sim-Fault");
        if (directive.find("corrupt=upload") == std::string::npos) return false;
        return consumed_faults.insert("corrupt:upload").second;
    }

    static void reply(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    SimRecord* find_record(const std::string& id) {
        auto it = records.find(id);
        return it == records.end() ? nullptr : &it->second;
    }

    std::string mint_pid(const SimRecord& record, int version_index) const {
        return "10.5072/sim." + record.concept_id + "." +
               std::to_string(version_index);
    }

    std::string landing_url(const SimRecord& record) const {
        std::string stem = (mode == TargetKind::invenio_rdm) ? "/records/" : "/datasets/";
        return "http://127.0.0.1:" + std::to_string(port) + stem + record.record_id;
    }

    json record_view(SimRecord& record) {
        const SimVersion* published = nullptr;
        for (const auto& v : record.versions) {
            if (v.state == "published") published = &v;
        }
        const SimVersion& current = record.versions.back();
        return json{{"id", record.record_id},
                    {"concept_id", record.concept_id},
                    {"state", current.state},
                    {"version_index", current.version_index},
                    {"pid", published ? published->pid : ""},
                    {"metadata", current.metadata},
                    {"links", json{{"self_html", landing_url(record)}}}};
    }

    // -- shared handlers ----------------------------------------------------

    void handle_create(const httplib::Request& req, httplib::Response& res,
                       const std::string& collection) {
        std::lock_guard lock(mutex);
        if (!authorized(req)) return reply(res, 401, {{"error", "invalid token"}});
        if (fault_fires(req, "draft")) {
            return reply(res, 500, {{"error", "injected fault at draft"}});
        }
        SimRecord record;
        record.concept_id = std::to_string(next_concept++);
        record.record_id = "rec-" + record.concept_id;
        record.collection = collection;
        SimVersion v;
        v.version_index = 1;
        if (!req.body.empty()) {
            json body = json::parse(req.body, nullptr, false);
            if (body.is_object() && body.contains("metadata")) {
                v.metadata = body.at("metadata");
            }
        }
        record.versions.push_back(std::move(v));
        records[record.record_id] = record;
        reply(res, 201, json{{"id", record.record_id},
                             {"concept_id", record.concept_id},
                             {"state", "draft"},
                             {"version_index", 1}});
    }

    void handle_metadata(const httplib::Request& req, httplib::Response& res,
                         const std::string& id) {
        std::lock_guard lock(mutex);
        if (!authorized(req)) return reply(res, 401, {{"error", "invalid token"}});
        SimRecord* record = find_record(id);
        if (!record) return reply(res, 404, {{"error", "no such record " + id}});
        if (fault_fires(req, "metadata")) {
            return reply(res, 500, {{"error", "injected fault at metadata"}});
        }
        if (record->latest().state == "published") {
            return reply(res, 409, {{"error", "published versions are immutable"}});
        }
        json body = json::parse(req.body, nullptr, false);
        if (!body.is_object()) {
            return reply(res, 400, {{"error", "metadata body must be a JSON object"}});
        }
        record->latest().metadata =
            body.contains("metadata") ? body.at("metadata") : body;
        reply(res, 200, record_view(*record));
    }

    void handle_upload(const httplib::Request& req, httplib::Response& res,
                       const std::string& id, const std::string& key) {
        std::lock_guard lock(mutex);
        if (!authorized(req)) return reply(res, 401, {{"error", "invalid token"}});
        SimRecord* record = find_record(id);
        if (!record) return reply(res, 404, {{"error", "no such record " + id}});
        if (fault_fires(req, "upload")) {
            return reply(res, 500, {{"error", "injected fault at upload"}});
        }
        if (record->latest().state == "published") {
            return reply(res, 409, {{"error", "published versions are immutable"}});
        }
        SimFile file;
        file.checksum = "sha256:" + util::sha256_hex(req.body);
        file.size = req.body.size();
        record->latest().files[key] = file;
        std::string reported = file.checksum;
        if (corrupt_fires(req)) {
            reported[8] = (reported[8] == '0') ? '1' : '0';
        }
        reply(res, 201, json{{"key", key},
                             {"checksum", reported},
                             {"size", file.size}});
    }

    void handle_publish(const httplib::Request& req, httplib::Response& res,
                        const std::string& id) {
        std::lock_guard lock(mutex);
        if (!authorized(req)) return reply(res, 401, {{"error", "invalid token"}});
        SimRecord* record = find_record(id);
        if (!record) return reply(res, 404, {{"error", "no such record " + id}});
        if (fault_fires(req, "publish")) {
            return reply(res, 500, {{"error", "injected fault at publish"}});
        }
        SimVersion& v = record->latest();
        if (v.state == "published") {
            return reply(res, 409, {{"error", "already published"}, {"pid", v.pid}});
        }
        v.state = "published";
        v.pid = mint_pid(*record, v.version_index);
        reply(res, 202, json{{"id", record->record_id},
                             {"pid", v.pid},
                             {"version_index", v.version_index},
                             {"links", json{{"self_html", landing_url(*record)}}}});
    }

    void handle_new_version(const httplib::Request& req, httplib::Response& res,
                            const std::string& id) {
        std::lock_guard lock(mutex);
        if (!authorized(req)) return reply(res, 401, {{"error", "invalid token"}});
        SimRecord* record = find_record(id);
        if (!record) return reply(res, 404, {{"error", "no such record " + id}});
        if (fault_fires(req, "draft")) {
            return reply(res, 500, {{"error", "injected fault at draft"}});
        }
        if (record->latest().state == "draft") {
            // resumed run: hand back the open draft instead of stacking one
            return reply(res, 200, json{{"id", record->record_id},
                                        {"concept_id", record->concept_id},
                                        {"state", "draft"},
                                        {"version_index",
                                         record->latest().version_index}});
        }
        SimVersion next;
        next.version_index = record->latest().version_index + 1;
        next.metadata = record->latest().metadata;
        record->versions.push_back(std::move(next));
        reply(res, 201, json{{"id", record->record_id},
                             {"concept_id", record->concept_id},
                             {"state", "draft"},
                             {"version_index", record->latest().version_index}});
    }

    void handle_fetch(const httplib::Request& req, httplib::Response& res,
                      const std::string& id) {
        std::lock_guard lock(mutex);
        if (!authorized(req)) return reply(res, 401, {{"error", "invalid token"}});
        SimRecord* record = find_record(id);
        if (!record) return reply(res, 404, {{"error", "no such record " + id}});
        if (fault_fires(req, "fetch")) {
            return reply(res, 500, {{"error", "injected fault at fetch"}});
        }
        reply(res, 200, record_view(*record));
    }

    json snapshot_json() const {
        std::lock_guard lock(mutex);
        json out = json::object();
        out["mode"] = to_string(mode);
        json recs = json::array();
        for (const auto& [id, record] : records) {
            json versions = json::array();
            for (const auto& v : record.versions) versions.push_back(version_to_json(v));
            recs.push_back(json{{"record_id", record.record_id},
                                {"concept_id", record.concept_id},
                                {"collection", record.collection},
                                {"versions", versions}});
        }
        out["records"] = recs;
        return out;
    }

    void setup_routes() {
        server.Get("/api/ping", [this](const httplib::Request& req,
                                       httplib::Response& res) {
            if (!authorized(req)) return reply(res, 401, {{"error", "invalid token"}});
            reply(res, 200, {{"ok", true}});
        });
        server.Get("/api/requirements",
                   [this](const httplib::Request&, httplib::Response& res) {
                       std::lock_guard lock(mutex);
                       reply(res, 200, requirements);
                   });
        server.Get("/_snapshot", [this](const httplib::Request&, httplib::Response& res) {
            reply(res, 200, snapshot_json());
        });

        if (mode == TargetKind::invenio_rdm) {
            server.Post("/api/records", [this](const httplib::Request& req,
                                               httplib::Response& res) {
                handle_create(req, res, "");
            });
            server.Put(R"(/api/records/([^/]+)/draft)",
                       [this](const httplib::Request& req, httplib::Response& res) {
                           handle_metadata(req, res, req.matches[1]);
                       });
            server.Put(R"(/api/records/([^/]+)/draft/files/([^/]+))",
                       [this](const httplib::Request& req, httplib::Response& res) {
                           handle_upload(req, res, req.matches[1], req.matches[2]);
                       });
            server.Post(R"(/api/records/([^/]+)/draft/actions/publish)",
                        [this](const httplib::Request& req, httplib::Response& res) {
                            handle_publish(req, res, req.matches[1]);
                        });
            server.Post(R"(/api/records/([^/]+)/versions)",
                        [this](const httplib::Request& req, httplib::Response& res) {
                            handle_new_version(req, res, req.matches[1]);
                        });
            server.Get(R"(/api/records/([^/]+))",
                       [this](const httplib::Request& req, httplib::Response& res) {
                           handle_fetch(req, res, req.matches[1]);
                       });
        } else {
            server.Post(R"(/api/dataverses/([^/]+)/datasets)",
                        [this](const httplib::Request& req, httplib::Response& res) {
                            handle_create(req, res, req.matches[1]);
                        });
            server.Put(R"(/api/datasets/([^/]+)/versions/draft)",
                       [this](const httplib::Request& req, httplib::Response& res) {
                           handle_metadata(req, res, req.matches[1]);
                       });
            server.Put(R"(/api/datasets/([^/]+)/files/([^/]+))",
                       [this](const httplib::Request& req, httplib::Response& res) {
                           handle_upload(req, res, req.matches[1], req.matches[2]);
                       });
            server.Post(R"(/api/datasets/([^/]+)/actions/publish)",
                        [this](const httplib::Request& req, httplib::Response& res) {
                            handle_publish(req, res, req.matches[1]);
                        });
            server.Post(R"(/api/datasets/([^/]+)/versions)",
                        [this](const httplib::Request& req, httplib::Response& res) {
                            handle_new_version(req, res, req.matches[1]);
                        });
            server.Get(R"(/api/datasets/([^/]+))",
                       [this](const httplib::Request& req, httplib::Response& res) {
                           handle_fetch(req, res, req.matches[1]);
                       });
        }
    }
};

SimServer::SimServer(TargetKind mode, std::string token)
    : impl_(std::make_unique<Impl>(mode, std::move(token))) {}

SimServer::~SimServer() { stop(); }

void SimServer::start() {
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0) {
        throw Error(ErrorKind::io, "simulator failed to bind a port");
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void SimServer::stop() {
    if (impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

int SimServer::port() const { return impl_->port; }

std::string SimServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->port);
}

TargetKind SimServer::mode() const { return impl_->mode; }

const std::string& SimServer::token() const { return impl_->token; }

json SimServer::snapshot() const { return impl_->snapshot_json(); }

void SimServer::set_requirements(json doc) {
    std::lock_guard lock(impl_->mutex);
    impl_->requirements = std::move(doc);
}

}  // namespace hermes
