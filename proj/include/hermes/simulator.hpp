#pragma once

#include <memory>
#include <string>

#include "hermes/config.hpp"
#include "hermes/model.hpp"

namespace hermes {

// In-memory stand-in for an InvenioRDM- or Dataverse-style repository.
// Serves the same wire contract the deposit client consumes, plus
// GET /_snapshot for assertions and the X-Sim-Fault header for fault
// injection ("fail=<step>" fails that step once; "corrupt=upload" reports
// a wrong checksum once; "slow=<ms>" delays the response).
//
// Record ids are sequential, pids are minted only on publish as
// "10.5072/sim.<concept>.<version>", and published versions are immutable.
class SimServer {
public:
    explicit SimServer(TargetKind mode, std::string token = "test-token");
    ~SimServer();

    SimServer(const SimServer&) = delete;
    SimServer& operator=(const SimServer&) = delete;

    // Binds 127.0.0.1 on a free port and serves on a background thread.
    void start();
    void stop();

    int port() const;
    std::string base_url() const;
    TargetKind mode() const;
    const std::string& token() const;

    // Direct store access for assertions; equivalent to GET /_snapshot.
    json snapshot() const;

    // Document returned by GET /api/requirements (defaults to the built-in
    // profile of the mode).
    void set_requirements(json doc);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hermes
