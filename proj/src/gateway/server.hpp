#pragma once

#include <memory>
#include <string>
#include <thread>

#include "gateway/gateway.hpp"

namespace httplib {
class Server;
}

namespace mqsum::gateway {

// Thin HTTP facade over a Gateway.
//
//   GET  /healthz     liveness probe, {"status":"ok"}
//   GET  /v1/metrics  counters snapshot
//   POST /v1/query    {"context":..., "query":...} -> one answered pair;
//                     concurrent posts sharing a context coalesce
//   POST /v1/jobs     one job record (same shape as the dataset files),
//                     optional "policy" object overrides fallback /
//                     max_queries_per_prompt / window_ms for that job
//
// Errors come back as {"error":{"code":..., "message":...}} with 400 for
// bad input, 504 for deadline expiry and 502 for upstream failures.
class GatewayServer {
public:
    struct Config {
        std::string host = "127.0.0.1";
        int port = 0; // 0 picks a free port
    };

    GatewayServer(Config config, Gateway& gw);
    ~GatewayServer();

    GatewayServer(const GatewayServer&) = delete;
    GatewayServer& operator=(const GatewayServer&) = delete;

    // Binds, then serves on a background thread. Returns the bound port.
    int start();
    void stop();

    int port() const { return port_; }

private:
    Config config_;
    Gateway& gateway_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

} // namespace mqsum::gateway
